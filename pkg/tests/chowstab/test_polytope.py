from fractions import Fraction

import pytest

from chowstab.exceptions import InputError
from chowstab.polytope import (
    Polytope2D,
    boundary_count,
    dilate,
    ehrhart,
    lattice_points,
    moments,
)

from ..factories import PolytopeFactory


def test_polytope_normalizes_vertex_order():
    polytope = Polytope2D(vertices=[(0, 1), (2, 0), (0, -1), (-2, 0), (0, 0)])

    assert polytope.vertices == ((-2, 0), (0, -1), (2, 0), (0, 1))


def test_polytope_rejects_rational_vertices():
    with pytest.raises(InputError, match="integral"):
        Polytope2D(vertices=[(0, 0), ("1/2", 0), (0, 1)])


def test_polytope_rejects_segments():
    with pytest.raises(InputError, match="affinely independent"):
        Polytope2D(vertices=[(0, 0), (1, 1), (2, 2)])


def test_polytope_membership():
    polytope = PolytopeFactory()

    assert polytope.contains((1, 0))
    assert not polytope.contains((1, 1))
    assert polytope.on_boundary((0, 1))
    assert not polytope.on_boundary((1, 0))


def test_dilate(diamond):
    assert dilate(diamond, 1) is diamond
    assert dilate(diamond, 2).vertices == ((-4, 0), (0, -2), (4, 0), (0, 2))
    assert dilate(diamond, 2).name == "X2[k=2]"


@pytest.mark.parametrize("k", [0, -1, 1.5, True])
def test_dilate_rejects_bad_k(diamond, k):
    with pytest.raises(InputError, match="positive integer"):
        dilate(diamond, k)


def test_dilate_x1(catalog):
    dilated = dilate(catalog["X1"].polytope, 3)

    assert set(dilated.vertices) == {(3, 6), (6, 3), (-9, -9)}


def test_lattice_points_diamond(diamond):
    lattice = lattice_points(diamond, 1)

    assert lattice.points == (
        (-2, 0),
        (-1, 0),
        (0, -1),
        (0, 0),
        (0, 1),
        (1, 0),
        (2, 0),
    )
    assert lattice.boundary == (True, False, True, False, True, False, True)
    assert lattice.index_of[(0, 0)] == 3


def test_lattice_points_x1(catalog):
    lattice = lattice_points(catalog["X1"].polytope, 1)

    assert len(lattice) == 7
    assert sum(p.x for p in lattice.points) == -2
    assert sum(p.y for p in lattice.points) == -2


def test_lattice_points_x4(catalog):
    lattice = lattice_points(catalog["X4"].polytope, 1)

    assert len(lattice) == 25
    assert len(lattice.boundary_indices) == 12
    assert len(lattice.interior_indices) == 13


def test_boundary_count(catalog):
    assert boundary_count(catalog["X1"].polytope) == 3
    assert boundary_count(catalog["X2"].polytope) == 4
    assert boundary_count(catalog["X3"].polytope) == 9
    assert boundary_count(catalog["X4"].polytope) == 12


def test_ehrhart_x1(catalog):
    data = ehrhart(catalog["X1"].polytope)

    assert data.vol == Fraction(9, 2)
    assert data.b == 3
    assert str(data.chi) == "chi(k) = (9k^2+3k+2)/2"


def test_ehrhart_x2(catalog):
    data = ehrhart(catalog["X2"].polytope)

    assert str(data.chi) == "chi(k) = 4k^2+2k+1"
    assert data.chi(2) == 21


def test_ehrhart_x3(catalog):
    data = ehrhart(catalog["X3"].polytope)

    assert data.vol == Fraction(27, 2)
    assert data.b == 9
    assert data.chi(1) == 19


def test_pick_identity_up_to_ten(catalog, subtests):
    for identifier, entry in catalog.items():
        data = ehrhart(entry.polytope)
        with subtests.test(polytope=identifier):
            for k in range(1, 11):
                assert len(lattice_points(entry.polytope, k)) == data.chi(k)


def test_chi_x1_symbolic(catalog):
    chi = ehrhart(catalog["X1"].polytope).chi

    assert (chi.quadratic, chi.linear, chi.constant) == (
        Fraction(9, 2),
        Fraction(3, 2),
        1,
    )


def test_moments(catalog):
    assert moments(catalog["X1"].polytope, 1) == (Fraction(9, 2), (0, 0))
    for k in range(1, 6):
        assert moments(catalog["X4"].polytope, k) == (18 * k * k, (0, 0))
