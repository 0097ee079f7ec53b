from fractions import Fraction

import pytest

from chowstab.chow import (
    barycenter_test,
    chow_terms,
    chow_weight,
    chow_weight_oracle,
    configuration_polytope,
    discrete_barycenter,
    interval_chow_weight,
)
from chowstab.envelope import HeightVector, project_consistent
from chowstab.exceptions import InputError
from chowstab.geometry import Affine, Point2
from chowstab.polytope import lattice_points
from chowstab.symmetry import act

from ..factories import HeightVectorFactory


@pytest.fixture
def hat(diamond):
    lattice = lattice_points(diamond, 1)
    return HeightVector.indicator(lattice, [lattice.index_of[(0, 0)]])


def test_discrete_barycenter_x1(catalog):
    lattice = lattice_points(catalog["X1"].polytope, 1)

    assert discrete_barycenter(lattice) == Point2(Fraction(-2, 7), Fraction(-2, 7))


def test_barycenter_test_x1_fails_for_every_k(catalog):
    for k in range(1, 6):
        report = barycenter_test(catalog["X1"].polytope, k)
        expected = Fraction(-4 * k, 9 * k * k + 3 * k + 2)

        assert report.continuous == Point2(0, 0)
        assert report.mismatch == Point2(expected, expected)
        assert not report.passes


def test_barycenter_test_passes_for_symmetric_polytopes(catalog, subtests):
    for name in ("X2", "X3", "X4"):
        with subtests.test(polytope=name):
            for k in (1, 2, 3):
                assert barycenter_test(catalog[name].polytope, k).passes


def test_chow_weight_linear_on_x1(catalog):
    polytope = catalog["X1"].polytope
    phi = HeightVector.from_function(lattice_points(polytope, 1), Affine(-1, -1, 0))

    value = chow_weight(polytope, 1, phi)

    assert value.j == Fraction(-4, 7)
    assert value.normalized_leading_coefficient == 6 * Fraction(9, 2) * value.j


def test_chow_weight_hat(diamond, hat):
    value = chow_weight(diamond, 1, hat)

    assert value.j == Fraction(1, 21)
    assert value.normalized_leading_coefficient == 6 * 4 * Fraction(1, 21)
    assert chow_weight(diamond, 1, project_consistent(hat)).j == Fraction(1, 21)


def test_chow_weight_rejects_other_lattice(diamond, hat):
    with pytest.raises(InputError, match="different lattice"):
        chow_weight(diamond, 2, hat)


def test_configuration_polytope_of_doubled_hat(diamond, hat):
    phi = 2 * project_consistent(hat)

    configuration = configuration_polytope(diamond, 1, phi)

    assert configuration.volume == Fraction(8, 3)
    assert configuration.lattice_count == 11


def test_oracle_doubled_hat(diamond, hat):
    phi = 2 * project_consistent(hat)

    assert chow_weight_oracle(diamond, 1, phi).j == Fraction(2, 21)


def test_oracle_rejects_negative_heights(diamond, hat):
    with pytest.raises(InputError, match="nonnegative integral"):
        chow_weight_oracle(diamond, 1, -1 * hat)


def test_oracle_rejects_inconsistent_heights(diamond, hat):
    with pytest.raises(InputError, match="consistent"):
        chow_weight_oracle(diamond, 1, hat)


def test_oracle_agrees_on_random_heights(catalog, subtests):
    for name in ("X1", "X2", "X3", "X4"):
        polytope = catalog[name].polytope
        for k in (1, 2):
            with subtests.test(polytope=name, k=k):
                for _ in range(100):
                    phi = HeightVectorFactory(polytope=name, k=k, consistent=True)
                    oracle = chow_weight_oracle(polytope, k, phi)
                    assert oracle.j == chow_weight(polytope, k, phi).j


def test_configuration_polytope_matches_the_envelope(catalog, subtests):
    for name in ("X1", "X2", "X3", "X4"):
        polytope = catalog[name].polytope
        with subtests.test(polytope=name):
            for _ in range(20):
                phi = HeightVectorFactory(polytope=name, k=2, consistent=True)
                if sum(phi.values) == 0:
                    continue
                _, integral, chi, total = chow_terms(phi)

                configuration = configuration_polytope(polytope, 2, phi)

                assert configuration.volume == integral
                assert configuration.lattice_count - chi == total


def test_invariance(catalog, subtests):
    for name in ("X2", "X3", "X4"):
        entry = catalog[name]
        with subtests.test(polytope=name):
            for _ in range(100):
                phi = HeightVectorFactory(polytope=name, k=1)
                j = chow_weight(entry.polytope, 1, phi).j

                shifted = phi.plus_affine(Affine(1, -2, 3))
                assert chow_weight(entry.polytope, 1, shifted).j == j

                for element in entry.weyl.elements:
                    moved = act(element, phi)
                    assert chow_weight(entry.polytope, 1, moved).j == j

                for c in (0, Fraction(1, 2), 3):
                    scaled = chow_weight(entry.polytope, 1, c * phi).j
                    assert scaled == c * j


def test_interval_chow_weight_tent():
    # min(t, 2 - t) on [0, 2]
    lines = [(1, 0), (-1, 2)]

    assert interval_chow_weight(lines, 2) == Fraction(1, 2) - Fraction(1, 3)


def test_interval_chow_weight_of_a_line_vanishes():
    assert interval_chow_weight([(2, 1)], 5) == 0


def test_long_vertices_give_negative_weight(diamond):
    lattice = lattice_points(diamond, 1)
    phi = HeightVector.indicator(
        lattice, [lattice.index_of[(2, 0)], lattice.index_of[(-2, 0)]]
    )

    # f = 1 - |y| lifts (±1,0) and the origin to 1
    assert chow_weight(diamond, 1, phi).j == Fraction(-1, 21)
