from chowstab.envelope import HeightVector
from chowstab.plotting import render_svg
from chowstab.polytope import lattice_points


def test_render_outline_and_points(diamond):
    svg = render_svg(diamond, 1)

    assert svg.startswith('<svg xmlns="http://www.w3.org/2000/svg" width="200"')
    assert 'height="120"' in svg
    assert svg.endswith("</svg>\n")
    assert svg.count('fill="grey"') == 4
    assert svg.count('fill="black"') == 3
    assert "<line" not in svg


def test_render_subdivision(diamond):
    lattice = lattice_points(diamond, 1)
    hat = HeightVector.indicator(lattice, [lattice.index_of[(0, 0)]])

    svg = render_svg(diamond, 1, hat)

    assert svg.count('stroke="red"') == 8
    # the apex sits in the middle of the picture
    assert 'cx="100.00" cy="60.00"' in svg


def test_render_is_deterministic(catalog):
    polytope = catalog["X3"].polytope

    assert render_svg(polytope, 2) == render_svg(polytope, 2)
