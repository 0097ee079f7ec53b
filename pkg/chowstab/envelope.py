from fractions import Fraction
from functools import lru_cache

import attr
import structlog

from .exceptions import InputError, InvariantError
from .geometry import (
    Point2,
    clip_polygon,
    contains_point,
    cross,
    integrate_affine,
    left_of,
    polygon_area,
    upper_hull_3d,
)
from .polytope import lattice_points


logger = structlog.get_logger(__name__)


def _rationals(values):
    return tuple(Fraction(v) for v in values)


def _matches_lattice(instance, attribute, value):
    if len(value) != len(instance.lattice):
        raise InputError(
            f"Expected {len(instance.lattice)} heights, got {len(value)}"
        )


@attr.s(frozen=True)
class HeightVector:
    """A rational height φ(x) for every point x of a LatticeSet."""

    lattice = attr.ib()
    values = attr.ib(converter=_rationals, validator=_matches_lattice)

    @classmethod
    def zero(cls, lattice):
        return cls(lattice=lattice, values=[0] * len(lattice))

    @classmethod
    def from_function(cls, lattice, function):
        return cls(lattice=lattice, values=[function(p) for p in lattice.points])

    @classmethod
    def indicator(cls, lattice, indices):
        indices = set(indices)
        return cls(
            lattice=lattice,
            values=[int(i in indices) for i in range(len(lattice))],
        )

    def __getitem__(self, index):
        return self.values[index]

    def at(self, point):
        return self.values[self.lattice.index_of[Point2(*point)]]

    def __add__(self, other):
        return attr.evolve(
            self, values=[a + b for a, b in zip(self.values, other.values)]
        )

    def __mul__(self, factor):
        return attr.evolve(self, values=[factor * v for v in self.values])

    __rmul__ = __mul__

    def plus_affine(self, affine):
        return attr.evolve(
            self,
            values=[v + affine(p) for v, p in zip(self.values, self.lattice.points)],
        )


@attr.s(frozen=True)
class Cell:
    vertices = attr.ib(converter=tuple)
    affine = attr.ib()
    support = attr.ib(converter=tuple)


@attr.s(frozen=True)
class RegularSubdivision:
    """The linearity domains of f_φ with the affine function on each."""

    heights = attr.ib()
    cells = attr.ib(converter=tuple)

    @property
    def lattice(self):
        return self.heights.lattice

    def polygon(self, cell):
        return [self.lattice.points[i] for i in cell.vertices]

    @property
    def polygons(self):
        return [self.polygon(cell) for cell in self.cells]

    @property
    def is_affine(self):
        return len(self.cells) == 1


def _check_subdivision(subdivision):
    lattice = subdivision.lattice
    heights = subdivision.heights.values

    covered = sum(polygon_area(p) for p in subdivision.polygons)
    expected = polygon_area(lattice.dilated.vertices)
    if covered != expected:
        raise InvariantError(
            f"Envelope cells cover area {covered}, expected {expected}"
        )

    for cell in subdivision.cells:
        for point, height in zip(lattice.points, heights):
            if cell.affine(point) < height:
                raise InvariantError(
                    f"Envelope piece {cell.affine} lies below the height at {point}"
                )


@lru_cache(maxsize=4096)
def concave_envelope(phi):
    """
    The regular subdivision induced by f_φ

    Each cell is a maximal region on which f_φ is affine. The result is
    checked for domination and tiling before it is returned.
    """
    lifted = [(p.x, p.y, v) for p, v in zip(phi.lattice.points, phi.values)]
    facets = upper_hull_3d(lifted)

    subdivision = RegularSubdivision(
        heights=phi,
        cells=[
            Cell(vertices=f.vertices, affine=f.affine, support=f.support)
            for f in facets
        ],
    )
    _check_subdivision(subdivision)

    logger.debug(
        "concave envelope",
        k=phi.lattice.k,
        points=len(phi.lattice),
        cells=len(subdivision.cells),
    )
    return subdivision


def envelope_value(subdivision, point):
    """f_φ(x) read from the cell containing x."""
    point = Point2(*point)

    if not subdivision.lattice.dilated.contains(point):
        raise InputError(f"{tuple(point)} is outside domain")

    for cell in subdivision.cells:
        if contains_point(subdivision.polygon(cell), point):
            return cell.affine(point)

    raise InvariantError(f"No envelope cell contains {tuple(point)}")


def integrate_envelope(subdivision):
    """∫_{k△} f_φ over fan triangles of every cell."""
    total = Fraction(0)

    for cell in subdivision.cells:
        ring = subdivision.polygon(cell)
        apex = ring[0]
        for a, b in zip(ring[1:], ring[2:]):
            area = Fraction(cross(apex, a, b), 2)
            mean = (cell.affine(apex) + cell.affine(a) + cell.affine(b)) / 3
            total += area * mean

    return total


def integrate_envelope_over(subdivision, region):
    """∫ f_φ over a convex ccw polygon inside k△."""
    total = Fraction(0)

    for cell in subdivision.cells:
        piece = subdivision.polygon(cell)
        for a, b in zip(region, region[1:] + region[:1]):
            piece = clip_polygon(piece, left_of(a, b))
            if len(piece) < 3:
                break
        else:
            total += integrate_affine(piece, cell.affine)

    return total


def project_consistent(phi):
    """Replace φ by f_φ on the lattice points, so every point lies on the graph."""
    subdivision = concave_envelope(phi)
    return attr.evolve(
        phi,
        values=[
            min(cell.affine(p) for cell in subdivision.cells)
            for p in phi.lattice.points
        ],
    )


def is_consistent(phi):
    return project_consistent(phi) == phi


def heights_for(polytope, k, values):
    return HeightVector(lattice=lattice_points(polytope, k), values=values)
