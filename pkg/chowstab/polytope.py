import math
from fractions import Fraction
from functools import lru_cache

import attr
import structlog

from .exceptions import InputError, InvariantError
from .geometry import Point2, convex_hull_2d, cross, polygon_area, polygon_moments
from .rational import as_rat, is_integral


logger = structlog.get_logger(__name__)

PICK_CHECK_RANGE = range(1, 6)


def normalize_vertices(vertices):
    """
    Lattice vertices as a ccw cycle starting at the lexicographic minimum

    Points which are not extreme are dropped.
    """
    points = [tuple(as_rat(c) for c in v) for v in vertices]
    if any(len(p) != 2 for p in points):
        raise InputError("Polytope vertices must be pairs of integers")

    if not all(is_integral(c) for p in points for c in p):
        raise InputError("Polytope vertices must be integral")

    hull = convex_hull_2d(points)
    if len(hull) < 3:
        raise InputError("A polytope needs three affinely independent vertices")

    return tuple(Point2(int(p.x), int(p.y)) for p in hull)


@attr.s(frozen=True)
class Polytope2D:
    vertices = attr.ib(converter=normalize_vertices)
    name = attr.ib(default=None)

    @property
    def edges(self):
        return list(zip(self.vertices, self.vertices[1:] + self.vertices[:1]))

    def contains(self, point):
        return all(cross(a, b, point) >= 0 for a, b in self.edges)

    def on_boundary(self, point):
        return self.contains(point) and any(
            cross(a, b, point) == 0 for a, b in self.edges
        )


@attr.s(frozen=True)
class LatticeSet:
    """The points of k△ ∩ ℤ² in lexicographic order."""

    polytope = attr.ib()
    k = attr.ib()
    points = attr.ib(converter=tuple)
    boundary = attr.ib(converter=tuple)
    index_of = attr.ib(eq=False, repr=False)

    def __len__(self):
        return len(self.points)

    @property
    def dilated(self):
        return dilate(self.polytope, self.k)

    @property
    def boundary_indices(self):
        return [i for i, flag in enumerate(self.boundary) if flag]

    @property
    def interior_indices(self):
        return [i for i, flag in enumerate(self.boundary) if not flag]

    @property
    def vertex_indices(self):
        return [self.index_of[v] for v in self.dilated.vertices]


@attr.s(frozen=True)
class ChiPolynomial:
    """χ(k) = quadratic·k² + linear·k + constant."""

    quadratic = attr.ib(converter=Fraction)
    linear = attr.ib(converter=Fraction)
    constant = attr.ib(converter=Fraction)

    def __call__(self, k):
        return self.quadratic * k * k + self.linear * k + self.constant

    def __str__(self):
        scale = math.lcm(
            self.quadratic.denominator,
            self.linear.denominator,
            self.constant.denominator,
        )
        terms = []
        for coefficient, power in (
            (self.quadratic, "k^2"),
            (self.linear, "k"),
            (self.constant, ""),
        ):
            value = int(coefficient * scale)
            if value == 0:
                continue
            sign = "-" if value < 0 else "+"
            digits = "" if abs(value) == 1 and power else str(abs(value))
            terms.append(f"{sign}{digits}{power}")

        body = "".join(terms).lstrip("+") or "0"
        if scale == 1:
            return f"chi(k) = {body}"
        return f"chi(k) = ({body})/{scale}"


@attr.s(frozen=True)
class EhrhartData:
    vol = attr.ib()
    b = attr.ib()
    chi = attr.ib()


def dilate(polytope, k):
    if isinstance(k, bool) or not isinstance(k, int) or k <= 0:
        raise InputError(f"Dilation must be a positive integer, got {k!r}")

    if k == 1:
        return polytope

    name = None if polytope.name is None else f"{polytope.name}[k={k}]"
    return Polytope2D(
        vertices=[(k * v.x, k * v.y) for v in polytope.vertices], name=name
    )


def boundary_count(polytope):
    """b = Σ gcd over edge vectors."""
    return sum(math.gcd(b.x - a.x, b.y - a.y) for a, b in polytope.edges)


@lru_cache(maxsize=None)
def lattice_points(polytope, k):
    """
    Enumerate k△ ∩ ℤ² with a boundary flag per point

    Scans the integer bounding box with the half-plane membership test.
    """
    dilated = dilate(polytope, k)
    xs = [v.x for v in dilated.vertices]
    ys = [v.y for v in dilated.vertices]

    points = [
        Point2(x, y)
        for x in range(min(xs), max(xs) + 1)
        for y in range(min(ys), max(ys) + 1)
        if dilated.contains((x, y))
    ]
    boundary = [dilated.on_boundary(p) for p in points]

    expected = k * boundary_count(polytope)
    if sum(boundary) != expected:
        raise InvariantError(
            f"Found {sum(boundary)} boundary points on {dilated.vertices}, "
            f"expected {expected}"
        )

    return LatticeSet(
        polytope=polytope,
        k=k,
        points=points,
        boundary=boundary,
        index_of={p: i for i, p in enumerate(points)},
    )


def ehrhart(polytope):
    vol = polygon_area(polytope.vertices)
    b = boundary_count(polytope)
    chi = ChiPolynomial(quadratic=vol, linear=Fraction(b, 2), constant=1)

    for k in PICK_CHECK_RANGE:
        count = len(lattice_points(polytope, k))
        if chi(k) != count:
            raise InvariantError(
                f"Pick verification failed at k={k}: chi={chi(k)}, counted {count}"
            )

    logger.debug("ehrhart", polytope=polytope.name, vol=str(vol), b=b)
    return EhrhartData(vol=vol, b=b, chi=chi)


def moments(polytope, k):
    """(vol(k△), ∫_{k△} x dx), exactly."""
    return polygon_moments(list(dilate(polytope, k).vertices))
