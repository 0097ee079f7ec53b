import itertools
import math
from collections import deque
from fractions import Fraction
from typing import NamedTuple

import attr
from first import first

from .exceptions import InputError


class Point2(NamedTuple):
    x: Fraction
    y: Fraction


class Point3(NamedTuple):
    x: Fraction
    y: Fraction
    z: Fraction


def cross(origin, a, b):
    """z component of (a - origin) x (b - origin); positive for a left turn."""
    return (a[0] - origin[0]) * (b[1] - origin[1]) - (a[1] - origin[1]) * (
        b[0] - origin[0]
    )


@attr.s(frozen=True)
class Affine:
    """ℓ(x) = a1·x1 + a2·x2 + c over the plane."""

    a1 = attr.ib(converter=Fraction, default=0)
    a2 = attr.ib(converter=Fraction, default=0)
    c = attr.ib(converter=Fraction, default=0)

    def __call__(self, point):
        return self.a1 * point[0] + self.a2 * point[1] + self.c

    def __add__(self, other):
        return Affine(self.a1 + other.a1, self.a2 + other.a2, self.c + other.c)

    def __sub__(self, other):
        return Affine(self.a1 - other.a1, self.a2 - other.a2, self.c - other.c)

    def __mul__(self, factor):
        return Affine(self.a1 * factor, self.a2 * factor, self.c * factor)

    __rmul__ = __mul__

    @property
    def is_constant(self):
        return self.a1 == 0 and self.a2 == 0


def affine_through(p, q, r):
    """The affine function whose graph contains three lifted points."""
    ux, uy, uz = q[0] - p[0], q[1] - p[1], q[2] - p[2]
    vx, vy, vz = r[0] - p[0], r[1] - p[1], r[2] - p[2]
    nx, ny, nz = uy * vz - uz * vy, uz * vx - ux * vz, ux * vy - uy * vx

    if nz == 0:
        raise InputError("degenerate lift")

    nz = Fraction(nz)
    return Affine(-nx / nz, -ny / nz, p[2] + (nx * p[0] + ny * p[1]) / nz)


def convex_hull_2d(points):
    """
    Extreme points of a planar set in counterclockwise order

    Monotone chain over the lexicographically sorted points; the cycle
    starts at the lexicographic minimum and collinear points are dropped.
    """
    points = sorted({Point2(*p) for p in points})

    if not points:
        raise InputError("empty point set")

    if len(points) < 3:
        return points

    def half(ordered):
        chain = []
        for p in ordered:
            while len(chain) >= 2 and cross(chain[-2], chain[-1], p) <= 0:
                chain.pop()
            chain.append(p)
        return chain

    lower = half(points)
    upper = half(reversed(points))

    return lower[:-1] + upper[:-1]


def polygon_moments(vertices):
    """
    Exact (area, ∫x dx) of a counterclockwise polygon

    Fans from vertex 0; each triangle contributes area · centroid to the
    first moment.
    """
    area = Fraction(0)
    mx = Fraction(0)
    my = Fraction(0)

    if len(vertices) < 3:
        return area, Point2(mx, my)

    v0 = vertices[0]
    for a, b in zip(vertices[1:], vertices[2:]):
        triangle = Fraction(cross(v0, a, b), 2)
        area += triangle
        mx += triangle * (v0[0] + a[0] + b[0]) / 3
        my += triangle * (v0[1] + a[1] + b[1]) / 3

    return area, Point2(mx, my)


def polygon_area(vertices):
    area, _ = polygon_moments(list(vertices))
    return abs(area)


def contains_point(vertices, point):
    """Closed membership test for a counterclockwise convex polygon."""
    n = len(vertices)
    return all(cross(vertices[i], vertices[(i + 1) % n], point) >= 0 for i in range(n))


def clip_polygon(vertices, affine):
    """Keep the part of a convex polygon where affine(x) >= 0."""
    kept = []
    n = len(vertices)

    for i in range(n):
        current, following = vertices[i], vertices[(i + 1) % n]
        here, there = affine(current), affine(following)

        if here >= 0:
            kept.append(current)

        if (here > 0 > there) or (here < 0 < there):
            t = here / (here - there)
            kept.append(
                Point2(
                    current[0] + t * (following[0] - current[0]),
                    current[1] + t * (following[1] - current[1]),
                )
            )

    deduped = []
    for p in kept:
        if not deduped or deduped[-1] != p:
            deduped.append(p)
    if len(deduped) > 1 and deduped[0] == deduped[-1]:
        deduped.pop()

    return deduped


def min_lines(lines, t):
    return min(a * t + c for a, c in lines)


def integrate_min_lines(lines, lo, hi):
    """∫ min(a·t + c) dt over [lo, hi]; the minimum is linear between crossings."""
    lines = sorted({(Fraction(a), Fraction(c)) for a, c in lines})

    breaks = {Fraction(lo), Fraction(hi)}
    for (a, c), (b, d) in itertools.combinations(lines, 2):
        if a != b and lo < (d - c) / (a - b) < hi:
            breaks.add((d - c) / (a - b))

    ordered = sorted(breaks)
    return sum(
        (t - s) * (min_lines(lines, s) + min_lines(lines, t)) / 2
        for s, t in zip(ordered, ordered[1:])
    )


def integrate_affine(vertices, affine):
    area, moment = polygon_moments(vertices)
    return affine.a1 * moment.x + affine.a2 * moment.y + affine.c * area


def integrate_min_affine(vertices, affines):
    """
    ∫ min(ℓ₁, …, ℓₘ) over a counterclockwise convex polygon

    Each ℓᵢ owns the region where it is the minimum; regions are found by
    clipping and only meet along lines, so their integrals simply add up.
    """
    pieces = sorted(set(affines), key=attr.astuple)
    total = Fraction(0)

    for i, piece in enumerate(pieces):
        region = list(vertices)
        for j, other in enumerate(pieces):
            if i == j:
                continue
            region = clip_polygon(region, other - piece)
            if len(region) < 3:
                break
        else:
            total += integrate_affine(region, piece)

    return total


@attr.s(frozen=True)
class Facet:
    """A face of an upper hull: its ccw vertex cycle and its supporting plane."""

    vertices = attr.ib(converter=tuple)
    affine = attr.ib()
    support = attr.ib(converter=tuple)


def left_of(origin, towards):
    # cross(towards - origin, x - origin) as an affine function of x
    dx = towards[0] - origin[0]
    dy = towards[1] - origin[1]
    return Affine(-dy, dx, dy * origin[0] - dx * origin[1])


def _pivot(plane, origin, towards, lifted, candidates):
    """
    Rotate `plane` about the hinge origin→towards into the half-plane on its
    left, stopping at the first lifted point it touches.
    """
    side = left_of(origin, towards)

    steepest = None
    for index in candidates:
        point = lifted[index]
        distance = side(point)
        if distance > 0:
            slope = (point.z - plane(point)) / distance
            if steepest is None or slope > steepest:
                steepest = slope

    if steepest is None:
        return None

    return plane + side * steepest


def _starting_plane(lifted, candidates, start, end):
    """A supporting plane through a boundary edge of the projected hull."""
    dx, dy = end[0] - start[0], end[1] - start[1]

    on_edge = [i for i in candidates if cross(start, end, lifted[i]) == 0]

    def along(i):
        return dx * (lifted[i].x - start[0]) + dy * (lifted[i].y - start[1])

    anchor = min(on_edge, key=along)
    slope = max(
        Fraction(lifted[i].z - lifted[anchor].z) / along(i)
        for i in on_edge
        if along(i) > 0
    )

    hinge = Affine(
        slope * dx,
        slope * dy,
        lifted[anchor].z - slope * (dx * start[0] + dy * start[1]),
    )
    return _pivot(hinge, start, end, lifted, candidates)


def upper_hull_3d(lifted):
    """
    Facets of the upper boundary of the convex hull of lifted points

    Works in 2.5D: a starting plane is fitted along a boundary edge of the
    projection, then each facet is flipped across its interior edges until
    every cell has been reached. Coplanar lifted points end up in one
    (possibly non-triangular) facet, so the output is canonical.
    """
    lifted = [Point3(*p) for p in lifted]
    if not lifted:
        raise InputError("empty point set")

    # only the highest lift over each location can touch the upper hull
    highest = {}
    for index, point in enumerate(lifted):
        location = Point2(point.x, point.y)
        if location not in highest or point.z > lifted[highest[location]].z:
            highest[location] = index

    candidates = sorted(highest.values())
    outline = convex_hull_2d(highest)
    if len(outline) < 3:
        raise InputError("degenerate lift")

    start = _starting_plane(lifted, candidates, outline[0], outline[1])

    facets = []
    seen = {start}
    queue = deque([start])
    while queue:
        plane = queue.popleft()

        support = [i for i in candidates if plane(lifted[i]) == lifted[i].z]
        ring = [highest[p] for p in convex_hull_2d(lifted[i][:2] for i in support)]
        facets.append(Facet(vertices=ring, affine=plane, support=support))

        for a, b in zip(ring, ring[1:] + ring[:1]):
            # the cell lies left of a→b, so its neighbour lies left of b→a
            neighbour = _pivot(plane, lifted[b], lifted[a], lifted, candidates)
            if neighbour is None or neighbour in seen:
                continue
            seen.add(neighbour)
            queue.append(neighbour)

    return sorted(facets, key=lambda f: [lifted[i] for i in f.vertices])


def orient3d(a, b, c, d):
    """Signed volume (times 6) of the tetrahedron abcd."""
    ux, uy, uz = b[0] - a[0], b[1] - a[1], b[2] - a[2]
    vx, vy, vz = c[0] - a[0], c[1] - a[1], c[2] - a[2]
    wx, wy, wz = d[0] - a[0], d[1] - a[1], d[2] - a[2]
    return (
        (uy * vz - uz * vy) * wx + (uz * vx - ux * vz) * wy + (ux * vy - uy * vx) * wz
    )


def _normal(p, q, r):
    ux, uy, uz = q[0] - p[0], q[1] - p[1], q[2] - p[2]
    vx, vy, vz = r[0] - p[0], r[1] - p[1], r[2] - p[2]
    return (uy * vz - uz * vy, uz * vx - ux * vz, ux * vy - uy * vx)


def _dot(u, v):
    return u[0] * v[0] + u[1] * v[1] + u[2] * v[2]


@attr.s(frozen=True)
class HullFacet3D:
    """Outward normal n and offset h with n·x <= h on the hull."""

    normal = attr.ib(converter=tuple)
    offset = attr.ib()
    vertices = attr.ib(converter=tuple)


@attr.s(frozen=True)
class ConvexHull3D:
    facets = attr.ib(converter=tuple)
    interior = attr.ib()
    bounds = attr.ib()

    @property
    def volume(self):
        total = Fraction(0)
        for facet in self.facets:
            v0 = facet.vertices[0]
            for a, b in zip(facet.vertices[1:], facet.vertices[2:]):
                total += abs(orient3d(self.interior, v0, a, b))
        return total / 6

    def contains(self, point):
        return all(_dot(f.normal, point) <= f.offset for f in self.facets)

    def lattice_points(self):
        """Every integer point of the closed hull, by scanning its bounding box."""
        (lx, ly, lz), (hx, hy, hz) = self.bounds
        return [
            Point3(x, y, z)
            for x in range(math.floor(lx), math.ceil(hx) + 1)
            for y in range(math.floor(ly), math.ceil(hy) + 1)
            for z in range(math.floor(lz), math.ceil(hz) + 1)
            if self.contains((x, y, z))
        ]


def _plane_facet(points, p, q, r, interior):
    normal = _normal(p, q, r)
    if _dot(normal, interior) - _dot(normal, p) > 0:
        normal = tuple(-n for n in normal)
    offset = _dot(normal, p)

    on_plane = [s for s in points if _dot(normal, s) == offset]

    # drop an axis the normal is not orthogonal to, giving an injective projection
    axis = first(range(3), key=lambda i: normal[i] != 0)
    kept = [i for i in range(3) if i != axis]
    by_shadow = {Point2(s[kept[0]], s[kept[1]]): s for s in on_plane}
    ring = [by_shadow[p] for p in convex_hull_2d(by_shadow)]

    scale = abs(normal[axis])
    key = (tuple(Fraction(n) / scale for n in normal), Fraction(offset) / scale)
    return key, HullFacet3D(normal=normal, offset=offset, vertices=ring)


def _first_facet(points):
    lowest = min(p.z for p in points)
    floor = [p for p in points if p.z == lowest]
    shadow = convex_hull_2d(p[:2] for p in floor)
    if len(shadow) >= 3:
        p, q, r = (first(floor, key=lambda s: s[:2] == v) for v in shadow[:3])
        return p, q, r

    # the lexicographic minimum is a vertex, so some facet through it exists
    origin = points[0]
    for q in points[1:]:
        for r in points[1:]:
            if _normal(origin, q, r) == (0, 0, 0):
                continue
            sides = [orient3d(origin, q, r, s) for s in points]
            if all(o <= 0 for o in sides) or all(o >= 0 for o in sides):
                return origin, q, r

    raise InputError("degenerate hull")


def _wrap(p, q, r, points, interior):
    """Gift-wrap across edge pq of the facet spanned by p, q, r."""
    if orient3d(p, q, r, interior) < 0:
        p, q = q, p

    candidate = r
    for s in points:
        if orient3d(p, q, candidate, s) > 0:
            candidate = s

    return p, q, candidate


def convex_hull_3d(points):
    """
    Exact 3D convex hull by gift wrapping

    Coplanar points are merged into one polygonal facet. The hull must be
    full dimensional.
    """
    points = sorted({Point3(*p) for p in points})
    if len(points) < 4:
        raise InputError("degenerate hull")

    a, b = points[0], points[1]
    c = first(points, key=lambda s: _normal(a, b, s) != (0, 0, 0))
    d = None if c is None else first(points, key=lambda s: orient3d(a, b, c, s) != 0)
    if d is None:
        raise InputError("degenerate hull")

    interior = Point3(*(Fraction(a[i] + b[i] + c[i] + d[i], 4) for i in range(3)))

    key, facet = _plane_facet(points, *_first_facet(points), interior)
    facets = {key: facet}
    queue = deque([facet])
    while queue:
        facet = queue.popleft()
        ring = facet.vertices
        for i, (u, v) in enumerate(zip(ring, ring[1:] + ring[:1])):
            w = ring[(i + 2) % len(ring)]
            neighbour_key, neighbour = _plane_facet(
                points, *_wrap(u, v, w, points, interior), interior
            )
            if neighbour_key in facets:
                continue
            facets[neighbour_key] = neighbour
            queue.append(neighbour)

    bounds = (
        tuple(min(p[i] for p in points) for i in range(3)),
        tuple(max(p[i] for p in points) for i in range(3)),
    )
    ordered = [facets[k] for k in sorted(facets)]
    return ConvexHull3D(facets=ordered, interior=interior, bounds=bounds)
