import math
import random
from collections import Counter
from fractions import Fraction

import attr
import structlog

from . import settings
from .chow import discrete_barycenter, interval_chow_weight
from .envelope import (
    HeightVector,
    concave_envelope,
    integrate_envelope,
    integrate_envelope_over,
)
from .exceptions import InputError
from .geometry import (
    Affine,
    Point2,
    integrate_min_affine,
    min_lines,
    polygon_area,
)
from .polytope import ehrhart, lattice_points
from .rational import format_rat
from .symmetry import apply, determinant, multiply, order, orbits, symmetrize


logger = structlog.get_logger(__name__)

T_TRAP = "T-trap"
S_TRAP = "s-trap"
S_TRAP1 = "s-trap1"
B_PLUS_2 = "b+2"
DELTA_TABLE = "delta-table"
X2_CHAIN = "x2-chain"
X1_CLOSED_FORM = "x1-closed-form"
P1_INEQUALITY = "p1-inequality"

PASS = "pass"
FAIL = "fail"

LAMBDAS = (Fraction(0), Fraction(1, 4), Fraction(1, 2), Fraction(3, 4), Fraction(1))

# sign flips of △₂ = Conv{(±2,0),(0,±1)}
SIGN_FLIPS = (
    ((1, 0), (0, 1)),
    ((-1, 0), (0, 1)),
    ((1, 0), (0, -1)),
    ((-1, 0), (0, -1)),
)


def _status_matches_witness(instance, attribute, value):
    if (instance.status == PASS) != (value is None):
        raise ValueError("A report passes exactly when it has no witness")


@attr.s(frozen=True)
class DeltaTable:
    """(δ̃_k − η) on the five classes of points of k△₂, p ≠ 0."""

    k = attr.ib()
    interior = attr.ib(converter=Fraction)
    generic_boundary = attr.ib(converter=Fraction)
    long_vertex = attr.ib(converter=Fraction)
    near_short_vertex = attr.ib(converter=Fraction)
    short_vertex = attr.ib(converter=Fraction)

    @property
    def entries(self):
        return (
            self.interior,
            self.generic_boundary,
            self.long_vertex,
            self.near_short_vertex,
            self.short_vertex,
        )

    @property
    def nonnegative(self):
        return all(v >= 0 for v in self.entries)


@attr.s(frozen=True)
class EstimateReport:
    estimate = attr.ib()
    parameters = attr.ib(factory=dict)
    status = attr.ib(default=PASS)
    witness = attr.ib(default=None, validator=_status_matches_witness)
    seed = attr.ib(default=None)
    details = attr.ib(factory=dict)
    delta_table = attr.ib(default=None)

    @property
    def passed(self):
        return self.status == PASS


@attr.s(frozen=True)
class ConcaveSample:
    """g = min of affine pieces; concave by construction."""

    pieces = attr.ib(converter=tuple)

    def __call__(self, point):
        return min(piece(point) for piece in self.pieces)

    def integrate(self, polygon):
        return integrate_min_affine(polygon, self.pieces)

    def is_affine_on(self, polygon):
        """True when a single piece is the minimum on the whole polygon."""
        return any(
            all(other(v) >= piece(v) for other in self.pieces for v in polygon)
            for piece in self.pieces
        )

    def to_json(self):
        return [[format_rat(v) for v in attr.astuple(p)] for p in self.pieces]


def random_concave(rng, low=-5, high=5):
    return ConcaveSample(
        pieces=[
            Affine(*(rng.randint(low, high) for _ in range(3)))
            for _ in range(rng.randint(3, 6))
        ]
    )


def concave_heights(rng, lattice, count, partition=None):
    """
    Consistent heights from random concave functions

    Each sample is a restriction of a concave g, averaged over orbits when a
    partition is given, then shifted so its minimum over the vertices of k△
    is 0.
    """
    vertices = lattice.vertex_indices
    samples = []

    for _ in range(count):
        phi = HeightVector.from_function(lattice, random_concave(rng))
        if partition is not None:
            phi = symmetrize(phi, None, partition)
        lowest = min(phi[i] for i in vertices)
        samples.append(phi.plus_affine(Affine(0, 0, -lowest)))

    return samples


def _heights_witness(phi):
    return {
        "heights": [
            {"x": [p.x, p.y], "v": format_rat(v)}
            for p, v in zip(phi.lattice.points, phi.values)
        ]
    }


def _inequality_witness(phi, lhs, rhs):
    return dict(_heights_witness(phi), lhs=format_rat(lhs), rhs=format_rat(rhs))


def _report(estimate, parameters, seed, witness=None, **extra):
    status = PASS if witness is None else FAIL
    report = EstimateReport(
        estimate=estimate,
        parameters=parameters,
        status=status,
        witness=witness,
        seed=seed,
        **extra,
    )
    logger.info("estimate checked", estimate=estimate, status=status, **parameters)
    return report


def check_t_trap(triangle, samples, seed=None):
    """(1/vol T)∫_T g >= mean of g at the vertices, equality exactly for affine g."""
    triangle = [Point2(*v) for v in triangle]
    area = polygon_area(triangle)
    if area == 0:
        raise InputError("T-trap needs a nondegenerate triangle")

    # keep a ccw cycle for clipping
    if (triangle[1].x - triangle[0].x) * (triangle[2].y - triangle[0].y) < (
        triangle[1].y - triangle[0].y
    ) * (triangle[2].x - triangle[0].x):
        triangle = [triangle[0], triangle[2], triangle[1]]

    parameters = {
        "triangle": [[v.x, v.y] for v in triangle],
        "samples": len(samples),
    }
    equalities = 0

    for sample in samples:
        lhs = sample.integrate(triangle) / area
        rhs = sum(sample(v) for v in triangle) / 3
        affine = sample.is_affine_on(triangle)
        equalities += lhs == rhs

        if lhs < rhs or (lhs == rhs) != affine:
            witness = {
                "pieces": sample.to_json(),
                "lhs": format_rat(lhs),
                "rhs": format_rat(rhs),
            }
            return _report(T_TRAP, parameters, seed, witness)

    return _report(T_TRAP, parameters, seed, details={"equalities": equalities})


def t0_triangle(k):
    """Conv{(0,0), (2,k−1), (0,k)}."""
    return [Point2(0, 0), Point2(2, k - 1), Point2(0, k)]


def rotation_of(group):
    """The orientation-preserving element of largest order, first in sort order."""
    rotations = [w for w in group if determinant(w) == 1]
    top = max(order(w) for w in rotations)
    return min(w for w in rotations if order(w) == top)


def standard_triangles(n):
    """The unimodular triangulation of Conv{0, (n,0), (0,n)} by the unit grid."""
    lower = [
        ((i, j), (i + 1, j), (i, j + 1))
        for i in range(n)
        for j in range(n - i)
    ]
    upper = [
        ((i + 1, j), (i + 1, j + 1), (i, j + 1))
        for i in range(n)
        for j in range(n - i - 1)
    ]
    return lower + upper


def _transform(matrix, shift, triangle):
    return tuple(
        Point2(*(a + b for a, b in zip(apply(matrix, v), shift))) for v in triangle
    )


def basic_triangulation(polytope, k, rotation):
    """
    Tile k△ by the images under a rotation of the standard triangulation of
    one sector Conv{0, v, σv}
    """
    dilated = lattice_points(polytope, k).dilated
    vertices = list(dilated.vertices)
    v = vertices[0]
    w = apply(rotation, v)

    if w not in vertices:
        raise InputError(f"{rotation} does not map the vertex {tuple(v)} to a vertex")

    size = math.gcd(v.x, v.y, w.x, w.y)

    sector = ((v.x // size, w.x // size), (v.y // size, w.y // size))
    if abs(determinant(sector)) != 1:
        raise InputError("The rotation sector is not unimodular")

    triangles = []
    power = ((1, 0), (0, 1))
    for _ in range(order(rotation)):
        step = multiply(power, sector)
        triangles += [_transform(step, (0, 0), t) for t in standard_triangles(size)]
        power = multiply(rotation, power)

    return triangles


def x2_triangulation(k):
    """
    The triangulation of k△₂ used for the X₂ chain

    The first quadrant splits into △00 = Conv{0,(k,0),(0,k)} with its
    standard triangulation and △01 = Conv{(k,0),(2k,0),(0,k)}, which gets
    the same triangulation moved by x ↦ Ax + (k,0), A = [[1,−1],[0,1]].
    The quadrant is then reflected by the sign flips.
    """
    transport = ((1, -1), (0, 1))
    quadrant = [_transform(((1, 0), (0, 1)), (0, 0), t) for t in standard_triangles(k)]
    quadrant += [_transform(transport, (k, 0), t) for t in standard_triangles(k)]

    return [
        _transform(flip, (0, 0), t) for flip in SIGN_FLIPS for t in quadrant
    ]


def incidences(triangles):
    return Counter(v for triangle in triangles for v in triangle)


def _check_tiling(lattice, triangles):
    area = sum(polygon_area(t) for t in triangles)
    expected = polygon_area(lattice.dilated.vertices)
    outside = [v for t in triangles for v in t if v not in lattice.index_of]
    return area == expected and not outside


def _incidence_witness(lattice, counts, expected):
    for point in lattice.points:
        if point in expected and counts[point] != expected[point]:
            return {
                "point": [point.x, point.y],
                "incidence": counts[point],
                "expected": expected[point],
            }
    return None


def s_trap_incidences(lattice, rotation_order):
    """Expected incidences: 6 inside, 3 on edges, ord(σ) at the origin."""
    vertices = set(lattice.dilated.vertices)
    expected = {}
    for point, on_boundary in zip(lattice.points, lattice.boundary):
        if point in vertices:
            continue
        if point == (0, 0):
            expected[point] = rotation_order
        else:
            expected[point] = 3 if on_boundary else 6
    return expected


def x2_incidences(lattice):
    k = lattice.k
    expected = {}
    for point, on_boundary in zip(lattice.points, lattice.boundary):
        expected[point] = 3 if on_boundary else 6
    for point in [(k, 0), (-k, 0), (0, 0), (0, k), (0, -k)]:
        expected[Point2(*point)] = 4
    for point in [(2 * k, 0), (-2 * k, 0)]:
        expected[Point2(*point)] = 2
    return expected


def check_s_trap(polytope, group, k, samples, seed=None):
    """
    ∫_{k△} g >= Σ_interior g + ½Σ_boundary g − α·g(0), α = (6 − ord σ)/6

    Samples must vanish on the vertices of k△. The incidence counts of the
    basic triangulation behind the estimate are checked first.
    """
    lattice = lattice_points(polytope, k)
    rotation = rotation_of(group)
    rotation_order = order(rotation)
    alpha = Fraction(6 - rotation_order, 6)

    parameters = {"polytope": polytope.name, "k": k, "samples": len(samples)}
    details = {"alpha": format_rat(alpha), "rotation_order": rotation_order}

    triangles = basic_triangulation(polytope, k, rotation)
    if not _check_tiling(lattice, triangles):
        witness = {"tiling": "rotated sectors do not tile k*Delta"}
        return _report(S_TRAP, parameters, seed, witness, details=details)

    witness = _incidence_witness(
        lattice, incidences(triangles), s_trap_incidences(lattice, rotation_order)
    )
    if witness is not None:
        return _report(S_TRAP, parameters, seed, witness, details=details)

    if any(phi[i] != 0 for phi in samples for i in lattice.vertex_indices):
        raise InputError("s-trap samples must vanish on the vertices of k*Delta")

    origin = lattice.index_of[Point2(0, 0)]
    for phi in samples:
        lhs = integrate_envelope(concave_envelope(phi))
        rhs = (
            sum((phi[i] for i in lattice.interior_indices), Fraction(0))
            + sum((phi[i] for i in lattice.boundary_indices), Fraction(0)) / 2
            - alpha * phi[origin]
        )
        if lhs < rhs:
            witness = _inequality_witness(phi, lhs, rhs)
            return _report(S_TRAP, parameters, seed, witness, details=details)

    return _report(S_TRAP, parameters, seed, details=details)


def delta_k(lattice):
    """δ_k: 1 at the origin, −1/6 at (0,±k), 1/6 at (±2k,0), 0 elsewhere."""
    k = lattice.k
    values = {
        Point2(0, 0): Fraction(1),
        Point2(0, k): Fraction(-1, 6),
        Point2(0, -k): Fraction(-1, 6),
        Point2(2 * k, 0): Fraction(1, 6),
        Point2(-2 * k, 0): Fraction(1, 6),
    }
    return HeightVector.from_function(lattice, lambda p: values.get(p, 0))


def _x2_samples(k, count, seed):
    from .catalog import get_entry

    entry = get_entry("X2")
    lattice = lattice_points(entry.polytope, k)
    partition = orbits(entry.weyl, lattice)
    rng = random.Random(seed)
    return entry, lattice, concave_heights(rng, lattice, count, partition)


def s_trap1_holds(phi, delta):
    """Σ g − ∫g <= ½Σ_∂ g + Σ δ_k g."""
    lattice = phi.lattice
    lhs = sum(phi.values) - integrate_envelope(concave_envelope(phi))
    rhs = sum((phi[i] for i in lattice.boundary_indices), Fraction(0)) / 2 + sum(
        d * v for d, v in zip(delta.values, phi.values)
    )
    return lhs <= rhs, lhs, rhs


def b_plus_2_holds(phi, delta):
    """
    (b+2)|W₂|/(2b·vol T₀)·Σᵢ∫_{Tᵢ} g >= ½Σ_∂ g + Σ δ_k g

    Tᵢ = Conv(0, aᵢ, aᵢ₊₁) with aᵢ = (2i, k−i) fans out the first quadrant.
    """
    lattice = phi.lattice
    k = lattice.k
    b = len(lattice.boundary_indices)
    subdivision = concave_envelope(phi)

    corners = [Point2(2 * i, k - i) for i in range(k + 1)]
    fans = [[Point2(0, 0), corners[i + 1], corners[i]] for i in range(k)]
    total = sum(
        (integrate_envelope_over(subdivision, fan) for fan in fans), Fraction(0)
    )

    lhs = Fraction((b + 2) * len(SIGN_FLIPS), 2 * b * polygon_area(fans[0])) * total
    rhs = sum((phi[i] for i in lattice.boundary_indices), Fraction(0)) / 2 + sum(
        d * v for d, v in zip(delta.values, phi.values)
    )
    return lhs >= rhs, lhs, rhs


def _check_samples(estimate, holds, k, count, seed):
    seed = settings.SEED if seed is None else seed
    _, lattice, samples = _x2_samples(k, count, seed)
    delta = delta_k(lattice)
    parameters = {"polytope": "X2", "k": k, "samples": count}

    for phi in samples:
        ok, lhs, rhs = holds(phi, delta)
        if not ok:
            witness = _inequality_witness(phi, lhs, rhs)
            return _report(estimate, parameters, seed, witness)

    return _report(estimate, parameters, seed)


def check_s_trap1(k, samples=100, seed=None):
    return _check_samples(S_TRAP1, s_trap1_holds, k, samples, seed)


def check_b_plus_2(k, samples=100, seed=None):
    return _check_samples(B_PLUS_2, b_plus_2_holds, k, samples, seed)


def delta_table_expanded(k):
    """(δ̃_k − η) from the weighted incidences, with b = 4k left unsimplified."""
    b = 4 * k
    weight = Fraction(b + 2, 2 * b)
    half, sixth, third = Fraction(1, 2), Fraction(1, 6), Fraction(1, 3)
    two_thirds = Fraction(2, 3)
    return DeltaTable(
        k=k,
        interior=0,
        generic_boundary=half - weight * two_thirds,
        long_vertex=(half + sixth) - weight * two_thirds,
        near_short_vertex=half - weight * (two_thirds + sixth),
        short_vertex=(half - sixth)
        - weight * (two_thirds + (Fraction(2, 3 * k) - third)),
    )


def delta_table_closed_form(k):
    return DeltaTable(
        k=k,
        interior=0,
        generic_boundary=Fraction(1, 6) - Fraction(1, 6 * k),
        long_vertex=Fraction(1, 3) - Fraction(1, 6 * k),
        near_short_vertex=Fraction(1, 12) - Fraction(5, 24 * k),
        short_vertex=Fraction(1, 6) - Fraction(5, 12 * k) - Fraction(1, 6 * k * k),
    )


def scan_delta_tables(k_max=50):
    """
    DeltaTables for k = 1..k_max and the least k from which every entry
    stays nonnegative up to k_max

    Raises if the two derivations ever disagree.
    """
    tables = []
    for k in range(1, k_max + 1):
        expanded, closed = delta_table_expanded(k), delta_table_closed_form(k)
        if expanded != closed:
            raise InputError(f"DeltaTable derivations disagree at k={k}")
        tables.append(closed)

    threshold = None
    for table in reversed(tables):
        if not table.nonnegative:
            break
        threshold = table.k

    return tables, threshold


def lambda_family_holds(phi, lam):
    """g(0,k−1) >= λ·g(2,k−1) + (1−λ)·((k−1)/k)·g(0,k)."""
    k = phi.lattice.k
    return phi.at((0, k - 1)) >= lam * phi.at((2, k - 1)) + (1 - lam) * Fraction(
        k - 1, k
    ) * phi.at((0, k))


def check_x2_chain(k, samples=100, seed=None):
    """
    The whole X₂ argument at one k: δ_k, the triangulation incidences,
    (s-trap1), (b+2), the DeltaTable and its threshold
    """
    seed = settings.SEED if seed is None else seed
    entry, lattice, heights = _x2_samples(k, samples, seed)
    delta = delta_k(lattice)
    tables, threshold = scan_delta_tables()
    table = delta_table_closed_form(k)

    parameters = {"polytope": "X2", "k": k, "samples": samples}
    details = {
        "delta_sum": format_rat(sum(delta.values)),
        "threshold": threshold,
        "lambda_family": {
            format_rat(lam): sum(lambda_family_holds(phi, lam) for phi in heights)
            for lam in LAMBDAS
        },
    }

    def done(witness=None):
        return _report(
            X2_CHAIN, parameters, seed, witness, details=details, delta_table=table
        )

    if sum(delta.values) != 1:
        return done({"delta_sum": format_rat(sum(delta.values))})

    triangles = x2_triangulation(k)
    if not _check_tiling(lattice, triangles):
        return done({"tiling": "the X2 triangulation does not tile k*Delta_2"})

    witness = _incidence_witness(lattice, incidences(triangles), x2_incidences(lattice))
    if witness is not None:
        return done(witness)

    for name, holds in ((S_TRAP1, s_trap1_holds), (B_PLUS_2, b_plus_2_holds)):
        for phi in heights:
            ok, lhs, rhs = holds(phi, delta)
            if not ok:
                return done(
                    dict(
                        _heights_witness(phi),
                        estimate=name,
                        lhs=format_rat(lhs),
                        rhs=format_rat(rhs),
                    )
                )

    return done()


def check_delta_table(k_max=50):
    tables, threshold = scan_delta_tables(k_max)
    details = {
        "threshold": threshold,
        "tables": {
            str(t.k): [format_rat(v) for v in t.entries] for t in tables
        },
    }
    return _report(DELTA_TABLE, {"k_max": k_max}, None, details=details)


def x1_barycenter_closed_form(k):
    value = Fraction(-4 * k, 9 * k * k + 3 * k + 2)
    return Point2(value, value)


def check_x1_closed_form(k_max=20):
    """
    Brute-force barycenters of k△₁ against 4(−k,−k)/(9k²+3k+2), with
    χ(k) = (9k²+3k+2)/2 and −m = 2k/χ(k)
    """
    from .catalog import get_entry

    polytope = get_entry("X1").polytope
    chi = ehrhart(polytope).chi
    parameters = {"polytope": "X1", "k_max": k_max}

    for k in range(1, k_max + 1):
        barycenter = discrete_barycenter(lattice_points(polytope, k))
        count = len(lattice_points(polytope, k))
        closed = x1_barycenter_closed_form(k)

        if (
            barycenter != closed
            or chi(k) != Fraction(9 * k * k + 3 * k + 2, 2)
            or count != chi(k)
            or -barycenter.x != Fraction(2 * k) / chi(k)
        ):
            witness = {
                "k": k,
                "barycenter": [format_rat(barycenter.x), format_rat(barycenter.y)],
                "expected": [format_rat(closed.x), format_rat(closed.y)],
                "count": count,
            }
            return _report(X1_CLOSED_FORM, parameters, None, witness)

    return _report(X1_CLOSED_FORM, parameters, None)


def random_lines(rng, k, low=-5, high=5):
    """A concave g >= 0 on [0, k] as a min of lines, shifted to min 0."""
    lines = [
        (rng.randint(low, high), rng.randint(low, high))
        for _ in range(rng.randint(2, 5))
    ]
    lowest = min(min_lines(lines, 0), min_lines(lines, k))
    return [(a, c - lowest) for a, c in lines]


def check_p1(k, samples, seed=None):
    """
    (1/k)(½g(0) + g(1) + … + ½g(k)) >= (1/(k+1))Σ g(i) on [0, k], together
    with the integral form of the one-dimensional criterion
    """
    seed = settings.SEED if seed is None else seed
    rng = random.Random(seed)
    parameters = {"k": k, "samples": samples}

    for _ in range(samples):
        lines = random_lines(rng, k)
        values = [min_lines(lines, i) for i in range(k + 1)]
        lhs = (sum(values) - Fraction(values[0] + values[-1], 2)) / k
        rhs = Fraction(sum(values), k + 1)
        weight = interval_chow_weight(lines, k)

        if lhs < rhs or weight < 0:
            witness = {
                "lines": [[a, c] for a, c in lines],
                "lhs": format_rat(lhs),
                "rhs": format_rat(rhs),
                "interval_weight": format_rat(weight),
            }
            return _report(P1_INEQUALITY, parameters, seed, witness)

    return _report(P1_INEQUALITY, parameters, seed)


def _t_trap_suite(ks, samples, seed):
    rng = random.Random(seed)
    triangles = [t0_triangle(k) for k in ks or range(1, 7)]
    return [
        check_t_trap(t, [random_concave(rng) for _ in range(samples)], seed=seed)
        for t in triangles
    ]


def _s_trap_suite(ks, samples, seed):
    from .catalog import get_entry

    reports = []
    for identifier in ("X3", "X4"):
        entry = get_entry(identifier)
        for k in ks or (1, 2):
            lattice = lattice_points(entry.polytope, k)
            heights = concave_heights(
                random.Random(seed), lattice, samples, orbits(entry.weyl, lattice)
            )
            reports.append(check_s_trap(entry.polytope, entry.weyl, k, heights, seed))
    return reports


SUITES = {
    T_TRAP: _t_trap_suite,
    S_TRAP: _s_trap_suite,
    S_TRAP1: lambda ks, samples, seed: [
        check_s_trap1(k, samples, seed) for k in ks or (2, 3)
    ],
    B_PLUS_2: lambda ks, samples, seed: [
        check_b_plus_2(k, samples, seed) for k in ks or (2, 3)
    ],
    X2_CHAIN: lambda ks, samples, seed: [
        check_x2_chain(k, samples, seed) for k in ks or (2, 3)
    ],
    DELTA_TABLE: lambda ks, samples, seed: [check_delta_table(max(ks or [50]))],
    X1_CLOSED_FORM: lambda ks, samples, seed: [
        check_x1_closed_form(max(ks or [20]))
    ],
    P1_INEQUALITY: lambda ks, samples, seed: [
        check_p1(k, samples, seed) for k in ks or range(1, 13)
    ],
}


def run_suite(name, ks=None, samples=100, seed=None):
    """Run one named suite; `ks` overrides its default dilations."""
    if name not in SUITES:
        known = ", ".join(SUITES)
        raise InputError(f"Unknown suite {name!r}, expected one of: {known}")

    seed = settings.SEED if seed is None else seed
    reports = SUITES[name](ks, samples, seed)
    logger.info(
        "suite finished",
        suite=name,
        reports=len(reports),
        failed=sum(not r.passed for r in reports),
    )
    return reports
