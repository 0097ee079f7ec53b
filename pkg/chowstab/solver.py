import random
from fractions import Fraction

import attr
import structlog

from . import settings
from .chow import (
    INDEX_SET_CONVENTION,
    barycenter_test,
    chow_terms,
    chow_weight,
    chow_weight_oracle,
)
from .envelope import HeightVector, concave_envelope, project_consistent
from .exceptions import InputError, InvariantError, IterationLimitExceeded
from .geometry import Affine, cross, polygon_area
from .lp import EQ, LE, OPTIMAL, Constraint, LinearProgram, rank, solve_lp
from .polytope import lattice_points
from .rational import common_denominator
from .symmetry import IDENTITY, is_invariant, orbits


logger = structlog.get_logger(__name__)

UNSTABLE_BARYCENTER = "chow_unstable_barycenter"
POLYSTABLE = "chow_polystable"
NOT_POLYSTABLE = "chow_not_polystable"
SEMISTABLE_BOUNDARY = "chow_semistable_boundary"

VERDICTS = (UNSTABLE_BARYCENTER, POLYSTABLE, NOT_POLYSTABLE, SEMISTABLE_BOUNDARY)


def positive(instance, attribute, value):
    if value <= 0:
        raise InputError(f"{attribute.name} must be positive, got {value}")


@attr.s(frozen=True)
class SolverOptions:
    weyl = attr.ib(default=True)
    max_iters = attr.ib(
        factory=lambda: settings.MAX_ITERS, validator=[positive]
    )
    box_bound = attr.ib(
        factory=lambda: settings.BOX_BOUND, converter=Fraction, validator=[positive]
    )
    pinned = attr.ib(default=None)
    seed = attr.ib(factory=lambda: settings.SEED)
    soundness_samples = attr.ib(default=4)


@attr.s(frozen=True)
class StabilityReport:
    polytope = attr.ib()
    k = attr.ib()
    barycenter = attr.ib()
    j_min = attr.ib(converter=Fraction)
    verdict = attr.ib(validator=attr.validators.in_(VERDICTS))
    certificate = attr.ib(default=None)
    certificate_j = attr.ib(default=None)
    iterations = attr.ib(default=0)
    used_weyl_reduction = attr.ib(default=False)
    conventions = attr.ib(default=INDEX_SET_CONVENTION)
    notes = attr.ib(default=(), converter=tuple)


@attr.s(frozen=True)
class GaugeFrame:
    """
    Free coordinates of a height vector after fixing the affine gauge

    Each variable sets φ on a group of lattice points (a single point, or a
    whole orbit under the invariant reduction); pinned points stay at 0.
    Equations are rows over the full lattice that every φ in the frame
    satisfies with right-hand side 0.
    """

    lattice = attr.ib()
    pinned = attr.ib(converter=tuple)
    variables = attr.ib(converter=tuple)
    box_bound = attr.ib(converter=Fraction, default=1)
    equations = attr.ib(converter=tuple, default=())

    def expand(self, values):
        heights = [Fraction(0)] * len(self.lattice)
        for members, value in zip(self.variables, values):
            for index in members:
                heights[index] = Fraction(value)
        return HeightVector(lattice=self.lattice, values=heights)

    def reduce(self, coefficients):
        return tuple(
            sum((coefficients[i] for i in members), Fraction(0))
            for members in self.variables
        )

    def constraints(self, padding=0):
        return [
            Constraint(self.reduce(row) + (0,) * padding, EQ, 0)
            for row in self.equations
        ]


def _invariant_directions(group):
    """A basis of {a : wᵀa = a for every w}, the linear parts of invariant affines."""
    stacked = [
        (w[0][0] - 1, w[1][0]) if i == 0 else (w[0][1], w[1][1] - 1)
        for w in group
        for i in (0, 1)
    ]
    stacked = [row for row in stacked if row != (0, 0)]

    dimension = rank(stacked) if stacked else 0
    if dimension == 0:
        return [(1, 0), (0, 1)]
    if dimension == 2:
        return []
    p, q = stacked[0]
    return [(-q, p)]


def _moving_directions(group):
    """A basis of {a : Σ wᵀa = 0}, the complement of the invariant directions."""
    order = len(group)
    directions = []
    for e in ((1, 0), (0, 1)):
        mean = (
            Fraction(sum(w[0][0] * e[0] + w[1][0] * e[1] for w in group), order),
            Fraction(sum(w[0][1] * e[0] + w[1][1] * e[1] for w in group), order),
        )
        direction = (e[0] - mean[0], e[1] - mean[1])
        if direction != (0, 0) and rank(directions + [direction]) > len(directions):
            directions.append(direction)
    return directions


def gauge_frame(lattice, group=None, box_bound=1, pinned=None, reduce=True):
    """
    Choose which orbits to pin so that no invariant affine function survives

    Without a group every point is its own orbit and the pinned set is the
    lexicographically smallest affinely independent triple.

    With ``reduce`` off the same orbits are only required to sum to 0, and
    the first moments along the moving directions vanish as well. The set
    stays closed under the group, and its invariant part is exactly the
    reduced frame.
    """
    if group is None:
        group = [IDENTITY]
        members = [(i,) for i in range(len(lattice))]
    else:
        members = orbits(group, lattice).members

    directions = _invariant_directions(group)

    def evaluation(index):
        point = lattice.points[index]
        return [1] + [a * point.x + b * point.y for a, b in directions]

    if pinned is not None:
        pinned = tuple(sorted(set(pinned)))
        if len(group) > 1:
            raise InputError("Custom pinned points need the unreduced search")
        if len(pinned) != 3 or any(not 0 <= i < len(lattice) for i in pinned):
            raise InputError("Exactly three lattice indices must be pinned")
        if rank([evaluation(i) for i in pinned]) != 3:
            raise InputError("pinned points must be affinely independent")
        chosen = [orbit for orbit, m in enumerate(members) if m[0] in pinned]
    else:
        chosen, rows = [], []
        for orbit, orbit_members in enumerate(members):
            row = evaluation(orbit_members[0])
            if rank(rows + [row]) > len(rows):
                rows.append(row)
                chosen.append(orbit)
            if len(rows) == len(directions) + 1:
                break

    if reduce or len(group) == 1:
        return GaugeFrame(
            lattice=lattice,
            pinned=[i for orbit in chosen for i in members[orbit]],
            variables=[m for orbit, m in enumerate(members) if orbit not in chosen],
            box_bound=box_bound,
        )

    equations = [
        tuple(1 if i in members[orbit] else 0 for i in range(len(lattice)))
        for orbit in chosen
    ]
    equations += [
        tuple(a * p.x + b * p.y for p in lattice.points)
        for a, b in _moving_directions(group)
    ]
    return GaugeFrame(
        lattice=lattice,
        pinned=(),
        variables=[(i,) for i in range(len(lattice))],
        box_bound=box_bound,
        equations=equations,
    )


def cut_coefficients(subdivision):
    """
    Coefficients of the cutting plane recorded from one subdivision

    The row interpolates φ linearly on the fan triangles of every cell, so
    it never exceeds the surrogate and matches it on φ with this subdivision.
    """
    lattice = subdivision.lattice
    vol = polygon_area(lattice.dilated.vertices)
    chi = len(lattice)
    weights = [Fraction(0)] * len(lattice)

    for cell in subdivision.cells:
        apex = cell.vertices[0]
        for a, b in zip(cell.vertices[1:], cell.vertices[2:]):
            third = Fraction(
                cross(lattice.points[apex], lattice.points[a], lattice.points[b]), 6
            )
            for index in (apex, a, b):
                weights[index] += third

    return tuple(w / vol - Fraction(1, chi) for w in weights)


def surrogate(phi):
    """J with the raw heights in the sum; equal to J when φ is consistent."""
    vol, integral, chi, _ = chow_terms(phi)
    return integral / vol - sum(phi.values) / chi


def _evaluate(row, values):
    return sum((a * v for a, v in zip(row, values)), Fraction(0))


class CuttingPlanes:
    """The state of one cutting-plane minimization of the surrogate."""

    def __init__(self, frame, options):
        self.frame = frame
        self.options = options
        self.rows = []
        self.full_rows = []
        self.iterations = 0

    def add(self, phi):
        full = cut_coefficients(concave_envelope(phi))
        row = self.frame.reduce(full)
        if row in self.rows:
            return False
        self.rows.append(row)
        self.full_rows.append(full)
        return True

    def warm_start(self):
        width = len(self.frame.variables)
        self.add(self.frame.expand([0] * width))
        for j in range(width):
            for sign in (1, -1):
                values = [sign if i == j else 0 for i in range(width)]
                self.add(self.frame.expand(values))

    def _bounds(self):
        bound = self.frame.box_bound
        return [(-bound, bound)] * len(self.frame.variables)

    def _cut(self, phi, reason):
        if self.iterations >= self.options.max_iters:
            raise IterationLimitExceeded(
                lower=self.lower, upper=self.upper, iterations=self.iterations
            )
        if not self.add(phi):
            raise InvariantError(f"cutting plane failed to separate ({reason})")
        self.iterations += 1

    def minimize(self):
        """Returns (t*, φ*) with t* the exact minimum of the surrogate on the box."""
        width = len(self.frame.variables)
        self.lower, self.upper = None, Fraction(0)

        while True:
            lp = LinearProgram(
                objective=[0] * width + [1],
                constraints=[Constraint(list(r) + [-1], LE, 0) for r in self.rows]
                + self.frame.constraints(padding=1),
                bounds=self._bounds() + [(None, None)],
            )
            solution = solve_lp(lp)
            if solution.status != OPTIMAL:
                raise InvariantError(f"master LP is {solution.status}")

            t = solution.x[-1]
            if self.lower is not None and t < self.lower:
                raise InvariantError("cutting-plane lower bound decreased")
            self.lower = t

            phi = self.frame.expand(solution.x[:-1])
            value = surrogate(phi)
            self.upper = min(self.upper, value)

            logger.debug(
                "cutting plane",
                iteration=self.iterations,
                t=str(t),
                value=str(value),
                rows=len(self.rows),
            )

            if value == t:
                return t, phi
            self._cut(phi, "minimize")

    def flat_direction(self):
        """
        Look for a nonzero gauge-fixed φ with surrogate 0, one coordinate at a time

        Only called once the minimum is known to be 0, so the optimal face is
        {φ in the box : every true row <= 0}.
        """
        width = len(self.frame.variables)

        for j in range(width):
            for sign in (1, -1):
                while True:
                    lp = LinearProgram(
                        objective=[-sign if i == j else 0 for i in range(width)],
                        constraints=[Constraint(r, LE, 0) for r in self.rows]
                        + self.frame.constraints(),
                        bounds=self._bounds(),
                    )
                    solution = solve_lp(lp)
                    if solution.status != OPTIMAL:
                        raise InvariantError(f"face LP is {solution.status}")

                    if solution.objective_value == 0:
                        break

                    phi = self.frame.expand(solution.x)
                    value = surrogate(phi)
                    if value == 0:
                        return phi
                    if value < 0:
                        raise InvariantError(f"surrogate {value} below the minimum 0")
                    self._cut(phi, "optimal face")

        return None

    def check_soundness(self, count):
        """Every recorded row stays below J on consistent samples."""
        rng = random.Random(self.options.seed)
        width = len(self.frame.variables)

        for _ in range(count):
            sample = self.frame.expand([rng.randint(-2, 2) for _ in range(width)])
            consistent = project_consistent(sample)
            value = surrogate(consistent)
            for row in self.full_rows:
                if _evaluate(row, consistent.values) > value:
                    raise InvariantError("a cutting plane lies above J")


def barycenter_certificate(lattice, report):
    """
    The affine φ = a·x, a ∈ {−1,0,1}², with the most negative J

    For affine φ, J = a·continuous − a·discrete = −a·mismatch.
    """
    candidates = [(a, b) for a in (-1, 0, 1) for b in (-1, 0, 1) if (a, b) != (0, 0)]
    a, b = max(
        candidates,
        key=lambda c: (c[0] * report.mismatch.x + c[1] * report.mismatch.y, c),
    )
    return HeightVector.from_function(lattice, Affine(a, b, 0))


def decide_stability(polytope, k, group=None, options=None):
    options = options or SolverOptions()
    lattice = lattice_points(polytope, k)
    barycenter = barycenter_test(polytope, k)
    log = logger.bind(polytope=polytope.name, k=k)

    if not barycenter.passes:
        certificate = barycenter_certificate(lattice, barycenter)
        value = chow_weight(polytope, k, certificate).j
        log.info("barycenter test fails", j=str(value))
        return StabilityReport(
            polytope=polytope,
            k=k,
            barycenter=barycenter,
            j_min=value,
            verdict=UNSTABLE_BARYCENTER,
            certificate=certificate,
            certificate_j=value,
        )

    reduced = bool(options.weyl and group is not None and len(group) > 1)
    frame = gauge_frame(
        lattice,
        group=group if reduced or options.pinned is None else None,
        box_bound=options.box_bound,
        pinned=options.pinned,
        reduce=reduced,
    )
    log = log.bind(variables=len(frame.variables), weyl=reduced)

    planes = CuttingPlanes(frame, options)
    planes.warm_start()
    j_min, minimizer = planes.minimize()

    if j_min > 0:
        raise InvariantError(f"minimum {j_min} is above the value 0 at φ = 0")

    if j_min < 0:
        verdict = NOT_POLYSTABLE
        certificate = project_consistent(minimizer)
    else:
        certificate = planes.flat_direction()
        if certificate is None:
            verdict = POLYSTABLE
        else:
            verdict = SEMISTABLE_BOUNDARY
            certificate = project_consistent(certificate)

    planes.check_soundness(options.soundness_samples)

    if reduced and certificate is not None:
        if not is_invariant(certificate, orbits(group, lattice)):
            raise InvariantError("certificate of the reduced search is not invariant")

    certificate_j = None
    if certificate is not None:
        certificate_j = chow_weight(polytope, k, certificate).j

    log.info(
        "stability decided",
        verdict=verdict,
        j_min=str(j_min),
        iterations=planes.iterations,
    )
    return StabilityReport(
        polytope=polytope,
        k=k,
        barycenter=barycenter,
        j_min=j_min,
        verdict=verdict,
        certificate=certificate,
        certificate_j=certificate_j,
        iterations=planes.iterations,
        used_weyl_reduction=reduced,
    )


def _oracle_heights(phi):
    """Shift and scale consistent φ to nonnegative integers, if small enough."""
    consistent = project_consistent(phi)
    lowest = min(consistent.values)
    scale = common_denominator(consistent.values)
    scaled = [(v - lowest) * scale for v in consistent.values]

    if max(scaled) > settings.ORACLE_MAX_HEIGHT:
        return None, scale
    return attr.evolve(phi, values=scaled), scale


def verify_certificate(polytope, k, phi):
    """
    Recompute J(φ) independently of any solver state

    The envelope path always runs; the test-configuration oracle runs on the
    shifted and rescaled heights (J is invariant under constants and
    positively homogeneous) whenever they stay small.
    """
    lattice = lattice_points(polytope, k)
    if phi.lattice != lattice:
        raise InputError(
            f"Heights do not match the lattice of {polytope.name} at k={k}"
        )

    value = chow_weight(polytope, k, phi).j

    scaled, scale = _oracle_heights(phi)
    if scaled is not None:
        try:
            oracle = chow_weight_oracle(polytope, k, scaled).j / scale
        except InvariantError as exc:
            raise InvariantError(f"certificate invalid: {exc}") from exc
        if oracle != value:
            raise InvariantError(
                f"certificate invalid: envelope gives {value}, oracle {oracle}"
            )

    logger.info(
        "certificate verified",
        polytope=polytope.name,
        k=k,
        j=str(value),
        oracle=scaled is not None,
    )
    return value
