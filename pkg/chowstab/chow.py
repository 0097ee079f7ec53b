from fractions import Fraction

import attr
import structlog

from .envelope import (
    concave_envelope,
    integrate_envelope,
    is_consistent,
    project_consistent,
)
from .exceptions import InputError, InvariantError
from .geometry import Point2, convex_hull_3d, integrate_min_lines, min_lines
from .polytope import ehrhart, lattice_points, moments


logger = structlog.get_logger(__name__)

# the criterion sums g over k△ ∩ ℤ², the lattice g is defined on
INDEX_SET_CONVENTION = (
    "J sums f_phi over k*Delta ∩ Z^2 and divides by chi(k) = |k*Delta ∩ Z^2|"
)


@attr.s(frozen=True)
class BarycenterReport:
    discrete = attr.ib()
    continuous = attr.ib()
    mismatch = attr.ib()
    passes = attr.ib()


@attr.s(frozen=True)
class ChowWeightValue:
    """
    J(φ) for one polarization, with the normalized leading coefficient

    The leading coefficient of the weight expansion is (n+1)!·vol·J, so for
    surfaces it is 6·vol(k△)·J and carries the same sign as J.
    """

    j = attr.ib(converter=Fraction)
    k = attr.ib()
    polytope = attr.ib()
    normalized_leading_coefficient = attr.ib(converter=Fraction)


@attr.s(frozen=True)
class ConfigurationPolytope:
    """△_g: the region between k△ and the graph of g = f_φ."""

    hull = attr.ib()
    volume = attr.ib()
    lattice_count = attr.ib()


def _require_lattice(phi, lattice):
    if phi.lattice != lattice:
        raise InputError(
            f"Heights are indexed by a different lattice (k={phi.lattice.k})"
        )


def discrete_barycenter(lattice):
    count = len(lattice)
    if count == 0:
        raise InputError("empty point set")

    return Point2(
        Fraction(sum(p.x for p in lattice.points), count),
        Fraction(sum(p.y for p in lattice.points), count),
    )


def barycenter_test(polytope, k):
    """Compare the lattice-point average with the centroid of k△."""
    discrete = discrete_barycenter(lattice_points(polytope, k))
    vol, moment = moments(polytope, k)
    continuous = Point2(moment.x / vol, moment.y / vol)
    mismatch = Point2(discrete.x - continuous.x, discrete.y - continuous.y)

    return BarycenterReport(
        discrete=discrete,
        continuous=continuous,
        mismatch=mismatch,
        passes=mismatch.x == 0 and mismatch.y == 0,
    )


def chow_terms(phi):
    """(vol(k△), ∫f_φ, χ(k), Σ f_φ(x)) for the lattice φ lives on."""
    lattice = phi.lattice
    vol, _ = moments(lattice.polytope, lattice.k)
    integral = integrate_envelope(concave_envelope(phi))
    consistent = project_consistent(phi)
    return vol, integral, len(lattice), sum(consistent.values)


def _value(polytope, k, j, vol):
    return ChowWeightValue(
        j=j,
        k=k,
        polytope=polytope.name,
        normalized_leading_coefficient=6 * vol * j,
    )


def chow_weight(polytope, k, phi):
    """J(φ) = (1/vol(k△))∫f_φ − (1/χ(k))Σ f_φ(x)."""
    _require_lattice(phi, lattice_points(polytope, k))

    vol, integral, chi, total = chow_terms(phi)
    return _value(polytope, k, integral / vol - total / chi, vol)


def configuration_polytope(polytope, k, phi):
    lattice = lattice_points(polytope, k)
    _require_lattice(phi, lattice)

    points = [(p.x, p.y, 0) for p in lattice.points]
    points += [(p.x, p.y, v) for p, v in zip(lattice.points, phi.values) if v > 0]

    hull = convex_hull_3d(points)
    return ConfigurationPolytope(
        hull=hull,
        volume=hull.volume,
        lattice_count=len(hull.lattice_points()),
    )


def chow_weight_oracle(polytope, k, phi):
    """
    Recompute J from the test configuration polytope △_g

    Needs nonnegative integral consistent heights. The weight w₁ is read off
    a direct ℤ³ count of △_g and the integral off its 3D volume; both are
    checked against the envelope before J is rebuilt from them.
    """
    lattice = lattice_points(polytope, k)
    _require_lattice(phi, lattice)

    if any(v < 0 or v.denominator != 1 for v in phi.values):
        raise InputError("The oracle needs nonnegative integral heights")

    if not is_consistent(phi):
        raise InputError("The oracle needs consistent heights")

    data = ehrhart(polytope)
    chi = data.chi(k)
    vol = data.vol * k * k
    total = sum(phi.values)

    if total == 0:
        # △_g collapses onto k△ itself
        volume, count = Fraction(0), chi
    else:
        configuration = configuration_polytope(polytope, k, phi)
        volume, count = configuration.volume, configuration.lattice_count

    weight = count - chi
    if weight != total:
        raise InvariantError(
            f"oracle mismatch: |△_g ∩ Z^3| - chi = {weight}, sum of heights {total}"
        )

    integral = integrate_envelope(concave_envelope(phi))
    if volume != integral:
        raise InvariantError(
            f"oracle mismatch: vol(△_g) = {volume}, envelope integral {integral}"
        )

    j = volume / vol - Fraction(weight) / chi
    direct = chow_weight(polytope, k, phi)
    if direct.j != j:
        raise InvariantError(f"oracle mismatch: J = {j} by volume, {direct.j} direct")

    logger.debug("oracle agrees", polytope=polytope.name, k=k, j=str(j))
    return _value(polytope, k, j, vol)


def interval_chow_weight(lines, k):
    """
    The one-dimensional criterion on [0, k] for g = min of lines

    (1/k)∫₀ᵏ g − (1/(k+1))Σᵢ g(i); nonnegative for every concave g.
    """
    integral = integrate_min_lines(lines, 0, k)
    total = sum(min_lines(lines, i) for i in range(k + 1))
    return integral / k - Fraction(total) / (k + 1)
