from collections import deque
from fractions import Fraction

import attr
import structlog
from sympy import Matrix

from .envelope import HeightVector
from .exceptions import InputError
from .geometry import Point2


logger = structlog.get_logger(__name__)

IDENTITY = ((1, 0), (0, 1))
MAX_GROUP_ORDER = 1000


def as_matrix(rows):
    try:
        (a, b), (c, d) = rows
    except (TypeError, ValueError):
        raise InputError(f"Expected a 2x2 matrix, got {rows!r}")

    if not all(isinstance(v, int) and not isinstance(v, bool) for v in (a, b, c, d)):
        raise InputError(f"Matrix entries must be integers, got {rows!r}")

    return ((a, b), (c, d))


def _rows(matrix):
    return tuple(tuple(int(v) for v in row) for row in matrix.tolist())


def multiply(m, n):
    return _rows(Matrix(m) * Matrix(n))


def determinant(m):
    return int(Matrix(m).det())


def inverse(m):
    if determinant(m) not in (1, -1):
        raise InputError(f"{m} is not unimodular")
    return _rows(Matrix(m).inv())


def apply(m, point):
    x, y = Matrix(m) * Matrix(point[:2])
    return Point2(int(x), int(y))


def order(m):
    power, count = m, 1
    while power != IDENTITY:
        power = multiply(power, m)
        count += 1
        if count > MAX_GROUP_ORDER:
            raise InputError(f"{m} has no finite order")
    return count


@attr.s(frozen=True)
class WeylGroup:
    elements = attr.ib(converter=tuple)
    name = attr.ib(default=None)

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)


@attr.s(frozen=True)
class OrbitPartition:
    orbit_id = attr.ib(converter=tuple)
    representatives = attr.ib(converter=tuple)

    @property
    def members(self):
        groups = [[] for _ in self.representatives]
        for index, orbit in enumerate(self.orbit_id):
            groups[orbit].append(index)
        return [tuple(g) for g in groups]

    def __len__(self):
        return len(self.representatives)


def preserves(m, polytope):
    vertices = set(polytope.vertices)
    return {apply(m, v) for v in vertices} == vertices


def group_closure(generators, polytope, name=None):
    """The finite group generated by lattice symmetries of a polytope."""
    generators = [as_matrix(g) for g in generators]

    for generator in generators:
        if not preserves(generator, polytope):
            raise InputError(f"{generator} is not a symmetry of {polytope.vertices}")

    elements = {IDENTITY}
    queue = deque([IDENTITY])
    while queue:
        element = queue.popleft()
        for generator in generators:
            product = multiply(generator, element)
            if product in elements:
                continue
            elements.add(product)
            if len(elements) > MAX_GROUP_ORDER:
                raise InputError(f"group too large (over {MAX_GROUP_ORDER} elements)")
            queue.append(product)

    ordered = [IDENTITY] + sorted(elements - {IDENTITY})
    logger.debug("group closure", name=name, order=len(ordered))
    return WeylGroup(elements=ordered, name=name)


def orbits(group, lattice):
    """Partition lattice indices into orbits; ids follow lexicographic order."""
    orbit_id = [None] * len(lattice)
    representatives = []

    for index, point in enumerate(lattice.points):
        if orbit_id[index] is not None:
            continue

        orbit = len(representatives)
        representatives.append(index)
        for element in group:
            image = apply(element, point)
            if image not in lattice.index_of:
                raise InputError(f"{element} maps {tuple(point)} outside the lattice")
            orbit_id[lattice.index_of[image]] = orbit

    return OrbitPartition(orbit_id=orbit_id, representatives=representatives)


def act(element, phi):
    """(w·φ)(x) = φ(w⁻¹x)."""
    backwards = inverse(element)
    return attr.evolve(
        phi, values=[phi.at(apply(backwards, p)) for p in phi.lattice.points]
    )


def symmetrize(phi, group, partition=None):
    """Average φ over each orbit."""
    if partition is None:
        partition = orbits(group, phi.lattice)

    averages = [
        sum((phi[i] for i in members), Fraction(0)) / len(members)
        for members in partition.members
    ]
    return HeightVector(
        lattice=phi.lattice,
        values=[averages[orbit] for orbit in partition.orbit_id],
    )


def is_invariant(phi, partition):
    return all(
        len({phi[i] for i in members}) == 1 for members in partition.members
    )
