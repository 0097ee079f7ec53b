from fractions import Fraction

import attr
import structlog
from first import first
from sympy import Matrix

from .exceptions import InputError, InvariantError


logger = structlog.get_logger(__name__)

LE = "<="
EQ = "="
GE = ">="

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"


def _rationals(values):
    return tuple(Fraction(v) for v in values)


def _bound(value):
    return None if value is None else Fraction(value)


@attr.s(frozen=True)
class Constraint:
    coefficients = attr.ib(converter=_rationals)
    relation = attr.ib(validator=attr.validators.in_([LE, EQ, GE]))
    rhs = attr.ib(converter=Fraction)


def _well_formed(instance, attribute, value):
    width = len(instance.objective)

    for constraint in instance.constraints:
        if len(constraint.coefficients) != width:
            raise InputError(
                f"Constraint has {len(constraint.coefficients)} coefficients, "
                f"objective has {width}"
            )

    if instance.bounds is not None and len(instance.bounds) != width:
        raise InputError(
            f"Expected {width} variable bounds, got {len(instance.bounds)}"
        )


@attr.s(frozen=True)
class LinearProgram:
    """
    minimize c·x subject to constraints and per-variable bounds

    Bounds are (lo, hi) pairs with None for an infinite end; without bounds
    every variable is nonnegative.
    """

    objective = attr.ib(converter=_rationals)
    constraints = attr.ib(converter=tuple, default=(), validator=_well_formed)
    bounds = attr.ib(default=None)

    @property
    def variable_bounds(self):
        if self.bounds is None:
            return [(Fraction(0), None)] * len(self.objective)
        return [(_bound(lo), _bound(hi)) for lo, hi in self.bounds]


@attr.s(frozen=True)
class LPSolution:
    status = attr.ib()
    x = attr.ib(default=None)
    objective_value = attr.ib(default=None)
    dual = attr.ib(default=None)
    farkas = attr.ib(default=None)


@attr.s
class StandardForm:
    """min cost·y + constant, rows·y <= rhs, y >= 0, plus the map back to x."""

    rows = attr.ib()
    rhs = attr.ib()
    cost = attr.ib()
    constant = attr.ib()
    columns = attr.ib()
    shift = attr.ib()
    origin = attr.ib()

    def recover(self, y):
        return tuple(
            s + sum(sign * y[col] for col, sign in cols)
            for s, cols in zip(self.shift, self.columns)
        )


def standard_form(lp):
    columns, shift, capped = [], [], []
    width = 0

    for lo, hi in lp.variable_bounds:
        if lo is not None:
            shift.append(lo)
            columns.append([(width, 1)])
            if hi is not None:
                capped.append((width, hi - lo))
            width += 1
        elif hi is not None:
            shift.append(hi)
            columns.append([(width, -1)])
            width += 1
        else:
            shift.append(Fraction(0))
            columns.append([(width, 1), (width + 1, -1)])
            width += 2

    def expand(coefficients):
        row = [Fraction(0)] * width
        for a, cols in zip(coefficients, columns):
            for col, sign in cols:
                row[col] += sign * a
        return row

    rows, rhs, origin = [], [], []
    for index, constraint in enumerate(lp.constraints):
        row = expand(constraint.coefficients)
        b = constraint.rhs - sum(a * s for a, s in zip(constraint.coefficients, shift))
        if constraint.relation in (LE, EQ):
            rows.append(row)
            rhs.append(b)
            origin.append((index, 1))
        if constraint.relation in (GE, EQ):
            rows.append([-v for v in row])
            rhs.append(-b)
            origin.append((index, -1))

    for col, cap in capped:
        row = [Fraction(0)] * width
        row[col] = Fraction(1)
        rows.append(row)
        rhs.append(cap)
        origin.append((None, 1))

    return StandardForm(
        rows=rows,
        rhs=rhs,
        cost=expand(lp.objective),
        constant=sum(c * s for c, s in zip(lp.objective, shift)),
        columns=columns,
        shift=shift,
        origin=origin,
    )


class Tableau:
    """
    Dense two-phase simplex tableau over the rationals

    Columns are the structural variables, one slack per row, then one
    artificial per row with a negative right hand side. Entering and leaving
    variables follow Bland's rule.
    """

    def __init__(self, rows, rhs):
        self.width = len(rows[0]) if rows else 0
        self.height = len(rows)
        self.first_artificial = self.width + self.height

        self.table = []
        self.basis = []
        artificial = self.first_artificial
        negative = sum(1 for b in rhs if b < 0)
        self.columns = self.first_artificial + negative

        for i, (row, b) in enumerate(zip(rows, rhs)):
            line = list(row) + [Fraction(0)] * (self.height + negative) + [b]
            line[self.width + i] = Fraction(1)
            if b < 0:
                line = [-v for v in line]
                line[artificial] = Fraction(1)
                self.basis.append(artificial)
                artificial += 1
            else:
                self.basis.append(self.width + i)
            self.table.append(line)

        self.reduced = None

    @property
    def has_artificials(self):
        return self.columns > self.first_artificial

    def price(self, cost):
        """Reduced costs for a cost vector; the last entry is −objective."""
        reduced = list(cost) + [Fraction(0)]
        for i, column in enumerate(self.basis):
            weight = cost[column]
            if weight:
                line = self.table[i]
                for j in range(self.columns + 1):
                    if line[j]:
                        reduced[j] -= weight * line[j]
        self.reduced = reduced

    @property
    def value(self):
        return -self.reduced[-1]

    def pivot(self, row, column):
        line = self.table[row]
        scale = line[column]
        if scale != 1:
            line = [v / scale for v in line]
            self.table[row] = line

        nonzero = [j for j, v in enumerate(line) if v]
        for i, other in enumerate(self.table):
            factor = other[column]
            if i == row or not factor:
                continue
            for j in nonzero:
                other[j] -= factor * line[j]

        factor = self.reduced[column]
        if factor:
            for j in nonzero:
                self.reduced[j] -= factor * line[j]

        self.basis[row] = column

    def run(self, allowed):
        """Iterate to optimality; returns False if the objective is unbounded."""
        while True:
            entering = first(allowed, key=lambda j: self.reduced[j] < 0)
            if entering is None:
                return True

            leaving = None
            for i, line in enumerate(self.table):
                if line[entering] > 0:
                    key = (line[-1] / line[entering], self.basis[i])
                    if leaving is None or key < leaving[0]:
                        leaving = (key, i)

            if leaving is None:
                return False

            self.pivot(leaving[1], entering)

    def drive_out_artificials(self):
        for i, column in enumerate(self.basis):
            if column < self.first_artificial:
                continue
            replacement = first(
                range(self.first_artificial), key=lambda j: self.table[i][j] != 0
            )
            self.pivot(i, replacement)

    def primal(self):
        y = [Fraction(0)] * self.width
        for i, column in enumerate(self.basis):
            if column < self.width:
                y[column] = self.table[i][-1]
        return y

    def duals(self):
        """u with reduced cost of slack i equal to −uᵢ."""
        return [-self.reduced[self.width + i] for i in range(self.height)]


def _dot(a, b):
    return sum((x * y for x, y in zip(a, b)), Fraction(0))


def _verify_optimal(form, y, u):
    transposed = list(zip(*form.rows)) if form.rows else [()] * len(form.cost)

    problems = []
    if any(v < 0 for v in y):
        problems.append("negative primal value")
    if any(_dot(row, y) > b for row, b in zip(form.rows, form.rhs)):
        problems.append("primal infeasible")
    if any(v > 0 for v in u):
        problems.append("positive row dual")
    if any(c - _dot(column, u) < 0 for c, column in zip(form.cost, transposed)):
        problems.append("dual infeasible")
    if _dot(form.cost, y) != _dot(form.rhs, u):
        problems.append("duality gap")

    if problems:
        raise InvariantError(f"LP certificate rejected: {', '.join(problems)}")


def _verify_farkas(form, pi):
    transposed = list(zip(*form.rows))
    if (
        any(v < 0 for v in pi)
        or any(_dot(column, pi) < 0 for column in transposed)
        or _dot(form.rhs, pi) >= 0
    ):
        raise InvariantError("LP certificate rejected: invalid Farkas vector")


def _per_constraint(lp, form, values):
    merged = [Fraction(0)] * len(lp.constraints)
    for (index, sign), value in zip(form.origin, values):
        if index is not None:
            merged[index] += sign * value
    return tuple(merged)


def _check_user_feasibility(lp, x):
    for (lo, hi), value in zip(lp.variable_bounds, x):
        if (lo is not None and value < lo) or (hi is not None and value > hi):
            raise InvariantError(f"LP solution violates the bounds [{lo}, {hi}]")

    for constraint in lp.constraints:
        lhs = _dot(constraint.coefficients, x)
        ok = {
            LE: lhs <= constraint.rhs,
            EQ: lhs == constraint.rhs,
            GE: lhs >= constraint.rhs,
        }[constraint.relation]
        if not ok:
            raise InvariantError(f"LP solution violates {constraint}")


def solve_lp(lp):
    """
    Exact simplex solve of a LinearProgram

    Optimal answers come with row duals whose strong duality is verified
    exactly; infeasible answers come with a verified Farkas combination of
    the constraints.
    """
    form = standard_form(lp)
    width = len(form.cost)

    if not form.rows:
        if any(c < 0 for c in form.cost):
            return LPSolution(status=UNBOUNDED)
        x = form.recover([Fraction(0)] * width)
        return LPSolution(
            status=OPTIMAL, x=x, objective_value=_dot(lp.objective, x), dual=()
        )

    tableau = Tableau(form.rows, form.rhs)

    if tableau.has_artificials:
        phase_one = [Fraction(0)] * tableau.first_artificial + [Fraction(1)] * (
            tableau.columns - tableau.first_artificial
        )
        tableau.price(phase_one)
        tableau.run(range(tableau.columns))

        if tableau.value > 0:
            pi = [-u for u in tableau.duals()]
            _verify_farkas(form, pi)
            logger.debug("lp infeasible", rows=len(form.rows), columns=width)
            return LPSolution(status=INFEASIBLE, farkas=_per_constraint(lp, form, pi))

        tableau.drive_out_artificials()

    tableau.price(list(form.cost) + [Fraction(0)] * (tableau.columns - width))
    if not tableau.run(range(tableau.first_artificial)):
        logger.debug("lp unbounded", rows=len(form.rows), columns=width)
        return LPSolution(status=UNBOUNDED)

    y = tableau.primal()
    u = tableau.duals()
    _verify_optimal(form, y, u)

    x = form.recover(y)
    _check_user_feasibility(lp, x)

    value = _dot(lp.objective, x)
    if value != _dot(form.cost, y) + form.constant:
        raise InvariantError("LP objective does not survive the change of variables")

    return LPSolution(
        status=OPTIMAL,
        x=x,
        objective_value=value,
        dual=_per_constraint(lp, form, u),
    )


def rank(rows):
    """Rank of a rational matrix."""
    if not rows:
        return 0
    return Matrix(rows).rank()
