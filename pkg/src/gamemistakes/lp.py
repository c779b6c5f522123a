"""Exact two-phase simplex.

Linear programs are solved on a dense rational tableau.  Free variables are
split into a difference of two nonnegative columns; each row carries its own
slack or artificial column, so the basis inverse (and with it the duals) can
be read straight off the tableau.

:class:`Simplex` is a solver session.  After an objective has been optimized
it can be *pinned*: the equality ``objective . x = optimum`` is added to the
program, and further objectives are optimized over the resulting optimal face
starting from the current basis.  Pinning is realized by fixing at zero every
column whose reduced cost in an exact dual certificate is positive, which cuts
out exactly the same face.  Solutions always carry duals for the literal
program including the pin rows, see :func:`check_certificate`.

With ``crash=True`` the first solve starts from an optimal basis proposed by
the floating-point HiGHS simplex.  The proposal is installed by exact
pivots and only used if it is exactly primal feasible; the exact two-phase
method then takes over, so results never depend on rounding.
"""
from __future__ import annotations

import contextlib
import contextvars
import enum
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .rational import ONE, ZERO, Rational, as_rational, render

_audit = contextvars.ContextVar("lp_audit", default=None)


@contextlib.contextmanager
def audit():
    """Collect ``(program, solution)`` for every optimal solve in the block."""
    log = []
    token = _audit.set(log)
    try:
        yield log
    finally:
        _audit.reset(token)


class Sense(str, enum.Enum):
    MAXIMIZE = "maximize"
    MINIMIZE = "minimize"


class Relation(str, enum.Enum):
    LE = "<="
    EQ = "="
    GE = ">="


class Status(str, enum.Enum):
    OPTIMAL = "optimal"
    INFEASIBLE = "infeasible"
    UNBOUNDED = "unbounded"


@dataclass(frozen=True)
class Constraint:
    coefficients: tuple
    relation: Relation
    rhs: Rational

    def __post_init__(self):
        object.__setattr__(self, "coefficients",
                           tuple(as_rational(a) for a in self.coefficients))
        object.__setattr__(self, "relation", Relation(self.relation))
        object.__setattr__(self, "rhs", as_rational(self.rhs))


@dataclass(frozen=True)
class LinearProgram:
    """``sense objective . x`` subject to ``constraints``.

    ``free[i]`` marks variable ``i`` as unrestricted in sign; all other
    variables are nonnegative.
    """

    objective: tuple
    constraints: tuple = ()
    free: tuple = None
    sense: Sense = Sense.MAXIMIZE

    def __post_init__(self):
        objective = tuple(as_rational(c) for c in self.objective)
        if not objective:
            raise ValueError("a linear program needs at least one variable")
        constraints = tuple(
            c if isinstance(c, Constraint) else Constraint(*c)
            for c in self.constraints)
        for i, c in enumerate(constraints):
            if len(c.coefficients) != len(objective):
                raise ValueError(
                    f"constraint {i} has {len(c.coefficients)} coefficients, "
                    f"expected {len(objective)}")
        free = (False,) * len(objective) if self.free is None else tuple(
            bool(f) for f in self.free)
        if len(free) != len(objective):
            raise ValueError("free flags must match the number of variables")
        object.__setattr__(self, "objective", objective)
        object.__setattr__(self, "constraints", constraints)
        object.__setattr__(self, "free", free)
        object.__setattr__(self, "sense", Sense(self.sense))

    @property
    def num_variables(self) -> int:
        return len(self.objective)

    def with_objective(self, objective, sense=None) -> LinearProgram:
        return LinearProgram(objective, self.constraints, self.free,
                             self.sense if sense is None else sense)


@dataclass(frozen=True)
class LpSolution:
    """Result of a solve.

    For optimal solutions ``duals`` holds one multiplier per constraint with
    the convention ``objective_value == sum(duals[r] * rhs[r])``; see
    :func:`check_certificate` for the sign conditions.
    """

    status: Status
    primal: tuple = ()
    objective_value: Rational = None
    duals: tuple = ()
    pivots: int = 0

    @property
    def optimal(self) -> bool:
        return self.status is Status.OPTIMAL


class _Pin:
    __slots__ = ("objective", "sign", "value", "y", "mu", "reduced", "fixed")

    def __init__(self, objective, sign, value, y, mu, reduced, fixed):
        self.objective = objective
        self.sign = sign
        self.value = value
        self.y = y
        self.mu = mu
        self.reduced = reduced
        self.fixed = fixed


class Simplex:
    """Exact simplex session over a fixed constraint system.

    ``rule`` selects the entering column: ``"bland"`` always takes the lowest
    improving index; ``"dantzig"`` takes the most negative reduced cost but
    falls back to Bland's rule right after every degenerate pivot, which is
    enough to rule out cycling.
    """

    def __init__(self, lp: LinearProgram, rule: str = "bland", crash: bool = True):
        if rule not in ("bland", "dantzig"):
            raise ValueError(f"unknown pivot rule {rule!r}")
        self.lp = lp
        self.rule = rule
        self.crash = crash
        self.pivots = 0
        self.pins: list[_Pin] = []
        self._last = None
        self._build()
        self.feasible = None

    # -- construction -----------------------------------------------------

    def _build(self):
        lp = self.lp
        self._columns = []  # original variable index -> (pos, neg | None)
        ncols = 0
        for is_free in lp.free:
            if is_free:
                self._columns.append((ncols, ncols + 1))
                ncols += 2
            else:
                self._columns.append((ncols, None))
                ncols += 1
        self._nstruct = ncols
        rows, rhs, signs, kinds = [], [], [], []
        for con in lp.constraints:
            row = {}
            for var, a in enumerate(con.coefficients):
                if a:
                    pos, neg = self._columns[var]
                    row[pos] = a
                    if neg is not None:
                        row[neg] = -a
            b, rel, sign = con.rhs, con.relation, 1
            if b < 0:
                row = {j: -a for j, a in row.items()}
                b, sign = -b, -1
                rel = {Relation.LE: Relation.GE, Relation.GE: Relation.LE,
                       Relation.EQ: Relation.EQ}[rel]
            rows.append(row)
            rhs.append(b)
            signs.append(sign)
            kinds.append(rel)
        # slack and surplus columns are part of the program proper
        self._identity = [None] * len(rows)
        for r, rel in enumerate(kinds):
            if rel is Relation.LE:
                rows[r][ncols] = ONE
                self._identity[r] = ncols
                ncols += 1
            elif rel is Relation.GE:
                rows[r][ncols] = -ONE
                ncols += 1
        self._nreal = ncols
        for r, rel in enumerate(kinds):
            if self._identity[r] is None:
                rows[r][ncols] = ONE
                self._identity[r] = ncols
                ncols += 1
        self.ncols = ncols
        self._signs = signs
        self._tableau = []
        for row in rows:
            dense = [ZERO] * ncols
            for j, a in row.items():
                dense[j] = a
            self._tableau.append(dense)
        self._rhs = list(rhs)
        self._basis = list(self._identity)
        self._blocked = [j >= self._nreal for j in range(ncols)]

    # -- core iteration ---------------------------------------------------

    def _pivot(self, r: int, c: int, red: list, z: list):
        T = self._tableau
        prow = T[r]
        p = prow[c]
        nz = [j for j, v in enumerate(prow) if v]
        if p != 1:
            for j in nz:
                prow[j] = prow[j] / p
            self._rhs[r] = self._rhs[r] / p
        b = self._rhs[r]
        for i, row in enumerate(T):
            if i == r:
                continue
            a = row[c]
            if a:
                for j in nz:
                    row[j] -= a * prow[j]
                if b:
                    self._rhs[i] -= a * b
        a = red[c]
        if a:
            for j in nz:
                red[j] -= a * prow[j]
            z[0] -= a * b
        self._basis[r] = c
        self.pivots += 1

    def _reduced_costs(self, cost: list):
        red = [-c for c in cost]
        z = ZERO
        for r, row in enumerate(self._tableau):
            cb = cost[self._basis[r]]
            if cb:
                for j, v in enumerate(row):
                    if v:
                        red[j] += cb * v
                z += cb * self._rhs[r]
        return red, [z]

    def _iterate(self, red: list, z: list) -> Status:
        T, rhs, basis, blocked = self._tableau, self._rhs, self._basis, self._blocked
        bland = self.rule == "bland"
        use_bland = bland
        while True:
            enter = -1
            if use_bland:
                for j, v in enumerate(red):
                    if v < 0 and not blocked[j]:
                        enter = j
                        break
            else:
                best = ZERO
                for j, v in enumerate(red):
                    if v < best and not blocked[j]:
                        enter, best = j, v
            if enter < 0:
                return Status.OPTIMAL
            leave, ratio = -1, None
            for i, row in enumerate(T):
                a = row[enter]
                if a > 0:
                    q = rhs[i] / a
                    if (ratio is None or q < ratio
                            or (q == ratio and basis[i] < basis[leave])):
                        leave, ratio = i, q
            if leave < 0:
                return Status.UNBOUNDED
            self._pivot(leave, enter, red, z)
            use_bland = bland or ratio == 0

    def _phase_one(self) -> bool:
        cost = [ZERO] * self.ncols
        for j in range(self._nreal, self.ncols):
            cost[j] = -ONE
        red, z = self._reduced_costs(cost)
        self._iterate(red, z)
        if z[0] != 0:
            return False
        # drive zero-level artificials out of the basis where possible
        for r in range(len(self._tableau)):
            if self._basis[r] >= self._nreal:
                row = self._tableau[r]
                for j in range(self._nreal):
                    if row[j] and not self._blocked[j]:
                        self._pivot(r, j, red, z)
                        break
        return True

    def _install(self, target):
        """Pivot the columns of ``target`` into the basis, exactly.

        Leaves the tableau untouched unless the result is primal feasible.
        """
        if not target:
            return
        saved = ([row[:] for row in self._tableau], self._rhs[:], self._basis[:],
                 self.pivots)
        wanted = set(target)
        dummy_red, dummy_z = [ZERO] * self.ncols, [ZERO]
        for c in target:
            if c in self._basis or self._blocked[c]:
                continue
            for r, row in enumerate(self._tableau):
                if row[c] and self._basis[r] not in wanted:
                    self._pivot(r, c, dummy_red, dummy_z)
                    break
        if any(b < 0 for b in self._rhs):
            self._tableau, self._rhs, self._basis, self.pivots = saved

    # -- public API -------------------------------------------------------

    def _internal_cost(self, objective, sign) -> list:
        cost = [ZERO] * self.ncols
        for var, c in enumerate(objective):
            if c:
                pos, neg = self._columns[var]
                cost[pos] = sign * c
                if neg is not None:
                    cost[neg] = -sign * c
        return cost

    def optimize(self, objective=None, sense=None) -> LpSolution:
        """Optimize ``objective`` over the program and all current pins."""
        if objective is None:
            objective = self.lp.objective
        objective = tuple(as_rational(c) for c in objective)
        if len(objective) != self.lp.num_variables:
            raise ValueError("objective length does not match the program")
        sense = Sense(sense or self.lp.sense)
        sign = 1 if sense is Sense.MAXIMIZE else -1
        self._last = None
        cost = self._internal_cost(objective, sign)
        if self.feasible is None:
            if self.crash:
                self._install(_float_basis(self._tableau, self._rhs, self._basis,
                                           self._nreal, cost))
            self.feasible = self._phase_one()
        if not self.feasible:
            return LpSolution(Status.INFEASIBLE, pivots=self.pivots)
        red, z = self._reduced_costs(cost)
        status = self._iterate(red, z)
        if status is not Status.OPTIMAL:
            return LpSolution(status, pivots=self.pivots)
        y, mu, reduced = self._certificate(red)
        self._last = (objective, sign, z[0], y, mu, reduced)
        values = [ZERO] * self.ncols
        for r, j in enumerate(self._basis):
            values[j] = self._rhs[r]
        primal = tuple(values[pos] - (values[neg] if neg is not None else ZERO)
                       for pos, neg in self._columns)
        duals = [sign * s * yr for s, yr in zip(self._signs, y)]
        duals += [sign * p.sign * m for p, m in zip(self.pins, mu)]
        sol = LpSolution(Status.OPTIMAL, primal, sign * z[0], tuple(duals),
                         self.pivots)
        log = _audit.get()
        if log is not None:
            log.append((self.program(objective, sense), sol))
        return sol

    def _certificate(self, red):
        """Exact duals for the literal program (base rows plus pin rows).

        Columns fixed by a pin may carry negative reduced costs in the
        restricted solve; adding multiples of the pins' own certificates,
        latest first, makes every reduced cost nonnegative without changing
        the dual objective.
        """
        y = [red[j] for j in self._identity]
        mu = [ZERO] * len(self.pins)
        reduced = list(red[:self._nreal])
        for t in range(len(self.pins) - 1, -1, -1):
            pin = self.pins[t]
            lam = ZERO
            for j in pin.fixed:
                if reduced[j] < 0:
                    lam = max(lam, -reduced[j] / pin.reduced[j])
            if lam:
                y = [a + lam * b for a, b in zip(y, pin.y)]
                for s in range(t):
                    mu[s] += lam * pin.mu[s]
                mu[t] -= lam
                reduced = [a + lam * b for a, b in zip(reduced, pin.reduced)]
        return y, mu, reduced

    def pin(self):
        """Add ``objective . x == optimum`` for the last optimized objective."""
        if self._last is None:
            raise RuntimeError("pin() needs a preceding optimal optimize()")
        objective, sign, value, y, mu, reduced = self._last
        fixed = [j for j, d in enumerate(reduced) if d > 0]
        for j in fixed:
            self._blocked[j] = True
        self.pins.append(_Pin(objective, sign, value, y, mu, reduced, fixed))
        self._last = None

    def program(self, objective=None, sense=None) -> LinearProgram:
        """The literal program solved by :meth:`optimize`, pins included."""
        constraints = list(self.lp.constraints)
        for p in self.pins:
            # the stored value is in maximize orientation
            constraints.append(Constraint(p.objective, Relation.EQ, p.sign * p.value))
        return LinearProgram(self.lp.objective if objective is None else objective,
                             tuple(constraints), self.lp.free,
                             sense or self.lp.sense)

    def dump(self) -> str:
        """Plain-text tableau, for diagnostics."""
        lines = ["basis | " + " ".join(f"c{j}" for j in range(self.ncols)) + " | rhs"]
        for r, row in enumerate(self._tableau):
            cells = " ".join(render(v) for v in row)
            lines.append(f"c{self._basis[r]} | {cells} | {render(self._rhs[r])}")
        return "\n".join(lines)


def solve(lp: LinearProgram, rule: str = "bland", crash: bool = True) -> LpSolution:
    """Solve ``lp`` from scratch."""
    return Simplex(lp, rule=rule, crash=crash).optimize()


def _dot(a, b) -> Rational:
    return sum((x * y for x, y in zip(a, b) if x and y), ZERO)


def check_certificate(lp: LinearProgram, sol: LpSolution) -> list[str]:
    """Problems with ``sol`` as an optimality certificate for ``lp``.

    Checks primal feasibility, dual sign conditions, dual feasibility of
    every column, complementary slackness and equal objectives, all in exact
    arithmetic.  An empty list means the certificate proves optimality.
    """
    if not sol.optimal:
        return [f"status is {sol.status.value}"]
    x, y = sol.primal, sol.duals
    n, cons = lp.num_variables, lp.constraints
    if len(x) != n or len(y) != len(cons):
        return ["certificate has the wrong shape"]
    sigma = 1 if lp.sense is Sense.MAXIMIZE else -1
    problems = []
    for j in range(n):
        if not lp.free[j] and x[j] < 0:
            problems.append(f"x[{j}] is negative")
    for r, c in enumerate(cons):
        act = _dot(c.coefficients, x)
        slack = act - c.rhs
        if (c.relation is Relation.LE and slack > 0
                or c.relation is Relation.GE and slack < 0
                or c.relation is Relation.EQ and slack != 0):
            problems.append(f"row {r} violated")
        s = sigma * y[r]
        if c.relation is Relation.LE and s < 0 or c.relation is Relation.GE and s > 0:
            problems.append(f"dual {r} has the wrong sign")
        if slack and y[r]:
            problems.append(f"row {r} breaks complementary slackness")
    for j in range(n):
        d = sigma * (sum((y[r] * c.coefficients[j] for r, c in enumerate(cons)
                          if y[r] and c.coefficients[j]), ZERO) - lp.objective[j])
        if lp.free[j] and d != 0 or d < 0:
            problems.append(f"column {j} is not dual feasible")
        elif d and x[j]:
            problems.append(f"column {j} breaks complementary slackness")
    primal = _dot(lp.objective, x)
    dual = _dot([c.rhs for c in cons], y)
    if primal != sol.objective_value or dual != primal:
        problems.append("primal and dual objectives differ")
    return problems


def _float_basis(tableau, rhs, basis, nreal, cost):
    """Optimal basis proposed by HiGHS for the standard-form program.

    Returns the basic columns (row-slack basics map to the row's own
    identity column) or None when HiGHS is unavailable or gives up.
    """
    try:
        import highspy
    except ImportError:  # pragma: no cover - highspy is a declared dependency
        return None
    m = len(tableau)
    if not m:
        return None
    starts, index, value = [0], [], []
    for j in range(nreal):
        for r in range(m):
            v = tableau[r][j]
            if v:
                index.append(r)
                value.append(float(v))
        starts.append(len(index))
    model = highspy.HighsLp()
    model.num_col_, model.num_row_ = nreal, m
    model.sense_ = highspy.ObjSense.kMaximize
    model.col_cost_ = np.array([float(c) for c in cost[:nreal]])
    model.col_lower_ = np.zeros(nreal)
    model.col_upper_ = np.full(nreal, highspy.kHighsInf)
    b = np.array([float(v) for v in rhs])
    model.row_lower_, model.row_upper_ = b, b.copy()
    model.a_matrix_.format_ = highspy.MatrixFormat.kColwise
    model.a_matrix_.start_ = np.array(starts, dtype=np.int32)
    model.a_matrix_.index_ = np.array(index, dtype=np.int32)
    model.a_matrix_.value_ = np.array(value)
    highs = highspy.Highs()
    highs.setOptionValue("output_flag", False)
    highs.setOptionValue("solver", "simplex")
    highs.setOptionValue("presolve", "off")
    highs.passModel(model)
    highs.run()
    if highs.getModelStatus() != highspy.HighsModelStatus.kOptimal:
        return None
    hb = highs.getBasis()
    if not hb.valid:
        return None
    basic = highspy.HighsBasisStatus.kBasic
    cols = [j for j, st in enumerate(hb.col_status) if st == basic]
    cols += [basis[r] for r, st in enumerate(hb.row_status) if st == basic]
    return cols
