"""Two-player zero-sum matrix games: value, dominance, mistakes.

Every analysis is phrased for the row player of a *perspective matrix*.  For
player 1 that is the payoff matrix itself; player 2 is handled by analyzing
the negated transpose, so a single LP family serves both players.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .lp import LinearProgram, Relation, Simplex, Status
from .rational import ONE, ZERO, Rational, as_rational, from_decimal_string, render

STRICT = "strict"
WEAK = "weak"


class GameFormatError(ValueError):
    """Raised for malformed game text."""


@dataclass(frozen=True)
class MatrixGame:
    """Payoffs to player 1; player 2 receives the negation."""

    payoffs: tuple
    row_labels: tuple = None
    col_labels: tuple = None

    def __post_init__(self):
        rows = tuple(tuple(as_rational(v) for v in row) for row in self.payoffs)
        if not rows or not rows[0]:
            raise ValueError("a matrix game needs at least one row and column")
        if any(len(r) != len(rows[0]) for r in rows):
            raise ValueError("payoff matrix is not rectangular")
        object.__setattr__(self, "payoffs", rows)
        rl = self.row_labels or tuple(str(i + 1) for i in range(len(rows)))
        cl = self.col_labels or tuple(str(j + 1) for j in range(len(rows[0])))
        if len(rl) != len(rows) or len(cl) != len(rows[0]):
            raise ValueError("label count does not match the matrix")
        object.__setattr__(self, "row_labels", tuple(rl))
        object.__setattr__(self, "col_labels", tuple(cl))

    @property
    def rows(self) -> int:
        return len(self.payoffs)

    @property
    def cols(self) -> int:
        return len(self.payoffs[0])

    def num_strategies(self, player: int) -> int:
        return self.rows if _check_player(player) == 1 else self.cols

    def labels(self, player: int) -> tuple:
        return self.row_labels if _check_player(player) == 1 else self.col_labels

    def perspective(self, player: int) -> tuple:
        """Payoffs to ``player`` with that player's strategies as rows."""
        if _check_player(player) == 1:
            return self.payoffs
        return tuple(tuple(-self.payoffs[i][j] for i in range(self.rows))
                     for j in range(self.cols))

    def to_text(self) -> str:
        lines = [f"{self.rows} {self.cols}"]
        lines += [" ".join(render(v) for v in row) for row in self.payoffs]
        return "\n".join(lines) + "\n"


def _check_player(player) -> int:
    if player not in (1, 2):
        raise ValueError(f"player must be 1 or 2, got {player!r}")
    return player


def _check_index(game: MatrixGame, player: int, k: int):
    count = game.num_strategies(player)
    if not isinstance(k, int) or not 0 <= k < count:
        raise IndexError(f"strategy index {k!r} out of range for player {player} "
                         f"({count} strategies)")


def parse_matrix(text: str) -> MatrixGame:
    """Read ``m n`` followed by ``m`` rows of rational literals.

    Blank lines and ``#`` comments are ignored.
    """
    lines = [ln.split("#", 1)[0].strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln]
    if not lines:
        raise GameFormatError("empty matrix file")
    header = lines[0].split()
    try:
        m, n = (int(t) for t in header)
    except ValueError:
        raise GameFormatError(f"bad header {lines[0]!r}, expected 'm n'") from None
    if m < 1 or n < 1:
        raise GameFormatError("matrix dimensions must be positive")
    if len(lines) - 1 != m:
        raise GameFormatError(f"expected {m} rows, found {len(lines) - 1}")
    rows = []
    for i, ln in enumerate(lines[1:]):
        cells = ln.split()
        if len(cells) != n:
            raise GameFormatError(f"row {i + 1} has {len(cells)} entries, expected {n}")
        try:
            rows.append([from_decimal_string(c) for c in cells])
        except ValueError as exc:
            raise GameFormatError(f"row {i + 1}: {exc}") from None
    return MatrixGame(tuple(map(tuple, rows)))


# -- linear programs ------------------------------------------------------

def zero_sum_program(A, E, e, F, f) -> LinearProgram:
    """Maximizer's LP in sequence form; variables ``x`` then free ``q``.

    maximize ``-q.f`` subject to ``x^T(-A) - q^T F <= 0``, ``E x = e`` and
    ``x >= 0``.  The optimum is the game value to the maximizer.
    """
    nx, ny, nq = len(A), len(A[0]), len(F)
    constraints = []
    for j in range(ny):
        row = [-A[i][j] for i in range(nx)] + [-F[r][j] for r in range(nq)]
        constraints.append((row, Relation.LE, ZERO))
    for row, rhs in zip(E, e):
        constraints.append((list(row) + [ZERO] * nq, Relation.EQ, rhs))
    objective = [ZERO] * nx + [-v for v in f]
    return LinearProgram(objective, tuple(constraints), (False,) * nx + (True,) * nq)


def value_program(matrix) -> LinearProgram:
    """Maximin LP of the row player: variables ``x_1..x_m`` then free ``q``."""
    m, n = len(matrix), len(matrix[0])
    return zero_sum_program(matrix, ((ONE,) * m,), (ONE,), ((ONE,) * n,), (ONE,))


@dataclass(frozen=True)
class Verdict:
    """Outcome of a mistake test; unpacks as ``(verdict, max_prob)``."""

    verdict: bool
    max_prob: Rational
    value: Rational
    witness: tuple
    opponent: tuple = None

    def __iter__(self):
        return iter((self.verdict, self.max_prob))


class EquilibriumFace:
    """Optimal-strategy face of one player, explored by successive LPs.

    The value LP is solved once and pinned; each probe then maximizes one
    strategy's probability from the current basis.  With ``opponent`` given,
    the best response to it is pinned as well (strong mistakes).  Pass a
    program built by :func:`zero_sum_program` for sequence-form games; the
    default is the plain maximin LP of ``matrix``.
    """

    def __init__(self, matrix, opponent=None, rule: str = "bland", program=None):
        self.matrix = tuple(tuple(as_rational(v) for v in row) for row in matrix)
        self.m = len(self.matrix)
        self.program = program or value_program(self.matrix)
        self.simplex = Simplex(self.program, rule=rule)
        first = self.simplex.optimize()
        assert first.status is Status.OPTIMAL
        self.value = first.objective_value
        self.witness = first.primal[:self.m]
        self.simplex.pin()
        self.opponent = None
        self.response_value = None
        if opponent is not None:
            self.opponent = tuple(as_rational(p) for p in opponent)
            payoff = [sum((a * p for a, p in zip(row, self.opponent)), ZERO)
                      for row in self.matrix]
            payoff += [ZERO] * (self.program.num_variables - self.m)
            second = self.simplex.optimize(payoff)
            assert second.status is Status.OPTIMAL
            self.response_value = second.objective_value
            self.witness = second.primal[:self.m]
            self.simplex.pin()

    def max_probability(self, k: int) -> Rational:
        objective = [ZERO] * self.program.num_variables
        objective[k] = ONE
        sol = self.simplex.optimize(objective)
        assert sol.status is Status.OPTIMAL
        return sol.objective_value

    def verdict(self, k: int) -> Verdict:
        p = self.max_probability(k)
        return Verdict(p == 0, p, self.value, self.witness, self.opponent)


def solve_value(game: MatrixGame, player: int = 1):
    """Game value to ``player`` and a maximin-optimal mixed strategy."""
    face = EquilibriumFace(game.perspective(player))
    return face.value, face.witness


def is_mistake(game: MatrixGame, player: int, k: int) -> Verdict:
    """Is strategy ``k`` played with probability zero in every equilibrium?"""
    _check_index(game, player, k)
    return EquilibriumFace(game.perspective(player)).verdict(k)


def _fully_mixed(game: MatrixGame, player: int, opponent):
    n = game.num_strategies(3 - player)
    if opponent is None:
        return tuple(as_rational(1) / n for _ in range(n))
    opponent = tuple(as_rational(p) for p in opponent)
    if len(opponent) != n:
        raise ValueError(f"opponent strategy needs {n} entries")
    if any(p <= 0 for p in opponent):
        raise ValueError("opponent strategy must be fully mixed (all entries > 0)")
    if sum(opponent) != 1:
        raise ValueError("opponent strategy must sum to 1")
    return opponent


def is_strong_mistake(game: MatrixGame, player: int, k: int,
                      fully_mixed_opponent=None) -> Verdict:
    """Is ``k`` unused by every equilibrium that best-responds to a fully
    mixed opponent (uniform by default)?"""
    _check_index(game, player, k)
    opponent = _fully_mixed(game, player, fully_mixed_opponent)
    return EquilibriumFace(game.perspective(player), opponent).verdict(k)


def mistakes(game: MatrixGame, player: int = 1, strong: bool = False,
             fully_mixed_opponent=None) -> list[Verdict]:
    """Verdicts for all strategies of ``player`` sharing one LP session."""
    opponent = _fully_mixed(game, player, fully_mixed_opponent) if strong else None
    face = EquilibriumFace(game.perspective(player), opponent)
    return [face.verdict(k) for k in range(game.num_strategies(player))]


# -- dominance ------------------------------------------------------------

@dataclass(frozen=True)
class PureDominance:
    strict_by: tuple
    weak_by: tuple


def dominance_pure(game: MatrixGame, player: int, k: int) -> PureDominance:
    """Pure strategies that strictly / weakly dominate strategy ``k``."""
    _check_index(game, player, k)
    M = game.perspective(player)
    return _pure_dominators(M, k, range(len(M)), range(len(M[0])))


def _pure_dominators(M, k, rows, cols) -> PureDominance:
    strict, weak = [], []
    for i in rows:
        if i == k:
            continue
        ge = all(M[i][j] >= M[k][j] for j in cols)
        if not ge:
            continue
        if all(M[i][j] > M[k][j] for j in cols):
            strict.append(i)
        if any(M[i][j] > M[k][j] for j in cols):
            weak.append(i)
    return PureDominance(tuple(strict), tuple(weak))


def dominance_mixed(game: MatrixGame, player: int, k: int, mode: str = STRICT):
    """Is ``k`` dominated by a mixture of the player's other strategies?

    Returns ``(dominated, dominator)`` where the dominator is a probability
    vector over all of the player's strategies (zero at ``k``), or ``None``.
    """
    _check_index(game, player, k)
    if mode not in (STRICT, WEAK):
        raise ValueError(f"mode must be 'strict' or 'weak', got {mode!r}")
    M = game.perspective(player)
    others = [i for i in range(len(M)) if i != k]
    if not others:
        return False, None
    n = len(M[0])
    p = len(others)
    constraints = []
    if mode == STRICT:
        # variables: mixture over others, then free margin
        for j in range(n):
            constraints.append(([M[i][j] for i in others] + [-ONE], Relation.GE, M[k][j]))
        constraints.append(([ONE] * p + [ZERO], Relation.EQ, ONE))
        lp = LinearProgram([ZERO] * p + [ONE], tuple(constraints), (False,) * p + (True,))
    else:
        for j in range(n):
            constraints.append(([M[i][j] for i in others], Relation.GE, M[k][j]))
        constraints.append(([ONE] * p, Relation.EQ, ONE))
        lp = LinearProgram([sum((M[i][j] for j in range(n)), ZERO) for i in others],
                           tuple(constraints))
    sol = Simplex(lp).optimize()
    if sol.status is not Status.OPTIMAL:
        return False, None
    margin = sol.objective_value
    if mode == WEAK:
        margin -= sum(M[k], ZERO)
    if margin <= 0:
        return False, None
    mix = [ZERO] * len(M)
    for i, v in zip(others, sol.primal):
        mix[i] = v
    return True, tuple(mix)


@dataclass(frozen=True)
class Elimination:
    player: int
    index: int
    dominator: int
    round: int


@dataclass(frozen=True)
class EliminationResult:
    rows: tuple
    cols: tuple
    trace: tuple

    def __iter__(self):
        return iter((self.rows, self.cols, self.trace))

    def removed(self, player: int) -> tuple:
        return tuple(e.index for e in self.trace if e.player == player)


def iterated_elimination(game: MatrixGame, mode: str = STRICT) -> EliminationResult:
    """Remove dominated pure strategies one at a time until none remain.

    Order policy: players alternate starting with player 1 (a player with
    nothing to remove passes); each step removes the lowest-index dominated
    strategy and the scan restarts on the reduced game.
    """
    if mode not in (STRICT, WEAK):
        raise ValueError(f"mode must be 'strict' or 'weak', got {mode!r}")
    alive = {1: list(range(game.rows)), 2: list(range(game.cols))}
    views = {1: game.perspective(1), 2: game.perspective(2)}
    trace = []
    player = 1
    while True:
        step = _first_dominated(views[player], alive[player], alive[3 - player], mode)
        if step is None:
            player = 3 - player
            step = _first_dominated(views[player], alive[player], alive[3 - player], mode)
            if step is None:
                break
        k, dom = step
        alive[player].remove(k)
        trace.append(Elimination(player, k, dom, len(trace) + 1))
        player = 3 - player
    return EliminationResult(tuple(alive[1]), tuple(alive[2]), tuple(trace))


def _first_dominated(M, own, other, mode):
    if len(own) < 2:
        return None
    for k in own:
        dom = _pure_dominators(M, k, own, other)
        found = dom.strict_by if mode == STRICT else dom.weak_by
        if found:
            return k, found[0]
    return None


def remove_strategies(game: MatrixGame, player: int, indices: Iterable[int]) -> MatrixGame:
    """Copy of ``game`` without the given strategies of ``player``."""
    drop = set(indices)
    for k in drop:
        _check_index(game, player, k)
    if len(drop) >= game.num_strategies(player):
        raise ValueError("cannot remove every strategy of a player")
    if _check_player(player) == 1:
        keep = [i for i in range(game.rows) if i not in drop]
        return MatrixGame(tuple(game.payoffs[i] for i in keep),
                          tuple(game.row_labels[i] for i in keep), game.col_labels)
    keep = [j for j in range(game.cols) if j not in drop]
    return MatrixGame(tuple(tuple(row[j] for j in keep) for row in game.payoffs),
                      game.row_labels, tuple(game.col_labels[j] for j in keep))


# -- full report ----------------------------------------------------------

@dataclass(frozen=True)
class StrategyReport:
    index: int
    label: str
    strictly_dominated: bool
    weakly_dominated: bool
    iteratively_strictly_dominated: bool
    iteratively_weakly_dominated: bool
    mixed_dominated: bool
    mistake: bool
    strong_mistake: bool
    max_prob: Rational
    strong_max_prob: Rational


@dataclass(frozen=True)
class StrategyClassification:
    player: int
    game_value: Rational
    witness: tuple
    opponent: tuple
    strategies: tuple = field(default_factory=tuple)


def classify(game: MatrixGame, player: int = 1, fully_mixed_opponent=None) -> StrategyClassification:
    """Run every dominance and mistake analysis for one player."""
    _check_player(player)
    n = game.num_strategies(player)
    it_strict = set(iterated_elimination(game, STRICT).removed(player))
    it_weak = set(iterated_elimination(game, WEAK).removed(player))
    plain = mistakes(game, player)
    strong = mistakes(game, player, strong=True, fully_mixed_opponent=fully_mixed_opponent)
    reports = []
    for k in range(n):
        dom = dominance_pure(game, player, k)
        mixed, _ = dominance_mixed(game, player, k, STRICT)
        reports.append(StrategyReport(
            k, game.labels(player)[k], bool(dom.strict_by), bool(dom.weak_by),
            k in it_strict, k in it_weak, mixed, plain[k].verdict,
            strong[k].verdict, plain[k].max_prob, strong[k].max_prob))
    return StrategyClassification(player, plain[0].value if plain else None,
                                  plain[0].witness, strong[0].opponent, tuple(reports))
