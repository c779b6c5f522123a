"""Built-in games."""
from __future__ import annotations

import numpy as np

from .matrix import MatrixGame
from .rational import ONE, as_rational
from .tree import ChanceNode, GameTree, PlayerNode, TerminalNode

RPS_LABELS = ("R", "P", "S")
RPSQ_LABELS = ("R", "P", "S", "Q")


def rps() -> MatrixGame:
    return MatrixGame(((0, -1, 1), (1, 0, -1), (-1, 1, 0)), RPS_LABELS, RPS_LABELS)


def rpsq() -> MatrixGame:
    """Rock-paper-scissors plus a fourth strategy Q; order R, P, S, Q."""
    payoffs = ((0, -1, 1, 0),
               (1, 0, -1, 1),
               (-1, 1, 0, 0),
               (0, -1, 1, -1))
    return MatrixGame(payoffs, RPSQ_LABELS, RPSQ_LABELS)


def matching_pennies() -> MatrixGame:
    return MatrixGame(((1, -1), (-1, 1)), ("H", "T"), ("H", "T"))


def random_matrix_game(m: int, n: int, seed) -> MatrixGame:
    """Payoffs uniform on [-1, 1], each converted exactly to a dyadic rational.

    ``seed`` is anything :func:`numpy.random.default_rng` accepts (an int or a
    sequence of ints); draws come from numpy's PCG64 generator, so a seed
    reproduces the same game on every platform.
    """
    if m < 1 or n < 1:
        raise ValueError("matrix dimensions must be positive")
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    draws = rng.uniform(-1.0, 1.0, size=(m, n))
    return MatrixGame(tuple(tuple(as_rational(float(v)) for v in row) for row in draws))


def kuhn(n: int = 3) -> GameTree:
    """Kuhn poker with cards ``1..n``, antes of 1 and a single bet of 1.

    One chance node deals every ordered card pair.  Infosets are named
    ``<own card>|<public history>`` with ``b``/``c`` for bet/check, e.g.
    player 1 facing check-bet with card 3 is ``3|cb``.
    """
    if not isinstance(n, int) or n < 2:
        raise ValueError("Kuhn poker needs at least 2 cards")
    nodes = {}
    prob = ONE / (n * (n - 1))
    outcomes = []
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            if i == j:
                continue
            deal = f"{i}-{j}"
            outcomes.append((deal, prob, deal))
            show = 1 if i > j else -1

            def leaf(suffix, payoff):
                nodes[deal + suffix] = TerminalNode(as_rational(payoff))
                return deal + suffix

            nodes[deal + "|b"] = PlayerNode(2, f"{j}|b", (
                ("call", leaf("|bc", 2 * show)),
                ("fold", leaf("|bf", 1))))
            nodes[deal + "|cb"] = PlayerNode(1, f"{i}|cb", (
                ("call", leaf("|cbc", 2 * show)),
                ("fold", leaf("|cbf", -1))))
            nodes[deal + "|c"] = PlayerNode(2, f"{j}|c", (
                ("bet", deal + "|cb"),
                ("check", leaf("|cc", show))))
            nodes[deal] = PlayerNode(1, f"{i}|", (
                ("bet", deal + "|b"),
                ("check", deal + "|c")))
    nodes["root"] = ChanceNode(tuple(outcomes))
    return GameTree(nodes, "root")
