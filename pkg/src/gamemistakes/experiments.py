"""Random matrix game and generalized Kuhn poker experiments."""
from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

from .matrix import STRICT, WEAK, dominance_pure, iterated_elimination, mistakes
from .rational import Rational, as_rational
from .sequence import classify_all_actions
from .zoo import kuhn, random_matrix_game


@dataclass(frozen=True)
class TrialCounts:
    """Player-1 strategy counts in one random game."""

    trial: int
    sds: int
    wds: int
    iter_sds: int
    iter_wds: int
    mistakes: int


@dataclass(frozen=True)
class Table1Row:
    m: int
    trials: int
    avg_sds: Rational
    avg_wds: Rational
    avg_iter_sds: Rational
    avg_iter_wds: Rational
    avg_mistakes: Rational
    per_trial: tuple = ()


@dataclass(frozen=True)
class Table2Row:
    n: int
    dominated_p1: int
    dominated_p2: int
    mistakes_p1: int
    mistakes_p2: int
    total_actions_p1: int
    total_actions_p2: int
    strong_mistakes_p1: int = None
    strong_mistakes_p2: int = None
    value: Rational = None


def trial_seed(seed: int, trial: int) -> tuple:
    """Seed material for one trial; fed to numpy's SeedSequence."""
    return (int(seed), int(trial))


def count_trial(m: int, seed: int, trial: int) -> TrialCounts:
    game = random_matrix_game(m, m, trial_seed(seed, trial))
    sds = wds = 0
    for k in range(m):
        dom = dominance_pure(game, 1, k)
        sds += bool(dom.strict_by)
        wds += bool(dom.weak_by)
    iter_sds = len(iterated_elimination(game, STRICT).removed(1))
    iter_wds = len(iterated_elimination(game, WEAK).removed(1))
    n_mistakes = sum(v.verdict for v in mistakes(game, 1))
    return TrialCounts(trial, sds, wds, iter_sds, iter_wds, n_mistakes)


def _count_chunk(args):
    m, seed, trials = args
    return [count_trial(m, seed, t) for t in trials]


def _workers(threads):
    return max(1, threads if threads else (os.cpu_count() or 1))


def run_table1(m: int, trials: int, seed: int = 0, threads: int = 1) -> Table1Row:
    """Average player-1 counts over ``trials`` random ``m x m`` games.

    Trial ``t`` draws its game from seed material ``(seed, t)``, so results
    do not depend on ``threads``.
    """
    if m < 2 or trials < 1:
        raise ValueError("need m >= 2 and trials >= 1")
    workers = _workers(threads)
    if workers == 1:
        counts = [count_trial(m, seed, t) for t in range(trials)]
    else:
        chunks = [(m, seed, range(t, min(t + 25, trials))) for t in range(0, trials, 25)]
        with ProcessPoolExecutor(workers) as pool:
            counts = [c for part in pool.map(_count_chunk, chunks) for c in part]
    total = as_rational(trials)

    def avg(attr):
        return as_rational(sum(getattr(c, attr) for c in counts)) / total

    return Table1Row(m, trials, avg("sds"), avg("wds"), avg("iter_sds"),
                     avg("iter_wds"), avg("mistakes"), tuple(counts))


def table2_row(n: int, strong: bool = False) -> Table2Row:
    report = classify_all_actions(kuhn(n), strong=strong)
    return Table2Row(
        n,
        report.count(1, "dominated_weak"), report.count(2, "dominated_weak"),
        report.count(1, "mistake"), report.count(2, "mistake"),
        len(report.for_player(1)), len(report.for_player(2)),
        report.count(1, "strong_mistake") if strong else None,
        report.count(2, "strong_mistake") if strong else None,
        report.value)


def _row(args):
    return table2_row(*args)


def run_table2(n_values, strong: bool = False, threads: int = 1) -> list[Table2Row]:
    """One row per deck size; dominated counts include weak dominance."""
    n_values = list(n_values)
    if any(n <= 3 for n in n_values):
        raise ValueError("generalized Kuhn rows need n > 3")
    workers = min(_workers(threads), len(n_values)) if n_values else 1
    if workers <= 1:
        return [table2_row(n, strong) for n in n_values]
    with ProcessPoolExecutor(workers) as pool:
        return list(pool.map(_row, [(n, strong) for n in n_values]))


TABLE1_ROWS = ("avg_sds", "avg_wds", "avg_iter_sds", "avg_iter_wds", "avg_mistakes")
TABLE2_ROWS = ("dominated_p1", "dominated_p2", "mistakes_p1", "mistakes_p2",
               "total_actions_p1", "total_actions_p2")
