"""Mistake and strong-mistake detection for actions of extensive-form games.

An action is tested through the sequence ending in it: the largest
realization probability that sequence attains over the player's optimal
realization plans.  The sequence-form value LP is solved and pinned once per
player; each action is then a single warm-started probe.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .lp import Status
from .matrix import WEAK, EquilibriumFace, Verdict, zero_sum_program
from .rational import Rational, as_rational
from .tree import (GameTree, SequenceForm, dominated_actions,
                   iterated_action_elimination, to_sequence_form)


def sequence_program(sf: SequenceForm, player: int):
    return zero_sum_program(*sf.perspective(player))


def _face(sf: SequenceForm, player: int, opponent=None, rule="bland") -> EquilibriumFace:
    A = sf.perspective(player)[0]
    return EquilibriumFace(A, opponent, rule=rule, program=sequence_program(sf, player))


def solve_sequence_value(sf: SequenceForm, player: int = 1):
    """Value to ``player`` and one optimal realization plan."""
    face = _face(sf, player)
    return face.value, face.witness


def check_fully_mixed_plan(sf: SequenceForm, player: int, plan) -> tuple:
    """Validate a realization plan of ``player`` that mixes at every infoset."""
    plan = tuple(as_rational(v) for v in plan)
    if len(plan) != len(sf.sequences[player - 1]):
        raise ValueError("plan length does not match the player's sequences")
    if not sf.is_realization_plan(player, plan):
        raise ValueError("not a realization plan")
    if any(v <= 0 for v in plan):
        raise ValueError("plan must give every action positive probability")
    return plan


def _sequence(sf: SequenceForm, player: int, infoset: str, action: str) -> int:
    if player not in (1, 2):
        raise ValueError(f"player must be 1 or 2, got {player!r}")
    return sf.index(player, infoset, action)


def is_mistake_action(sf: SequenceForm, player: int, infoset: str, action: str) -> Verdict:
    k = _sequence(sf, player, infoset, action)
    return _face(sf, player).verdict(k)


def is_strong_mistake_action(sf: SequenceForm, player: int, infoset: str, action: str,
                             fully_mixed_plan=None) -> Verdict:
    """Strong-mistake cascade against a fully mixed opponent plan.

    The opponent defaults to the behavioral strategy that is uniform at each
    of its infosets.
    """
    k = _sequence(sf, player, infoset, action)
    opp = 3 - player
    plan = (sf.uniform_plan(opp) if fully_mixed_plan is None
            else check_fully_mixed_plan(sf, opp, fully_mixed_plan))
    return _face(sf, player, plan).verdict(k)


@dataclass(frozen=True)
class ActionReport:
    player: int
    infoset: str
    action: str
    sequence: int
    dominated_strict: bool
    dominated_weak: bool
    iteratively_dominated: bool
    mistake: bool
    strong_mistake: bool
    unreachable: bool
    max_prob: Rational
    strong_max_prob: Rational


@dataclass(frozen=True)
class ActionClassification:
    value: Rational  # to player 1
    witness: tuple   # optimal realization plans (player 1, player 2)
    opponents: tuple  # fully mixed plans used for the strong test, per player
    actions: tuple = field(default_factory=tuple)

    def for_player(self, player: int) -> tuple:
        return tuple(a for a in self.actions if a.player == player)

    def count(self, player: int, flag: str) -> int:
        return sum(1 for a in self.for_player(player) if getattr(a, flag))


def classify_all_actions(tree: GameTree, strong: bool = True, mode: str = WEAK,
                         rule: str = "bland", sf: SequenceForm = None) -> ActionClassification:
    """Dominance, iterated dominance, mistake and strong-mistake flags for
    every action, in sequence order (player 1 first).

    ``unreachable`` marks actions whose infoset the player's own optimal
    plans never reach; their sequence probability is forced to zero, so
    they always come out as mistakes.
    """
    if sf is None:
        sf = to_sequence_form(tree)
    strict_set = {(d.player, d.infoset, d.action) for d in dominated_actions(tree, "strict")}
    weak_set = {(d.player, d.infoset, d.action) for d in dominated_actions(tree, WEAK)}
    _, trace = iterated_action_elimination(tree, mode)
    iter_set = {(d.player, d.infoset, d.action) for rnd in trace for d in rnd}

    reports, witnesses, opponents, value = [], [], [], None
    for player in (1, 2):
        seqs = sf.sequences[player - 1]
        face = _face(sf, player, rule=rule)
        if player == 1:
            value = face.value
        witnesses.append(face.witness)
        probs = [face.max_probability(k) for k in range(len(seqs))]
        strong_probs = [None] * len(seqs)
        if strong:
            plan = sf.uniform_plan(3 - player)
            opponents.append(plan)
            sface = _face(sf, player, plan, rule=rule)
            strong_probs = [sface.max_probability(k) for k in range(len(seqs))]
        else:
            opponents.append(None)
        for k, s in enumerate(seqs):
            if k == 0:
                continue
            key = (player, s.infoset, s.action)
            reports.append(ActionReport(
                player, s.infoset, s.action, k,
                key in strict_set, key in weak_set, key in iter_set,
                probs[k] == 0,
                strong_probs[k] == 0 if strong else probs[k] == 0,
                probs[s.parent] == 0, probs[k], strong_probs[k]))
    return ActionClassification(value, tuple(witnesses), tuple(opponents), tuple(reports))
