"""Extensive-form game trees and their sequence form.

A :class:`GameTree` is an arena of nodes keyed by id.  Payoffs are stored for
player 1 only; player 2 receives the negation.
"""
from __future__ import annotations

import re
from collections import defaultdict
from dataclasses import dataclass
from typing import Iterator

from .matrix import STRICT, WEAK, GameFormatError, MatrixGame
from .rational import ONE, ZERO, Rational, as_rational, from_decimal_string, render


@dataclass(frozen=True)
class ChanceNode:
    outcomes: tuple  # ((label, probability, child), ...)

    @property
    def children(self) -> tuple:
        return tuple(c for _, _, c in self.outcomes)


@dataclass(frozen=True)
class PlayerNode:
    player: int
    infoset: str
    actions: tuple  # ((action, child), ...)

    @property
    def children(self) -> tuple:
        return tuple(c for _, c in self.actions)

    def child(self, action: str) -> str:
        for a, c in self.actions:
            if a == action:
                return c
        raise KeyError(action)


@dataclass(frozen=True)
class TerminalNode:
    payoff: Rational

    children = ()


class GameTree:
    """Immutable game tree; transformations return new trees."""

    def __init__(self, nodes: dict, root: str):
        self._nodes = dict(nodes)
        self.root = root

    @property
    def nodes(self) -> dict:
        return dict(self._nodes)

    def __getitem__(self, node_id: str):
        return self._nodes[node_id]

    def __contains__(self, node_id) -> bool:
        return node_id in self._nodes

    def __len__(self) -> int:
        return len(self._nodes)

    def walk(self) -> Iterator[str]:
        """Node ids in depth-first preorder, children in stored order."""
        stack = [self.root]
        seen = set()
        while stack:
            nid = stack.pop()
            if nid in seen or nid not in self._nodes:
                continue
            seen.add(nid)
            yield nid
            stack.extend(reversed(self._nodes[nid].children))

    def infosets(self) -> dict:
        """``infoset -> (player, [node ids])`` in discovery order."""
        found = {}
        for nid in self.walk():
            node = self._nodes[nid]
            if isinstance(node, PlayerNode):
                found.setdefault(node.infoset, (node.player, []))[1].append(nid)
        return found

    def to_text(self) -> str:
        lines = [f"root {self.root}"]
        for nid in self.walk():
            node = self._nodes[nid]
            if isinstance(node, TerminalNode):
                lines.append(f"node {nid} terminal {render(node.payoff)}")
            elif isinstance(node, ChanceNode):
                parts = [f"{lab}:{render(p)}" if lab == c else f"{lab}:{render(p)}:{c}"
                         for lab, p, c in node.outcomes]
                lines.append(f"node {nid} chance {{{','.join(parts)}}}")
            else:
                parts = [f"{a}:{c}" for a, c in node.actions]
                lines.append(f"node {nid} player {node.player} infoset {node.infoset} "
                             f"{{{','.join(parts)}}}")
        return "\n".join(lines) + "\n"


_NODE = re.compile(r"^node\s+(\S+)\s+(chance|player|terminal)\s*(.*)$")
_PLAYER = re.compile(r"^([12])\s+infoset\s+(\S+)\s*\{(.*)\}$")


def _entries(body: str, line_no: int) -> list:
    body = body.strip()
    if not (body.startswith("{") and body.endswith("}")):
        raise GameFormatError(f"line {line_no}: expected {{...}}")
    inner = body[1:-1].strip()
    if not inner:
        return []
    return [part.strip().split(":") for part in inner.split(",")]


def parse_tree(text: str) -> GameTree:
    """Read the line-oriented tree format.

    Records are ``root <id>``, ``node <id> terminal <payoff>``,
    ``node <id> player <1|2> infoset <name> {<action>:<child>,...}`` and
    ``node <id> chance {<label>:<prob>,...}`` where each chance label is the
    id of the child it leads to (``<label>:<prob>:<child>`` is also read).
    """
    nodes, root = {}, None
    for line_no, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("root"):
            parts = line.split()
            if len(parts) != 2:
                raise GameFormatError(f"line {line_no}: expected 'root <id>'")
            root = parts[1]
            continue
        m = _NODE.match(line)
        if not m:
            raise GameFormatError(f"line {line_no}: unrecognized record {line!r}")
        nid, kind, rest = m.groups()
        if nid in nodes:
            raise GameFormatError(f"line {line_no}: duplicate node {nid}")
        try:
            if kind == "terminal":
                nodes[nid] = TerminalNode(from_decimal_string(rest))
            elif kind == "chance":
                outcomes = []
                for entry in _entries(rest, line_no):
                    if len(entry) not in (2, 3):
                        raise GameFormatError(f"line {line_no}: bad chance entry {entry}")
                    child = entry[2] if len(entry) == 3 else entry[0]
                    outcomes.append((entry[0], from_decimal_string(entry[1]), child))
                nodes[nid] = ChanceNode(tuple(outcomes))
            else:
                pm = _PLAYER.match(rest)
                if not pm:
                    raise GameFormatError(f"line {line_no}: malformed player node")
                actions = []
                for entry in _entries("{" + pm.group(3) + "}", line_no):
                    if len(entry) != 2:
                        raise GameFormatError(f"line {line_no}: bad action entry {entry}")
                    actions.append((entry[0], entry[1]))
                nodes[nid] = PlayerNode(int(pm.group(1)), pm.group(2), tuple(actions))
        except ValueError as exc:
            if isinstance(exc, GameFormatError):
                raise
            raise GameFormatError(f"line {line_no}: {exc}") from None
    if root is None:
        raise GameFormatError("missing 'root <id>' record")
    return GameTree(nodes, root)


def from_matrix_game(game: MatrixGame) -> GameTree:
    """One move per player: player 1 picks a row, player 2 a column unseen."""
    nodes = {}
    row_actions = []
    for i, rl in enumerate(game.row_labels):
        nid = f"r{i}"
        row_actions.append((rl, nid))
        col_actions = []
        for j, cl in enumerate(game.col_labels):
            leaf = f"r{i}c{j}"
            nodes[leaf] = TerminalNode(game.payoffs[i][j])
            col_actions.append((cl, leaf))
        nodes[nid] = PlayerNode(2, "P2", tuple(col_actions))
    nodes["root"] = PlayerNode(1, "P1", tuple(row_actions))
    return GameTree(nodes, "root")


# -- validation -----------------------------------------------------------

def validate(tree: GameTree) -> list[str]:
    """All invariant violations of ``tree``; empty when the tree is valid."""
    problems = []
    nodes = tree.nodes
    if tree.root not in nodes:
        return [f"root {tree.root} is not a node"]
    parents = defaultdict(list)
    for nid, node in nodes.items():
        for child in node.children:
            if child not in nodes:
                problems.append(f"node {nid}: child {child} does not exist")
            else:
                parents[child].append(nid)
        if isinstance(node, ChanceNode):
            if not node.outcomes:
                problems.append(f"chance node {nid} has no outcomes")
            if any(p <= 0 for _, p, _ in node.outcomes):
                problems.append(f"chance node {nid} has a non-positive probability")
            total = sum((p for _, p, _ in node.outcomes), ZERO)
            if node.outcomes and total != 1:
                problems.append(f"chance node {nid}: probabilities sum to {render(total)}")
        elif isinstance(node, PlayerNode):
            if node.player not in (1, 2):
                problems.append(f"node {nid}: player must be 1 or 2")
            labels = [a for a, _ in node.actions]
            if not labels:
                problems.append(f"player node {nid} has no actions")
            if len(set(labels)) != len(labels):
                problems.append(f"player node {nid} repeats an action label")
    if parents.get(tree.root):
        problems.append(f"root {tree.root} has a parent")
    for nid in nodes:
        if nid != tree.root and len(parents.get(nid, ())) != 1:
            problems.append(f"node {nid} has {len(parents.get(nid, ()))} parents")
    if problems:
        return problems

    owner, action_sets, history = {}, {}, {}
    stack = [(tree.root, ((), ()))]
    while stack:
        nid, hist = stack.pop()
        node = nodes[nid]
        if isinstance(node, PlayerNode):
            info = node.infoset
            acts = frozenset(a for a, _ in node.actions)
            own = hist[node.player - 1]
            if info not in owner:
                owner[info], action_sets[info], history[info] = node.player, acts, own
            else:
                if owner[info] != node.player:
                    problems.append(f"infoset {info} mixes players")
                elif history[info] != own:
                    problems.append(f"infoset {info} violates perfect recall at node {nid}")
                if action_sets[info] != acts:
                    problems.append(f"infoset {info} has differing action sets at node {nid}")
            for a, child in node.actions:
                step = list(hist)
                step[node.player - 1] = own + ((info, a),)
                stack.append((child, tuple(step)))
        else:
            for child in node.children:
                stack.append((child, hist))
    return problems


# -- dominated actions ----------------------------------------------------

@dataclass(frozen=True)
class DominatedAction:
    player: int
    infoset: str
    action: str
    dominator: str


def _subtree_ranges(tree: GameTree) -> dict:
    """``node -> (min, max)`` player-1 payoff over leaves below it."""
    ranges = {}
    order = list(tree.walk())
    for nid in reversed(order):
        node = tree[nid]
        if isinstance(node, TerminalNode):
            ranges[nid] = (node.payoff, node.payoff)
        else:
            kids = [ranges[c] for c in node.children]
            ranges[nid] = (min(k[0] for k in kids), max(k[1] for k in kids))
    return ranges


def dominated_actions(tree: GameTree, mode: str = WEAK) -> list[DominatedAction]:
    """Actions beaten leaf-for-leaf by a sibling action at the same infoset.

    ``a`` strictly dominates ``b`` when the worst leaf reachable after ``a``
    (from any node of the infoset) beats the best leaf after ``b``.  Weakly:
    worst after ``a`` is at least the best after ``b``, excluding the case
    where every one of those leaves carries the same payoff.  Weak mode
    reports strictly dominated actions too.
    """
    if mode not in (STRICT, WEAK):
        raise ValueError(f"mode must be 'strict' or 'weak', got {mode!r}")
    ranges = _subtree_ranges(tree)
    found = []
    for info, (player, members) in tree.infosets().items():
        span = {}
        for nid in members:
            for a, child in tree[nid].actions:
                lo, hi = ranges[child]
                if player == 2:
                    lo, hi = -hi, -lo
                if a in span:
                    plo, phi = span[a]
                    span[a] = (min(plo, lo), max(phi, hi))
                else:
                    span[a] = (lo, hi)
        for b, (blo, bhi) in span.items():
            for a, (alo, ahi) in span.items():
                if a == b:
                    continue
                if mode == STRICT:
                    hit = alo > bhi
                else:
                    hit = alo >= bhi and not (alo == ahi == blo == bhi)
                if hit:
                    found.append(DominatedAction(player, info, b, a))
                    break
    return found


def remove_action(tree: GameTree, player: int, infoset: str, action: str) -> GameTree:
    """Delete ``action`` and its subtrees at every node of ``infoset``."""
    infos = tree.infosets()
    if infoset not in infos or infos[infoset][0] != player:
        raise KeyError(f"player {player} has no infoset {infoset!r}")
    members = infos[infoset][1]
    first = tree[members[0]]
    if action not in {a for a, _ in first.actions}:
        raise KeyError(f"infoset {infoset!r} has no action {action!r}")
    if len(first.actions) == 1:
        raise ValueError(f"cannot remove the last action of infoset {infoset!r}")
    nodes = tree.nodes
    for nid in members:
        node = nodes[nid]
        doomed = [node.child(action)]
        nodes[nid] = PlayerNode(node.player, node.infoset,
                                tuple((a, c) for a, c in node.actions if a != action))
        while doomed:
            gone = doomed.pop()
            doomed.extend(nodes.pop(gone).children)
    return GameTree(nodes, tree.root)


def iterated_action_elimination(tree: GameTree, mode: str = WEAK):
    """Remove dominated actions round by round until none remain.

    Returns ``(reduced_tree, trace)`` where ``trace`` lists one tuple of
    removed :class:`DominatedAction` per round that removed anything.
    """
    trace = []
    while True:
        found = dominated_actions(tree, mode)
        removed = []
        for d in found:
            # an earlier removal this round may have cut the infoset away
            info = tree.infosets().get(d.infoset)
            if info is None:
                continue
            node = tree[info[1][0]]
            if len(node.actions) > 1 and d.action in {a for a, _ in node.actions}:
                tree = remove_action(tree, d.player, d.infoset, d.action)
                removed.append(d)
        if not removed:
            return tree, tuple(trace)
        trace.append(tuple(removed))


# -- sequence form --------------------------------------------------------

@dataclass(frozen=True)
class Sequence:
    """A player's action sequence, named by its last (infoset, action)."""

    player: int
    infoset: str
    action: str
    parent: int  # index of the sequence leading into ``infoset``

    @property
    def label(self) -> str:
        return f"{self.infoset}/{self.action}"


@dataclass(frozen=True)
class SequenceForm:
    """Realization-plan constraints ``E x = e``, ``F y = f`` and payoffs ``A``.

    Sequence 0 of each player is the empty sequence (``infoset`` is None).
    ``payoffs[i][j]`` is player 1's chance-weighted payoff over leaves
    reached by exactly the sequence pair ``(i, j)``.
    """

    sequences: tuple  # (player-1 sequences, player-2 sequences)
    infosets: tuple   # (player-1 infosets, player-2 infosets)
    payoffs: tuple
    E: tuple
    e: tuple
    F: tuple
    f: tuple

    def index(self, player: int, infoset: str, action: str) -> int:
        for i, s in enumerate(self.sequences[player - 1]):
            if s.infoset == infoset and s.action == action:
                return i
        raise KeyError(f"player {player} has no action {action!r} at {infoset!r}")

    def perspective(self, player: int):
        """``(A, E, e, F, f)`` with ``player`` as the maximizer."""
        if player == 1:
            return self.payoffs, self.E, self.e, self.F, self.f
        if player != 2:
            raise ValueError(f"player must be 1 or 2, got {player!r}")
        A = self.payoffs
        At = tuple(tuple(-A[i][j] for i in range(len(A))) for j in range(len(A[0])))
        return At, self.F, self.f, self.E, self.e

    def is_realization_plan(self, player: int, plan) -> bool:
        _, E, e, _, _ = self.perspective(player)
        if any(v < 0 for v in plan):
            return False
        return all(sum((a * v for a, v in zip(row, plan) if a), ZERO) == rhs
                   for row, rhs in zip(E, e))

    def realization_plan(self, player: int, behavior: dict) -> tuple:
        """Plan of a behavioral strategy ``{(infoset, action): probability}``."""
        seqs = self.sequences[player - 1]
        plan = [ONE] + [ZERO] * (len(seqs) - 1)
        for i, s in enumerate(seqs[1:], 1):
            plan[i] = plan[s.parent] * as_rational(behavior[(s.infoset, s.action)])
        return tuple(plan)

    def uniform_plan(self, player: int) -> tuple:
        """Plan of the behavioral strategy uniform at every infoset."""
        seqs = self.sequences[player - 1]
        width = defaultdict(int)
        for s in seqs[1:]:
            width[s.infoset] += 1
        return self.realization_plan(
            player, {(s.infoset, s.action): ONE / width[s.infoset] for s in seqs[1:]})


def to_sequence_form(tree: GameTree) -> SequenceForm:
    problems = validate(tree)
    if problems:
        raise ValueError("invalid tree: " + "; ".join(problems))
    seqs = ([Sequence(1, None, None, -1)], [Sequence(2, None, None, -1)])
    infosets = ([], [])
    seq_index = ({}, {})
    parent_of = ({}, {})
    leaves = []  # (seq1, seq2, chance reach, payoff)

    stack = [(tree.root, 0, 0, ONE)]
    while stack:
        nid, s1, s2, reach = stack.pop()
        node = tree[nid]
        if isinstance(node, TerminalNode):
            leaves.append((s1, s2, reach, node.payoff))
            continue
        pushes = []
        if isinstance(node, ChanceNode):
            for _, p, child in node.outcomes:
                pushes.append((child, s1, s2, reach * p))
        else:
            p = node.player - 1
            own = (s1, s2)[p]
            if node.infoset not in parent_of[p]:
                parent_of[p][node.infoset] = own
                infosets[p].append(node.infoset)
                for a, _ in node.actions:
                    seq_index[p][(node.infoset, a)] = len(seqs[p])
                    seqs[p].append(Sequence(node.player, node.infoset, a, own))
            for a, child in node.actions:
                nxt = seq_index[p][(node.infoset, a)]
                pushes.append((child, nxt, s2, reach) if p == 0 else (child, s1, nxt, reach))
        stack.extend(reversed(pushes))

    n1, n2 = len(seqs[0]), len(seqs[1])
    A = [[ZERO] * n2 for _ in range(n1)]
    for s1, s2, reach, payoff in leaves:
        A[s1][s2] += reach * payoff

    def constraints(p, count):
        rows = [[ONE] + [ZERO] * (count - 1)]
        for info in infosets[p]:
            row = [ZERO] * count
            row[parent_of[p][info]] = -ONE
            for i, s in enumerate(seqs[p]):
                if s.infoset == info:
                    row[i] = ONE
            rows.append(row)
        rhs = (ONE,) + (ZERO,) * len(infosets[p])
        return tuple(map(tuple, rows)), rhs

    E, e = constraints(0, n1)
    F, f = constraints(1, n2)
    return SequenceForm((tuple(seqs[0]), tuple(seqs[1])),
                        (tuple(infosets[0]), tuple(infosets[1])),
                        tuple(map(tuple, A)), E, e, F, f)
