from fractions import Fraction

import pytest
from hypothesis import given, settings

from gamemistakes.matrix import STRICT, WEAK, GameFormatError, MatrixGame
from gamemistakes.rational import as_rational
from gamemistakes.tree import (ChanceNode, GameTree, PlayerNode, TerminalNode,
                               dominated_actions, from_matrix_game,
                               iterated_action_elimination, parse_tree, remove_action,
                               to_sequence_form, validate)
from gamemistakes.zoo import kuhn, random_matrix_game
from oracles import q, tree_normal_form
from treegen import small_trees


def leaf(v):
    return TerminalNode(as_rational(v))


def test_kuhn_is_valid():
    assert validate(kuhn(3)) == []
    assert validate(kuhn(7)) == []


def test_bad_chance_probabilities():
    tree = GameTree({"r": ChanceNode((("a", Fraction(1, 2), "a"), ("b", Fraction(1, 3), "b"))),
                     "a": leaf(1), "b": leaf(2)}, "r")
    assert len(validate(tree)) == 1


def test_mismatched_action_sets():
    tree = GameTree({
        "r": ChanceNode((("a", Fraction(1, 2), "a"), ("b", Fraction(1, 2), "b"))),
        "a": PlayerNode(1, "I", (("x", "a1"), ("y", "a2"))),
        "b": PlayerNode(1, "I", (("x", "b1"), ("z", "b2"))),
        "a1": leaf(0), "a2": leaf(0), "b1": leaf(0), "b2": leaf(0)}, "r")
    assert len(validate(tree)) == 1


def test_structural_violations():
    shared = GameTree({"r": PlayerNode(1, "I", (("x", "t"), ("y", "t"))), "t": leaf(0)}, "r")
    assert any("parents" in p for p in validate(shared))
    dangling = GameTree({"r": PlayerNode(1, "I", (("x", "nowhere"),))}, "r")
    assert any("does not exist" in p for p in validate(dangling))
    assert validate(GameTree({}, "r")) == ["root r is not a node"]
    mixed = GameTree({
        "r": PlayerNode(1, "I", (("x", "a"), ("y", "b"))),
        "a": PlayerNode(2, "J", (("u", "a1"),)), "b": PlayerNode(1, "J", (("u", "b1"),)),
        "a1": leaf(0), "b1": leaf(0)}, "r")
    assert any("mixes players" in p for p in validate(mixed))


def test_perfect_recall_violation():
    # player 1 forgets its own first move
    tree = GameTree({
        "r": PlayerNode(1, "I", (("x", "a"), ("y", "b"))),
        "a": PlayerNode(1, "K", (("u", "a1"), ("v", "a2"))),
        "b": PlayerNode(1, "K", (("u", "b1"), ("v", "b2"))),
        "a1": leaf(1), "a2": leaf(0), "b1": leaf(0), "b2": leaf(1)}, "r")
    assert any("perfect recall" in p for p in validate(tree))
    with pytest.raises(ValueError, match="perfect recall"):
        to_sequence_form(tree)


def _keys(found):
    return {(d.player, d.infoset, d.action) for d in found}


def test_kuhn3_dominated_actions():
    weak = _keys(dominated_actions(kuhn(3), WEAK))
    assert weak == {(1, "1|cb", "call"), (1, "3|cb", "fold"),
                    (2, "1|b", "call"), (2, "3|b", "fold"), (2, "3|c", "check")}
    strict = _keys(dominated_actions(kuhn(3), STRICT))
    assert strict == weak - {(2, "3|c", "check")}


def test_kuhn3_queen_bet_not_flagged_after_removal():
    reduced, trace = iterated_action_elimination(kuhn(3))
    assert len(trace) == 1
    assert (1, "2|", "bet") not in _keys(dominated_actions(reduced))
    assert (2, "2|c", "bet") not in _keys(dominated_actions(reduced))


def test_single_action_infoset_not_dominated():
    tree = GameTree({"r": PlayerNode(1, "I", (("only", "t"),)), "t": leaf(3)}, "r")
    assert dominated_actions(tree) == []


def test_identical_payoffs_not_weakly_dominated():
    tree = GameTree({"r": PlayerNode(1, "I", (("x", "a"), ("y", "b"))),
                     "a": leaf(1), "b": leaf(1)}, "r")
    assert dominated_actions(tree, WEAK) == []


@pytest.mark.parametrize("n", [4, 5, 9])
def test_kuhn_iterated_elimination(n):
    reduced, trace = iterated_action_elimination(kuhn(n))
    assert len(trace) == 1 and len(trace[0]) == 5
    cards = {int(d.infoset.split("|")[0]) for d in trace[0]}
    assert cards == {1, n}
    assert validate(reduced) == []
    assert iterated_action_elimination(reduced) == (reduced, ())


def test_remove_action():
    tree = kuhn(3)
    reduced = remove_action(tree, 2, "3|c", "check")
    assert validate(reduced) == []
    assert all(reduced[n].payoff == tree[n].payoff for n in reduced.nodes
               if isinstance(reduced[n], TerminalNode))
    assert "2-3|cc" not in reduced and "2-3|cb" in reduced
    assert reduced["root"] == tree["root"]
    with pytest.raises(KeyError):
        remove_action(reduced, 2, "3|c", "check")
    with pytest.raises(KeyError):
        remove_action(tree, 1, "3|c", "check")
    with pytest.raises(ValueError, match="last action"):
        remove_action(reduced, 2, "3|c", "bet")


def test_sequence_form_shapes():
    sf = to_sequence_form(kuhn(4))
    assert [len(s) for s in sf.sequences] == [17, 17]
    assert len(sf.E) == len(sf.infosets[0]) + 1 == 9
    assert len(sf.F) == len(sf.infosets[1]) + 1
    assert sf.e == (1,) + (0,) * 8
    assert len(sf.payoffs) == 17 and all(len(r) == 17 for r in sf.payoffs)
    assert sf.sequences[0][0].infoset is None


def test_sequence_form_of_matrix_game():
    game = random_matrix_game(2, 3, 1)
    sf = to_sequence_form(from_matrix_game(game))
    A = sf.payoffs
    assert all(A[i + 1][j + 1] == game.payoffs[i][j] for i in range(2) for j in range(3))
    assert all(A[0][j] == 0 for j in range(4)) and all(A[i][0] == 0 for i in range(3))


def test_realization_plans():
    sf = to_sequence_form(kuhn(3))
    for player in (1, 2):
        plan = sf.uniform_plan(player)
        assert sf.is_realization_plan(player, plan)
        assert plan[0] == 1 and min(plan) > 0
    bad = list(sf.uniform_plan(1))
    bad[1] = bad[1] + 1
    assert not sf.is_realization_plan(1, bad)


@settings(max_examples=60, deadline=None)
@given(small_trees())
def test_sequence_payoffs_reproduce_pure_payoffs(tree):
    """x^T A y equals the normal-form payoff for pure strategy pairs."""
    sf = to_sequence_form(tree)
    A, rows, cols = tree_normal_form(tree)
    for i, s1 in enumerate(rows):
        x = sf.realization_plan(1, {k: int(s1[k[0]] == k[1]) for k in
                                    [(s.infoset, s.action) for s in sf.sequences[0][1:]]})
        for j, s2 in enumerate(cols):
            y = sf.realization_plan(2, {k: int(s2[k[0]] == k[1]) for k in
                                        [(s.infoset, s.action) for s in sf.sequences[1][1:]]})
            total = sum(x[a] * sf.payoffs[a][b] * y[b]
                        for a in range(len(x)) for b in range(len(y)))
            assert q(total) == A[i][j]


def test_text_round_trip():
    tree = kuhn(3)
    again = parse_tree(tree.to_text())
    assert again.nodes == tree.nodes and again.root == tree.root
    game_tree = from_matrix_game(MatrixGame(((1, 2), (3, 4))))
    assert parse_tree(game_tree.to_text()).nodes == game_tree.nodes


def test_parse_tree_forms():
    text = """
    # a coin flip followed by a guess
    root c
    node c chance {h:1/2,t:0.5}
    node h player 1 infoset I {left:hl,right:hr}
    node t player 1 infoset I {left:tl,right:tr}
    node hl terminal 1
    node hr terminal -1
    node tl terminal -1/2
    node tr terminal 1
    """
    tree = parse_tree(text)
    assert validate(tree) == []
    assert tree["c"].outcomes[1] == ("t", Fraction(1, 2), "t")
    labelled = parse_tree("root c\nnode c chance {heads:1:x}\nnode x terminal 0\n")
    assert labelled["c"].outcomes == (("heads", 1, "x"),)


@pytest.mark.parametrize("text", [
    "node a terminal 1",
    "root a\nnode a terminal one",
    "root a\nnode a player 3 infoset I {x:b}",
    "root a\nnode a chance h:1",
    "root a\nnode a chance {h}",
    "root a\nnode a player 1 infoset I {x}",
    "root a\nnode a terminal 1\nnode a terminal 2",
    "root\n",
    "root a\nleaf a 1",
])
def test_parse_tree_errors(text):
    with pytest.raises(GameFormatError):
        parse_tree(text)
