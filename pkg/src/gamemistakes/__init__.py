"""Exact detection of mistakes and dominated strategies in two-player zero-sum games."""
from .lp import LinearProgram, LpSolution, Simplex, check_certificate, solve
from .matrix import (MatrixGame, classify, dominance_mixed, dominance_pure,
                     is_mistake, is_strong_mistake, iterated_elimination, mistakes,
                     parse_matrix, solve_value)
from .rational import Rational, as_rational, from_decimal_string, render, render_decimal
from .sequence import (classify_all_actions, is_mistake_action, is_strong_mistake_action,
                       solve_sequence_value)
from .tree import (GameTree, dominated_actions, from_matrix_game,
                   iterated_action_elimination, parse_tree, to_sequence_form, validate)
from .zoo import kuhn, random_matrix_game, rps, rpsq

__all__ = [
    "GameTree", "LinearProgram", "LpSolution", "MatrixGame", "Rational", "Simplex",
    "as_rational", "check_certificate", "classify", "classify_all_actions",
    "dominance_mixed", "dominance_pure", "dominated_actions", "from_decimal_string",
    "from_matrix_game", "is_mistake", "is_mistake_action", "is_strong_mistake",
    "is_strong_mistake_action", "iterated_action_elimination", "iterated_elimination",
    "kuhn", "mistakes", "parse_matrix", "parse_tree", "random_matrix_game", "render",
    "render_decimal", "rps", "rpsq", "solve", "solve_sequence_value", "solve_value",
    "to_sequence_form", "validate",
]
