"""Command-line front end.

Every subcommand prints either an aligned text report or, with
``--output records``, one ``key=value`` record per line.  Each record starts
with ``record=<kind>``; the kinds and their keys are:

``game``      kind, rows, cols (matrix) or nodes, infosets (tree)
``value``     player, value
``witness``   player, strategy (or sequence), prob
``opponent``  player, strategy (or sequence), prob; the fully mixed opponent
              used by the strong-mistake test
``strategy``  player, index, label, strictly_dominated, weakly_dominated,
              mixed_dominated, iterated, mistake, max_prob, strong_mistake,
              strong_max_prob
``action``    player, infoset, action, sequence, strictly_dominated,
              weakly_dominated, iterated, mistake, unreachable, max_prob,
              strong_mistake, strong_max_prob
``table1``    m, trials, seed and the averages as exact fractions
``table2``    n and the counts of the corresponding table row

Flags are ``0``/``1``; ``-`` marks a field that was not computed (strong
fields without ``--strong``).  Exit status is 0 on success, 1 on usage
errors and 2 when an input file cannot be read or parsed.
"""
from __future__ import annotations

import argparse
import os
import sys

from .experiments import run_table1, run_table2
from .matrix import STRICT, WEAK, GameFormatError, classify, parse_matrix, solve_value
from .rational import render, render_decimal
from .sequence import classify_all_actions, solve_sequence_value
from .tree import parse_tree, to_sequence_form, validate
from .zoo import kuhn, random_matrix_game, rpsq

EXIT_USAGE = 1
EXIT_INPUT = 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


class InputError(Exception):
    """An input file is unreadable or malformed."""


# -- argument types -------------------------------------------------------

def _positive(text):
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}")
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {value}")
    return value


def _seed(text):
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer seed, got {text!r}")
    if not 0 <= value < 2 ** 64:
        raise argparse.ArgumentTypeError("seed must fit in an unsigned 64-bit integer")
    return value


def _int_list(text):
    try:
        values = [int(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")
    if not values:
        raise argparse.ArgumentTypeError("empty list")
    return values


def _digits(text):
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a digit count, got {text!r}")
    if not 0 <= value <= 100:
        raise argparse.ArgumentTypeError("digits must be between 0 and 100")
    return value


# -- output ---------------------------------------------------------------

class Report:
    """Collects text lines or records and writes them at the end."""

    def __init__(self, output: str, digits=None):
        self.records = output == "records"
        self.digits = digits
        self.lines = []

    def num(self, value) -> str:
        if value is None:
            return "-"
        if self.digits is None:
            return render(value)
        return render_decimal(value, self.digits)

    @staticmethod
    def flag(value) -> str:
        return "-" if value is None else str(int(bool(value)))

    def record(self, kind, /, **fields):
        if self.records:
            body = " ".join(f"{k}={v}" for k, v in fields.items())
            self.lines.append(f"record={kind} {body}".rstrip())

    def text(self, line=""):
        if not self.records:
            self.lines.append(line)

    def table(self, header, rows):
        if self.records:
            return
        widths = [max(len(str(r[i])) for r in [header, *rows]) for i in range(len(header))]
        for r in [header, *rows]:
            cells = [str(c).ljust(w) if i == 0 else str(c).rjust(w)
                     for i, (c, w) in enumerate(zip(r, widths))]
            self.lines.append("  " + "  ".join(cells).rstrip())

    def write(self, stream):
        stream.write("\n".join(self.lines) + "\n")


def _mix(out, kind, player, labels, probs, key="strategy"):
    for label, p in zip(labels, probs):
        out.record(kind, player=player, **{key: label}, prob=out.num(p))
    out.text(f"{'optimal' if kind == 'witness' else 'fully mixed opponent'} "
             f"strategy (player {player}): "
             + " ".join(f"{label}={out.num(p)}" for label, p in zip(labels, probs)))


def _sequence_labels(sf, player):
    return ["-" if s.infoset is None else s.label for s in sf.sequences[player - 1]]


# -- loading --------------------------------------------------------------

def _read(path):
    try:
        with open(path, encoding="utf-8") as handle:
            return handle.read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror or exc}") from None


def _load_matrix(path):
    try:
        return parse_matrix(_read(path))
    except (GameFormatError, ValueError) as exc:
        raise InputError(f"{path}: {exc}") from None


def _load_tree(path):
    try:
        tree = parse_tree(_read(path))
    except (GameFormatError, ValueError) as exc:
        raise InputError(f"{path}: {exc}") from None
    problems = validate(tree)
    if problems:
        raise InputError(f"{path}: invalid tree: " + "; ".join(problems))
    return tree


def _players(args):
    return (1, 2) if args.player is None else (args.player,)


# -- matrix reports -------------------------------------------------------

def _matrix_solve(game, out):
    out.record("game", kind="matrix", rows=game.rows, cols=game.cols)
    out.text(f"matrix game {game.rows}x{game.cols}")
    value, _ = solve_value(game, 1)
    out.record("value", player=1, value=out.num(value))
    out.text(f"value (player 1): {out.num(value)}")
    for player in (1, 2):
        _, strategy = solve_value(game, player)
        _mix(out, "witness", player, game.labels(player), strategy)


def _matrix_analyze(game, out, players, mode, strong):
    out.record("game", kind="matrix", rows=game.rows, cols=game.cols)
    out.text(f"matrix game {game.rows}x{game.cols}")
    for i, player in enumerate(players):
        report = classify(game, player)
        labels = game.labels(player)
        if i == 0:
            v1 = report.game_value if player == 1 else -report.game_value
            out.record("value", player=1, value=out.num(v1))
            out.text(f"value (player 1): {out.num(v1)}")
        out.text()
        _mix(out, "witness", player, labels, report.witness)
        if strong:
            _mix(out, "opponent", player, game.labels(3 - player), report.opponent)
        rows = []
        for s in report.strategies:
            iterated = (s.iteratively_weakly_dominated if mode == WEAK
                        else s.iteratively_strictly_dominated)
            fields = dict(
                player=player, index=s.index, label=s.label,
                strictly_dominated=out.flag(s.strictly_dominated),
                weakly_dominated=out.flag(s.weakly_dominated),
                mixed_dominated=out.flag(s.mixed_dominated),
                iterated=out.flag(iterated),
                mistake=out.flag(s.mistake),
                max_prob=out.num(s.max_prob),
                strong_mistake=out.flag(s.strong_mistake if strong else None),
                strong_max_prob=out.num(s.strong_max_prob if strong else None))
            out.record("strategy", **fields)
            rows.append([fields[k] for k in (
                "label", "strictly_dominated", "weakly_dominated", "mixed_dominated",
                "iterated", "mistake", "max_prob", "strong_mistake", "strong_max_prob")])
        out.text(f"player {player} strategies (iterated elimination: {mode})")
        out.table(["strategy", "strict", "weak", "mixed", "iterated", "mistake",
                   "max_prob", "strong", "strong_max_prob"], rows)


# -- tree reports ---------------------------------------------------------

def _tree_header(tree, out):
    infosets = tree.infosets()
    out.record("game", kind="tree", nodes=len(tree.nodes), infosets=len(infosets))
    out.text(f"extensive game: {len(tree.nodes)} nodes, {len(infosets)} information sets")


def _tree_solve(tree, out):
    _tree_header(tree, out)
    sf = to_sequence_form(tree)
    value, _ = solve_sequence_value(sf, 1)
    out.record("value", player=1, value=out.num(value))
    out.text(f"value (player 1): {out.num(value)}")
    for player in (1, 2):
        _, plan = solve_sequence_value(sf, player)
        _mix(out, "witness", player, _sequence_labels(sf, player), plan, key="sequence")


def _tree_analyze(tree, out, players, mode, strong):
    _tree_header(tree, out)
    sf = to_sequence_form(tree)
    report = classify_all_actions(tree, strong=strong, mode=mode, sf=sf)
    out.record("value", player=1, value=out.num(report.value))
    out.text(f"value (player 1): {out.num(report.value)}")
    for player in players:
        labels = _sequence_labels(sf, player)
        out.text()
        _mix(out, "witness", player, labels, report.witness[player - 1], key="sequence")
        if strong:
            _mix(out, "opponent", player, _sequence_labels(sf, 3 - player),
                 report.opponents[player - 1], key="sequence")
        rows = []
        for a in report.for_player(player):
            fields = dict(
                player=player, infoset=a.infoset, action=a.action, sequence=a.sequence,
                strictly_dominated=out.flag(a.dominated_strict),
                weakly_dominated=out.flag(a.dominated_weak),
                iterated=out.flag(a.iteratively_dominated),
                mistake=out.flag(a.mistake),
                unreachable=out.flag(a.unreachable),
                max_prob=out.num(a.max_prob),
                strong_mistake=out.flag(a.strong_mistake if strong else None),
                strong_max_prob=out.num(a.strong_max_prob if strong else None))
            out.record("action", **fields)
            rows.append([fields[k] for k in (
                "infoset", "action", "strictly_dominated", "weakly_dominated", "iterated",
                "mistake", "unreachable", "max_prob", "strong_mistake", "strong_max_prob")])
        out.text(f"player {player} actions (iterated elimination: {mode})")
        out.table(["infoset", "action", "strict", "weak", "iterated", "mistake",
                   "unreachable", "max_prob", "strong", "strong_max_prob"], rows)


# -- experiments ----------------------------------------------------------

TABLE1_LABELS = (
    ("avg_sds", "Avg # strictly dominated"),
    ("avg_wds", "Avg # weakly dominated"),
    ("avg_iter_sds", "Avg # iter. strictly dominated"),
    ("avg_iter_wds", "Avg # iter. weakly dominated"),
    ("avg_mistakes", "Avg # mistakes"),
)

TABLE2_LABELS = (
    ("dominated_p1", "Num dominated actions P1"),
    ("dominated_p2", "Num dominated actions P2"),
    ("mistakes_p1", "Num mistakes P1"),
    ("mistakes_p2", "Num mistakes P2"),
    ("total_actions_p1", "Total num actions P1"),
    ("total_actions_p2", "Total num actions P2"),
)


def _table1(args, out):
    row = run_table1(args.m, args.trials, seed=args.seed, threads=args.threads)
    digits = 4 if args.decimal is None else args.decimal
    out.record("table1", m=row.m, trials=row.trials, seed=args.seed,
               **{k: out.num(getattr(row, k)) for k, _ in TABLE1_LABELS})
    out.text(f"random {row.m}x{row.m} games, {row.trials} trials, seed {args.seed} "
             "(player 1 averages)")
    out.table(["", f"m={row.m}"],
              [[label, render_decimal(getattr(row, k), digits)] for k, label in TABLE1_LABELS])


def _table2(args, out):
    rows = run_table2(args.n, strong=args.strong, threads=args.threads)
    labels = list(TABLE2_LABELS)
    if args.strong:
        labels += [("strong_mistakes_p1", "Num strong mistakes P1"),
                   ("strong_mistakes_p2", "Num strong mistakes P2")]
    for r in rows:
        out.record("table2", n=r.n, **{k: getattr(r, k) for k, _ in labels},
                   value=out.num(r.value))
    out.table(["n"] + [str(r.n) for r in rows],
              [[label] + [str(getattr(r, k)) for r in rows] for k, label in labels])


# -- parser ---------------------------------------------------------------

def _add_output(p):
    p.add_argument("--output", choices=("text", "records"), default="text",
                   help="report format (default: text)")
    p.add_argument("--decimal", type=_digits, metavar="DIGITS",
                   help="print numbers as decimals with this many digits")


def _add_analysis(p, player=True):
    if player:
        p.add_argument("--player", type=int, choices=(1, 2),
                       help="report only this player (default: both)")
    p.add_argument("--mode", choices=(STRICT, WEAK), default=WEAK,
                   help="dominance notion for iterated elimination (default: weak)")
    p.add_argument("--strong", action="store_true", help="also test for strong mistakes")


def _add_input(p):
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--matrix", metavar="PATH", help="matrix game file")
    src.add_argument("--tree", metavar="PATH", help="extensive game file")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="gamemistakes",
                     description="Exact mistake and dominance analysis for "
                                 "two-player zero-sum games.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("solve", help="game value and optimal strategies")
    _add_input(p)
    _add_output(p)

    p = sub.add_parser("analyze", help="classify strategies or actions of a game file")
    _add_input(p)
    _add_analysis(p)
    _add_output(p)

    p = sub.add_parser("kuhn", help="classify the actions of Kuhn poker")
    p.add_argument("--n", type=_int_list, default=[3], help="deck sizes, e.g. 3,4")
    _add_analysis(p)
    _add_output(p)

    p = sub.add_parser("rpsq", help="classify rock-paper-scissors-Q")
    _add_analysis(p)
    _add_output(p)

    p = sub.add_parser("random", help="classify a seeded random m x m game")
    p.add_argument("--m", type=_positive, default=3, help="number of strategies")
    p.add_argument("--seed", type=_seed, default=0)
    _add_analysis(p)
    _add_output(p)

    p = sub.add_parser("table1", help="random-game experiment")
    p.add_argument("--m", type=_positive, default=3)
    p.add_argument("--trials", type=_positive, default=1000)
    p.add_argument("--seed", type=_seed, default=0)
    p.add_argument("--threads", type=_positive, default=os.cpu_count() or 1)
    _add_output(p)

    p = sub.add_parser("table2", help="generalized Kuhn experiment")
    p.add_argument("--n", type=_int_list, default=[4, 5, 10, 20, 30])
    p.add_argument("--strong", action="store_true", help="also count strong mistakes")
    p.add_argument("--threads", type=_positive, default=os.cpu_count() or 1)
    _add_output(p)
    return parser


def _run(args, out):
    cmd = args.command
    if cmd == "solve":
        if args.matrix:
            _matrix_solve(_load_matrix(args.matrix), out)
        else:
            _tree_solve(_load_tree(args.tree), out)
    elif cmd == "analyze":
        if args.matrix:
            _matrix_analyze(_load_matrix(args.matrix), out, _players(args),
                            args.mode, args.strong)
        else:
            _tree_analyze(_load_tree(args.tree), out, _players(args), args.mode, args.strong)
    elif cmd == "kuhn":
        for i, n in enumerate(args.n):
            if n < 2:
                raise ValueError("Kuhn poker needs at least 2 cards")
            if i:
                out.text()
            out.text(f"Kuhn poker, {n} cards")
            _tree_analyze(kuhn(n), out, _players(args), args.mode, args.strong)
    elif cmd == "rpsq":
        out.text("rock-paper-scissors-Q")
        _matrix_analyze(rpsq(), out, _players(args), args.mode, args.strong)
    elif cmd == "random":
        out.text(f"random game, seed {args.seed}")
        _matrix_analyze(random_matrix_game(args.m, args.m, args.seed), out,
                        _players(args), args.mode, args.strong)
    elif cmd == "table1":
        if args.m < 2:
            raise ValueError("table1 needs --m of at least 2")
        _table1(args, out)
    elif cmd == "table2":
        _table2(args, out)


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    out = Report(args.output, args.decimal)
    try:
        _run(args, out)
    except InputError as exc:
        print(f"gamemistakes: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except ValueError as exc:
        print(f"gamemistakes: {exc}", file=sys.stderr)
        return EXIT_USAGE
    out.write(sys.stdout)
    return 0


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
