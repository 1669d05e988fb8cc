"""Command-line interface: ``partmon {classify,inspect,simulate,convert}``.

Exit codes: 0 success, 1 input or environment error, 2 bad flags, and for
``classify`` 10 Trivial, 11 Easy, 12 Hard, 13 Hopeless.
"""

from __future__ import annotations

import argparse
import csv
import os
import re
import sys
from fractions import Fraction
from pathlib import Path

from . import reports
from .game import (
    MAX_ARMS,
    Game,
    GameError,
    build_dueling_game,
    build_mab_game,
    build_pricing_game,
    dueling_action,
)
from .gamefile import parse_rational, read_game, save_game, write_game
from .geometry import cell_decomposition, neighbor_pairs, to_dot
from .observability import (
    EXIT_CODES,
    classify,
    feedexp_precondition,
    point_local_witness,
    signal_matrix,
)
from .simulate import (
    TRACE_HEADER,
    DuelingBernoulli,
    PolicySpec,
    Scripted,
    Stochastic,
    batch,
    format_decimal,
    product_distribution,
    write_summary,
    write_trace_rows,
)

EXIT_INPUT = 1


def _arms(text: str) -> int:
    try:
        K = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if not 2 <= K <= MAX_ARMS:
        raise argparse.ArgumentTypeError(f"arm count must lie in [2, {MAX_ARMS}], got {K}")
    return K


def _gamma(text: str) -> float:
    try:
        g = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not 0 < g <= 1:
        raise argparse.ArgumentTypeError(f"gamma must lie in (0, 1], got {g}")
    return g


def _positive(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError(f"must be at least 1, got {v}")
    return v


def _nonneg(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if v < 0:
        raise argparse.ArgumentTypeError(f"must be non-negative, got {v}")
    return v


def _rationals(text: str, where: str) -> list[Fraction]:
    """Comma/whitespace separated ``p/q``, integer or decimal values."""
    out = []
    for k, tok in enumerate(t for t in re.split(r"[,\s]+", text.strip()) if t):
        try:
            out.append(parse_rational(tok, f"{where}[{k}]"))
        except GameError:
            try:
                out.append(Fraction(tok))
            except (ValueError, ZeroDivisionError):
                raise GameError(f"{where}[{k}]: {tok!r} is not a number") from None
    return out


def _add_game_args(p: argparse.ArgumentParser, required: bool = True) -> None:
    g = p.add_argument_group("game selection")
    g.add_argument("--game", choices=["dueling", "mab", "pricing", "file"], required=required)
    g.add_argument("--arms", type=_arms, help=f"arm count K in [2, {MAX_ARMS}]")
    g.add_argument("--file", help="game file (.pmg) for --game file")
    g.add_argument("--prices", help="pricing grid, e.g. 1/3,2/3,1")
    g.add_argument("--valuations", help="valuation grid, e.g. 0,1/2,1")


def _game(args, parser: argparse.ArgumentParser) -> Game:
    if args.game in ("dueling", "mab"):
        if args.arms is None:
            parser.error(f"--game {args.game} needs --arms")
        return build_dueling_game(args.arms) if args.game == "dueling" else build_mab_game(args.arms)
    if args.game == "pricing":
        if not args.prices or not args.valuations:
            parser.error("--game pricing needs --prices and --valuations")
        return build_pricing_game(
            _rationals(args.prices, "prices"), _rationals(args.valuations, "valuations")
        )
    if not args.file:
        parser.error("--game file needs --file")
    return read_game(args.file)


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def cmd_classify(args, parser) -> int:
    game = _game(args, parser)
    result = classify(game)
    sys.stdout.write(reports.classification_text(game, result))
    if args.out:
        Path(args.out).write_text(reports.classification_json(game, result), encoding="utf-8")
    return EXIT_CODES[result.verdict]


def _action(game: Game, spec: str) -> int:
    if game.is_dueling and "," in spec:
        parts = spec.split(",")
        if len(parts) != 2 or not all(p.strip().isdigit() for p in parts):
            raise GameError(f"--action {spec!r}: expected two arms 'i,j'")
        return dueling_action(game, int(parts[0]), int(parts[1]))
    return game.action_index(spec)


def _encoding(text: str) -> dict[str, Fraction]:
    enc = {}
    for item in text.split(","):
        sym, sep, val = item.partition("=")
        if not sep:
            raise GameError(f"--encoding item {item!r}: expected symbol=value")
        enc[sym.strip()] = parse_rational(val, f"encoding[{sym.strip()}]")
    return enc


def cmd_inspect(args, parser) -> int:
    game = _game(args, parser)
    what, fmt = args.what, args.format
    if fmt == "dot" and what != "neighbors":
        parser.error("--format dot applies to --what neighbors")
    if fmt == "file" and what != "matrices":
        parser.error("--format file applies to --what matrices")
    if what == "matrices":
        text = save_game(game) if fmt == "file" else reports.matrices_text(game)
    elif what == "signals":
        actions = [_action(game, args.action)] if args.action else range(game.n_actions)
        text = "\n".join(reports.signal_text(game, signal_matrix(game, i)) for i in actions)
    elif what in ("cells", "neighbors"):
        cells = cell_decomposition(game)
        if what == "cells":
            text = reports.cells_text(game, cells)
        else:
            nb = neighbor_pairs(game, cells)
            text = to_dot(game, cells, nb) if fmt == "dot" else reports.neighbors_text(game, nb)
    elif what == "feedexp":
        enc = _encoding(args.encoding) if args.encoding else None
        text = reports.feedexp_text(game, feedexp_precondition(game, enc))
    else:
        q, optimal = point_local_witness(game)
        text = reports.pointlocal_text(game, q, optimal)
    _emit(text, args.out)
    return 0


def _read_script(game: Game, path: str) -> Scripted:
    lookup = {label: k for k, label in enumerate(game.outcomes)}
    outcomes = []
    for k, tok in enumerate(Path(path).read_text(encoding="utf-8").split()):
        if tok in lookup:
            outcomes.append(lookup[tok])
        elif tok.isdigit():
            outcomes.append(int(tok))
        else:
            raise GameError(f"script[{k}]: unknown outcome {tok!r}")
    return Scripted(tuple(outcomes))


def _environment(game: Game, spec: str):
    kind, sep, value = spec.partition("=")
    if not sep or kind not in ("means", "dist", "script"):
        raise GameError(f"--env {spec!r}: expected means=..., dist=FILE or script=FILE")
    if kind == "means":
        means = _rationals(value, "means")
        if game.is_dueling:
            return DuelingBernoulli(tuple(means))
        if 2 ** len(means) != game.n_outcomes:
            raise GameError(f"--env means: {len(means)} means for {game.n_outcomes} outcomes")
        return product_distribution(means)
    if kind == "dist":
        return Stochastic(tuple(_rationals(Path(value).read_text(encoding="utf-8"), "dist")))
    return _read_script(game, value)


def _summary_path(out: str) -> Path:
    p = Path(out)
    return p.with_name(p.stem + ".summary.csv")


def cmd_simulate(args, parser) -> int:
    game = _game(args, parser)
    if args.gamma is not None and args.policy != "dexp3":
        parser.error("--gamma applies to --policy dexp3")
    env = _environment(game, args.env)
    spec = PolicySpec(args.policy, args.gamma)
    if args.policy == "dexp3" and not game.is_dueling:
        raise GameError("--policy dexp3 needs a dueling game")
    digits = args.precision
    workers = args.workers or os.cpu_count() or 1

    fh = writer = None
    if args.out:
        fh = open(args.out, "w", newline="", encoding="utf-8")
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(TRACE_HEADER)
    try:
        on_trace = (lambda r, tr: write_trace_rows(writer, r, tr, game, digits)) if writer else None
        summary = batch(game, env, spec, args.horizon, args.runs, args.seed, workers, on_trace)
    finally:
        if fh is not None:
            fh.close()
    if args.out:
        with open(_summary_path(args.out), "w", newline="", encoding="utf-8") as sf:
            write_summary(sf, summary, digits)
    se = "nan" if summary.runs < 2 else f"{summary.stderr:.4f}"
    print(
        f"{game.name} policy={args.policy} horizon={args.horizon} runs={summary.runs} "
        f"seed={args.seed}"
    )
    print(f"mean regret {format_decimal(summary.mean, 4)} ± {se}")
    return 0


def cmd_convert(args, parser) -> int:
    if args.input and args.game:
        parser.error("give either --in or --game, not both")
    if args.input:
        game = read_game(args.input)
    elif args.game:
        if args.game == "file":
            parser.error("use --in to convert a file")
        game = _game(args, parser)
    else:
        parser.error("convert needs --in or --game")
    if args.out:
        write_game(game, args.out)
    else:
        sys.stdout.write(save_game(game))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="partmon",
        description="Classify, inspect and simulate finite partial-monitoring games.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify", help="place a game in the four-way hierarchy")
    _add_game_args(p)
    p.add_argument("--out", help="write the full JSON report here")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("inspect", help="print matrices, cells, neighbors and checks")
    _add_game_args(p)
    p.add_argument(
        "--what",
        choices=["matrices", "signals", "cells", "neighbors", "feedexp", "pointlocal"],
        required=True,
    )
    p.add_argument("--format", choices=["text", "dot", "file"], default="text")
    p.add_argument("--action", help="signals of one action: a label, or 'i,j' for a duel")
    p.add_argument("--encoding", help="symbol values for feedexp, e.g. 0=0,1=1")
    p.add_argument("--out", help="write to this file instead of stdout")
    p.set_defaults(func=cmd_inspect)

    p = sub.add_parser("simulate", help="play a policy against an environment")
    _add_game_args(p)
    p.add_argument("--env", required=True, help="means=0.9,0.5,0.5 | dist=FILE | script=FILE")
    p.add_argument("--policy", choices=["uniform", "dexp3"], default="uniform")
    p.add_argument("--gamma", type=_gamma, help="exploration rate in (0, 1] for dexp3")
    p.add_argument("--horizon", type=_positive, required=True)
    p.add_argument("--runs", type=_positive, default=1)
    p.add_argument("--seed", type=_nonneg, default=0)
    p.add_argument("--out", help="trace CSV; the summary goes to <stem>.summary.csv")
    p.add_argument("--precision", type=_nonneg, default=10, help="decimal digits in CSV output")
    p.add_argument("--workers", type=_positive, help="worker processes (default: all CPUs)")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("convert", help="canonicalize a game file or export a built-in game")
    _add_game_args(p, required=False)
    p.add_argument("--in", dest="input", help="game file to canonicalize")
    p.add_argument("--out", help="output path (default: stdout)")
    p.set_defaults(func=cmd_convert)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args, parser)
    except (GameError, OSError, ValueError) as exc:
        print(f"partmon: error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
