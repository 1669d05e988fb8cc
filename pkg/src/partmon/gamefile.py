"""Game files (``.pmg``): a JSON document with one matrix row per line.

Top-level keys are ``name``, ``actions``, ``outcomes``, ``alphabet``,
``gain`` and ``feedback``. Gains are strings ``"p/q"`` or ``"p"`` in lowest
terms; feedback entries are alphabet symbols. :func:`save_game` writes the
canonical form, so ``save_game(load_game(text))`` normalizes a file.
"""

from __future__ import annotations

import json
import re
from fractions import Fraction
from pathlib import Path

from .game import Game, GameError

_RATIONAL = re.compile(r"^\s*([+-]?\d+)(?:\s*/\s*([+-]?\d+))?\s*$")
_KEYS = ("name", "actions", "outcomes", "alphabet", "gain", "feedback")


class GameFormatError(GameError):
    """Malformed game file; the message names the offending position."""


def parse_rational(text: str, where: str = "value") -> Fraction:
    if not isinstance(text, str):
        if isinstance(text, int) and not isinstance(text, bool):
            return Fraction(text)
        raise GameFormatError(f"{where}: expected a rational string, got {text!r}")
    match = _RATIONAL.match(text)
    if not match:
        raise GameFormatError(f"{where}: {text!r} is not a rational 'p/q' or integer")
    num = int(match.group(1))
    den = int(match.group(2)) if match.group(2) is not None else 1
    if den == 0:
        raise GameFormatError(f"{where}: {text!r} has a zero denominator")
    return Fraction(num, den)


def format_rational(value: Fraction) -> str:
    return str(Fraction(value))


def _string_list(doc: dict, key: str) -> list[str]:
    value = doc[key]
    if not isinstance(value, list) or not all(isinstance(s, str) for s in value):
        raise GameFormatError(f"{key}: expected a list of strings")
    return value


def load_game(text: str) -> Game:
    """Parse game-file text; errors carry the row/column of the bad entry."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise GameFormatError(f"not valid JSON: line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    if not isinstance(doc, dict):
        raise GameFormatError("top level must be an object")
    missing = [k for k in _KEYS if k not in doc]
    if missing:
        raise GameFormatError(f"missing fields: {', '.join(missing)}")
    unknown = sorted(set(doc) - set(_KEYS))
    if unknown:
        raise GameFormatError(f"unknown fields: {', '.join(unknown)}")
    if not isinstance(doc["name"], str):
        raise GameFormatError("name: expected a string")
    actions = _string_list(doc, "actions")
    outcomes = _string_list(doc, "outcomes")
    alphabet = _string_list(doc, "alphabet")
    n, m = len(actions), len(outcomes)

    def matrix(key):
        rows = doc[key]
        if not isinstance(rows, list) or not all(isinstance(r, list) for r in rows):
            raise GameFormatError(f"{key}: expected a list of rows")
        if len(rows) != n:
            raise GameFormatError(f"{key}: dimension mismatch, {len(rows)} rows for {n} actions")
        for i, row in enumerate(rows):
            if len(row) != m:
                raise GameFormatError(
                    f"{key}[{i}]: dimension mismatch, {len(row)} columns for {m} outcomes"
                )
        return rows

    gain = [
        [parse_rational(v, f"gain[{i}][{j}]") for j, v in enumerate(row)]
        for i, row in enumerate(matrix("gain"))
    ]
    lookup = {s: k for k, s in enumerate(alphabet)}
    feedback = []
    for i, row in enumerate(matrix("feedback")):
        out = []
        for j, s in enumerate(row):
            if s not in lookup:
                raise GameFormatError(f"feedback[{i}][{j}]: unknown symbol {s!r}")
            out.append(lookup[s])
        feedback.append(out)
    try:
        return Game(doc["name"], actions, outcomes, alphabet, gain, feedback)
    except GameFormatError:
        raise
    except GameError as exc:
        raise GameFormatError(str(exc)) from None


def _dump(value) -> str:
    return json.dumps(value, ensure_ascii=False)


def save_game(game: Game) -> str:
    """Canonical text: fixed key order, one matrix row per line."""
    symbols = game.feedback_symbols()
    lines = ["{"]
    lines.append(f'  "name": {_dump(game.name)},')
    for key in ("actions", "outcomes", "alphabet"):
        lines.append(f'  "{key}": {_dump(list(getattr(game, key)))},')
    gain_rows = [_dump([format_rational(v) for v in row]) for row in game.gain]
    lines.append('  "gain": [')
    lines.append(",\n".join("    " + r for r in gain_rows))
    lines.append("  ],")
    fb_rows = [_dump(list(row)) for row in symbols]
    lines.append('  "feedback": [')
    lines.append(",\n".join("    " + r for r in fb_rows))
    lines.append("  ]")
    lines.append("}")
    return "\n".join(lines) + "\n"


def read_game(path: str | Path) -> Game:
    return load_game(Path(path).read_text(encoding="utf-8"))


def write_game(game: Game, path: str | Path) -> None:
    Path(path).write_text(save_game(game), encoding="utf-8")
