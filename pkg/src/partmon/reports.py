"""Text and JSON renderings of games and analysis reports.

Rationals are written as ``"p/q"`` (or ``"p"`` when integral). Matrices
carry action labels on rows and outcome labels on columns so that printed
tables can be compared by eye or with ``diff``.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Sequence

from .game import Game
from .geometry import CellReport, NeighborReport
from .observability import (
    Classification,
    FeedexpCheck,
    ObservabilityResult,
    SignalMatrix,
)


def rational(value) -> str:
    return str(Fraction(value))


def vector(values: Sequence | None) -> list[str] | None:
    if values is None:
        return None
    return [rational(v) for v in values]


def format_table(row_labels: Sequence[str], col_labels: Sequence[str], rows, corner: str = "") -> str:
    """Right-aligned plain-text table."""
    cells = [[str(v) for v in row] for row in rows]
    lw = max([len(corner)] + [len(r) for r in row_labels])
    widths = [
        max([len(c)] + [len(row[k]) for row in cells]) for k, c in enumerate(col_labels)
    ]
    lines = [" ".join([corner.ljust(lw)] + [c.rjust(w) for c, w in zip(col_labels, widths)])]
    for label, row in zip(row_labels, cells):
        lines.append(" ".join([label.ljust(lw)] + [v.rjust(w) for v, w in zip(row, widths)]))
    return "\n".join(line.rstrip() for line in lines) + "\n"


def gain_text(game: Game) -> str:
    rows = [[rational(v) for v in row] for row in game.gain]
    return format_table(game.actions, game.outcomes, rows, corner="gain")


def feedback_text(game: Game) -> str:
    return format_table(game.actions, game.outcomes, game.feedback_symbols(), corner="feedback")


def matrices_text(game: Game) -> str:
    return f"# {game.name}\n" + gain_text(game) + "\n" + feedback_text(game)


def signal_text(game: Game, s: SignalMatrix) -> str:
    return format_table(s.symbols, game.outcomes, s.entries, corner=game.actions[s.action])


def cells_text(game: Game, cells: CellReport) -> str:
    lines = [f"# cells of {game.name} (|M| = {cells.n_outcomes})"]
    for c in cells.cells:
        w = "-" if c.witness is None else " ".join(vector(c.witness))
        lines.append(f"{game.actions[c.action]}\t{c.status.value}\tdim={c.dim}\twitness={w}")
    return "\n".join(lines) + "\n"


def neighbors_text(game: Game, neighbors: NeighborReport) -> str:
    lab = game.actions
    lines = [f"# neighbor pairs of {game.name}: {len(neighbors.pairs)}"]
    for p in neighbors.pairs:
        hood = ",".join(lab[k] for k in p.neighborhood)
        lines.append(
            f"{lab[p.first]}~{lab[p.second]}\tN={{{hood}}}\twitness={' '.join(vector(p.witness))}"
        )
    for g in neighbors.duplicate_groups:
        lines.append("duplicates\t" + ",".join(lab[k] for k in g))
    return "\n".join(lines) + "\n"


def feedexp_text(game: Game, check: FeedexpCheck) -> str:
    lines = [f"# B H = G for {game.name}", "feasible" if check.feasible else "infeasible"]
    if check.conflict is not None:
        a, b = check.conflict
        lines.append(f"conflict columns: {game.outcomes[a]} {game.outcomes[b]}")
    if check.failing_row is not None:
        lines.append(f"no row of B for action {game.actions[check.failing_row]}")
    if check.B is not None:
        rows = [vector(r) for r in check.B]
        lines.append(format_table(game.actions, game.actions, rows, corner="B").rstrip())
    return "\n".join(lines) + "\n"


def pointlocal_text(game: Game, q, optimal: Sequence[int]) -> str:
    support = [game.outcomes[k] for k, v in enumerate(q) if v]
    return (
        f"# point-local witness for {game.name}\n"
        f"q = delta({','.join(support)})\n"
        f"optimal actions ({len(optimal)}): {' '.join(game.actions[i] for i in optimal)}\n"
    )


def _result_dict(game: Game, r: ObservabilityResult | None) -> dict | None:
    if r is None:
        return None
    return {
        "observable": r.observable,
        "support": [game.actions[k] for k in r.support],
        "certificate": vector(r.certificate),
    }


def classification_dict(game: Game, cls: Classification) -> dict:
    lab = game.actions
    ev = cls.evidence
    if ev and isinstance(ev[0], tuple):
        evidence = [[lab[i], lab[j]] for i, j in ev]
    else:
        evidence = [lab[i] for i in ev]
    doc: dict = {"game": game.name, "verdict": cls.verdict.value, "evidence": evidence}
    if cls.cells is not None:
        doc["cells"] = [
            {
                "action": lab[c.action],
                "status": c.status.value,
                "dim": c.dim,
                "witness": vector(c.witness),
            }
            for c in cls.cells.cells
        ]
    if cls.neighbors is not None:
        doc["neighbors"] = [
            {
                "pair": [lab[p.first], lab[p.second]],
                "neighborhood": [lab[k] for k in p.neighborhood],
                "witness": vector(p.witness),
            }
            for p in cls.neighbors.pairs
        ]
        doc["duplicate_groups"] = [[lab[k] for k in g] for g in cls.neighbors.duplicate_groups]
    if cls.observability is not None:
        doc["observability"] = [
            {
                "pair": [lab[p.first], lab[p.second]],
                "global": _result_dict(game, p.globally),
                "local": _result_dict(game, p.locally),
            }
            for p in cls.observability.pairs
        ]
    return doc


def classification_json(game: Game, cls: Classification) -> str:
    return json.dumps(classification_dict(game, cls), ensure_ascii=False, indent=1) + "\n"


def classification_text(game: Game, cls: Classification) -> str:
    doc = classification_dict(game, cls)
    ev = doc["evidence"]
    if cls.verdict.value == "Easy":
        detail = f"{len(ev)} neighbor pairs locally observable"
    elif cls.verdict.value == "Trivial":
        detail = f"dominant action {ev[0]}"
    elif cls.verdict.value == "Hopeless":
        detail = f"pair {ev[0]},{ev[1]} not globally observable"
    else:
        detail = f"neighbor pair {ev[0]},{ev[1]} not locally observable"
    return f"{cls.verdict.value}\n{game.name}: {detail}\n"
