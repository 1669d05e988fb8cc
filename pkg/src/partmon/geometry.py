"""Cells of a game over the outcome simplex.

The cell of action ``i`` is the set of outcome distributions ``q`` under
which ``i`` has maximal expected gain. Everything here is decided exactly
with rational LPs, so "dimension equals ``|M| - 2``" is a yes/no answer
rather than a tolerance call.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Sequence

from .game import Game
from .linalg import rank
from .lp import LinearProgram, LpStatus, Row, dot, solve_lp

Constraint = tuple[Row, Fraction]


class CellStatus(enum.Enum):
    STRONGLY_PARETO = "StronglyPareto"
    DEGENERATE = "Degenerate"
    NON_PARETO = "NonPareto"


def polytope_dimension(
    equalities: Sequence[Constraint],
    inequalities: Sequence[Constraint],
    nvars: int | None = None,
) -> tuple[int, Row | None]:
    """Affine dimension of ``{x : equalities, a.x >= b}`` and a relative-interior point.

    An inequality is an implicit equality when no feasible point has positive
    slack on it. Each round maximizes the sum of slacks (capped at 1) over
    the inequalities not yet shown to be strict; any inequality with positive
    slack at the optimum is strict, and a zero optimum proves the rest are
    implicit. The affine hull is then cut out by the explicit and implicit
    equalities, and the mean of the round optima has positive slack on every
    strict inequality.

    Returns ``(-1, None)`` for an empty set.
    """
    equalities = [(tuple(Fraction(v) for v in a), Fraction(b)) for a, b in equalities]
    inequalities = [(tuple(Fraction(v) for v in a), Fraction(b)) for a, b in inequalities]
    if nvars is None:
        rows = equalities or inequalities
        if not rows:
            raise ValueError("nvars is required when there are no constraints")
        nvars = len(rows[0][0])
    n = nvars
    zero = Fraction(0)

    candidates = list(range(len(inequalities)))
    points: list[Row] = []
    feasible_point: Row | None = None
    while True:
        if not candidates and feasible_point is not None:
            break
        ns = len(candidates)
        slack_of = {k: t for t, k in enumerate(candidates)}
        ineqs: list[Constraint] = []
        for k, (a, b) in enumerate(inequalities):
            if k in slack_of:
                s = [zero] * ns
                s[slack_of[k]] = Fraction(-1)
                ineqs.append((a + tuple(s), b))
            if k not in slack_of or _unit_bound(a, b):
                # unit rows x_k >= 0 stay so the solver can treat them as bounds
                ineqs.append((a + (zero,) * ns, b))
        for t in range(ns):
            e = [zero] * (n + ns)
            e[n + t] = Fraction(1)
            ineqs.append((tuple(e), zero))
            e = [zero] * (n + ns)
            e[n + t] = Fraction(-1)
            ineqs.append((tuple(e), Fraction(-1)))
        eqs = [(a + (zero,) * ns, b) for a, b in equalities]
        objective = (zero,) * n + (Fraction(1),) * ns
        res = solve_lp(LinearProgram(objective, eqs, ineqs))
        if res.status is LpStatus.INFEASIBLE:
            return -1, None
        x = res.point[:n]
        feasible_point = x
        if res.value == 0:
            break
        strict = {k for k in candidates if dot(inequalities[k][0], x) > inequalities[k][1]}
        points.append(x)
        candidates = [k for k in candidates if k not in strict]

    hull_rows = [a for a, _ in equalities] + [inequalities[k][0] for k in candidates]
    dim = n - rank(hull_rows)
    if points:
        witness = tuple(sum(col, zero) / len(points) for col in zip(*points))
    else:
        witness = feasible_point
    return dim, witness


def _unit_bound(a: Row, b: Fraction) -> bool:
    return b == 0 and sum(1 for v in a if v) == 1 and all(v >= 0 for v in a)


def simplex_constraints(m: int) -> tuple[list[Constraint], list[Constraint]]:
    """``sum(q) = 1`` and ``q >= 0`` over ``m`` coordinates."""
    one, zero = Fraction(1), Fraction(0)
    eqs = [((one,) * m, one)]
    ineqs = []
    for k in range(m):
        e = [zero] * m
        e[k] = one
        ineqs.append((tuple(e), zero))
    return eqs, ineqs


def cell_constraints(game: Game, i: int) -> LinearProgram:
    """Constraint set whose feasible region is the cell of action ``i``.

    The simplex rows come first, then one row ``(g_i - g_j) . q >= 0`` per
    competitor ``j`` in action order. The objective is zero.
    """
    if not 0 <= i < game.n_actions:
        raise IndexError(f"action index {i} out of range")
    m = game.n_outcomes
    eqs, ineqs = simplex_constraints(m)
    gi = game.gain[i]
    for j, gj in enumerate(game.gain):
        if j != i:
            ineqs.append((tuple(a - b for a, b in zip(gi, gj)), Fraction(0)))
    return LinearProgram((Fraction(0),) * m, eqs, ineqs)


@dataclass(frozen=True)
class CellInfo:
    action: int
    status: CellStatus
    dim: int
    witness: Row | None


@dataclass(frozen=True)
class CellReport:
    n_outcomes: int
    cells: tuple[CellInfo, ...]

    def status(self, i: int) -> CellStatus:
        return self.cells[i].status

    def strongly_pareto(self) -> list[int]:
        return [c.action for c in self.cells if c.status is CellStatus.STRONGLY_PARETO]

    def pareto(self) -> list[int]:
        return [c.action for c in self.cells if c.status is not CellStatus.NON_PARETO]


def _status(dim: int, m: int) -> CellStatus:
    if dim < 0:
        return CellStatus.NON_PARETO
    if dim == m - 1:
        return CellStatus.STRONGLY_PARETO
    return CellStatus.DEGENERATE


def cell_decomposition(game: Game) -> CellReport:
    """Dimension, Pareto status and an interior witness for every cell."""
    m = game.n_outcomes
    cells = []
    for i in range(game.n_actions):
        lp = cell_constraints(game, i)
        dim, witness = polytope_dimension(lp.equalities, lp.inequalities, m)
        cells.append(CellInfo(i, _status(dim, m), dim, witness))
    return CellReport(m, tuple(cells))


@dataclass(frozen=True)
class NeighborPair:
    first: int
    second: int
    neighborhood: tuple[int, ...]
    witness: Row


@dataclass(frozen=True)
class NeighborReport:
    """Neighboring strongly Pareto actions and their neighborhood sets.

    Actions with identical gain rows share one cell; only the lowest index
    of each such group (listed in ``duplicate_groups``) is paired.
    """

    pairs: tuple[NeighborPair, ...]
    duplicate_groups: tuple[tuple[int, ...], ...] = ()
    _index: dict = field(default=None, init=False, repr=False, compare=False)

    def __post_init__(self):
        idx = {}
        for p in self.pairs:
            idx[(p.first, p.second)] = p
            idx[(p.second, p.first)] = p
        object.__setattr__(self, "_index", idx)

    def are_neighbors(self, i: int, j: int) -> bool:
        return (i, j) in self._index

    def get(self, i: int, j: int) -> NeighborPair:
        try:
            return self._index[(i, j)]
        except KeyError:
            raise KeyError(f"actions {i} and {j} are not neighbors") from None

    def neighborhood(self, i: int, j: int) -> tuple[int, ...]:
        return self.get(i, j).neighborhood


def duplicate_groups(game: Game, actions: Sequence[int]) -> list[tuple[int, ...]]:
    groups: dict[tuple, list[int]] = {}
    for i in actions:
        groups.setdefault(game.gain[i], []).append(i)
    return [tuple(g) for g in groups.values()]


def intersection_constraints(game: Game, i: int, j: int) -> LinearProgram:
    """``C_i`` with the extra equality ``g_i . q = g_j . q``."""
    lp = cell_constraints(game, i)
    diff = tuple(a - b for a, b in zip(game.gain[i], game.gain[j]))
    return LinearProgram(lp.objective, lp.equalities + ((diff, Fraction(0)),), lp.inequalities)


def neighbor_pairs(game: Game, cells: CellReport) -> NeighborReport:
    """Pairs of strongly Pareto cells meeting in a ``(|M|-2)``-dimensional face.

    For each such pair the neighborhood set holds every action ``k`` whose
    cell contains the common face. Since ``g_i . q`` is the maximal expected
    gain on ``C_i``, containment holds iff ``min (g_k - g_i) . q`` over the
    face is zero, which costs one LP per candidate ``k``.
    """
    m = game.n_outcomes
    groups = duplicate_groups(game, cells.strongly_pareto())
    reps = sorted(g[0] for g in groups)
    pairs = []
    for i, j in combinations(reps, 2):
        lp = intersection_constraints(game, i, j)
        if solve_lp(lp).status is LpStatus.INFEASIBLE:
            continue
        dim, witness = polytope_dimension(lp.equalities, lp.inequalities, m)
        if dim != m - 2:
            continue
        hood = []
        for k in range(game.n_actions):
            if k in (i, j) or game.gain[k] == game.gain[i]:
                hood.append(k)
                continue
            gap = tuple(a - b for a, b in zip(game.gain[i], game.gain[k]))
            res = solve_lp(LinearProgram(gap, lp.equalities, lp.inequalities))
            if res.optimal and res.value <= 0:
                hood.append(k)
        pairs.append(NeighborPair(i, j, tuple(hood), witness))
    dups = tuple(g for g in groups if len(g) > 1)
    return NeighborReport(tuple(pairs), tuple(sorted(dups)))


def in_cell(game: Game, i: int, q: Sequence[Fraction]) -> bool:
    """Exact membership of ``q`` (assumed in the simplex) in ``C_i``."""
    gi = dot(game.gain[i], q)
    return all(gi >= dot(g, q) for g in game.gain)


def is_simplex_point(q: Sequence[Fraction]) -> bool:
    return all(v >= 0 for v in q) and sum(q, Fraction(0)) == 1


def to_dot(game: Game, cells: CellReport, neighbors: NeighborReport) -> str:
    """Neighbor graph in DOT.

    Strongly Pareto actions are solid nodes, degenerate actions dashed ones;
    an edge joins each neighbor pair and is labeled with its neighborhood size.
    """
    lines = [f'graph "{game.name}" {{']
    for c in cells.cells:
        if c.status is CellStatus.NON_PARETO:
            continue
        style = "solid" if c.status is CellStatus.STRONGLY_PARETO else "dashed"
        lines.append(f'  a{c.action} [label="{game.actions[c.action]}", style={style}];')
    for p in neighbors.pairs:
        lines.append(f'  a{p.first} -- a{p.second} [label="{len(p.neighborhood)}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
