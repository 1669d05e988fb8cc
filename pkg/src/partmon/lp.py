"""Exact rational linear programming.

Problems are stated over free variables with equality rows ``a.x = b`` and
inequality rows ``a.x >= b``; :func:`solve_lp` maximizes the objective with
a two-phase simplex method using Bland's rule on a fraction-free integer
table, so the result is exact and the pivot sequence is deterministic.
"""

from __future__ import annotations

import enum
import math
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from . import kernels

Row = tuple[Fraction, ...]

#: Number of LP solves and pivot-table sizes, for batch-size reporting.
STATS: Counter = Counter()


class LpStatus(enum.Enum):
    OPTIMAL = "optimal"
    INFEASIBLE = "infeasible"
    UNBOUNDED = "unbounded"


def _row(values) -> Row:
    return tuple(v if type(v) is Fraction else Fraction(v) for v in values)


@dataclass(frozen=True)
class LinearProgram:
    """maximize ``objective . x`` s.t. equalities and ``a . x >= rhs`` rows."""

    objective: Row
    equalities: tuple[tuple[Row, Fraction], ...] = ()
    inequalities: tuple[tuple[Row, Fraction], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "objective", _row(self.objective))
        object.__setattr__(
            self, "equalities", tuple((_row(a), Fraction(b)) for a, b in self.equalities)
        )
        object.__setattr__(
            self, "inequalities", tuple((_row(a), Fraction(b)) for a, b in self.inequalities)
        )
        n = len(self.objective)
        for kind, rows in (("equality", self.equalities), ("inequality", self.inequalities)):
            for k, (a, _) in enumerate(rows):
                if len(a) != n:
                    raise ValueError(f"{kind} row {k} has length {len(a)}, expected {n}")

    @property
    def nvars(self) -> int:
        return len(self.objective)

    def is_feasible_point(self, x: Sequence[Fraction]) -> bool:
        """Exact substitution check of every constraint."""
        if len(x) != self.nvars:
            return False
        return all(dot(a, x) == b for a, b in self.equalities) and all(
            dot(a, x) >= b for a, b in self.inequalities
        )


@dataclass(frozen=True)
class LpResult:
    status: LpStatus
    value: Fraction | None = None
    point: Row | None = field(default=None)

    @property
    def optimal(self) -> bool:
        return self.status is LpStatus.OPTIMAL


def dot(a: Sequence[Fraction], x: Sequence[Fraction]) -> Fraction:
    return sum((ai * xi for ai, xi in zip(a, x) if ai), Fraction(0))


def _scale_to_int(values: Sequence[Fraction]) -> list[int]:
    lcm = 1
    for v in values:
        if v.denominator != 1:
            lcm = math.lcm(lcm, v.denominator)
    if lcm == 1:
        return [v.numerator for v in values]
    return [v.numerator * (lcm // v.denominator) for v in values]


def _is_nonneg_bound(a: Row, b: Fraction) -> int | None:
    """Index k if the row reads ``c * x_k >= 0`` with ``c > 0``."""
    if b != 0:
        return None
    k = None
    for idx, v in enumerate(a):
        if v:
            if k is not None or v < 0:
                return None
            k = idx
    return k


def solve_lp(lp: LinearProgram) -> LpResult:
    """Solve ``lp`` exactly.

    Rows of the form ``x_k >= 0`` become variable bounds; every other free
    variable is split into a difference of two non-negative columns.
    """
    n = lp.nvars
    nonneg: set[int] = set()
    ineqs = []
    for a, b in lp.inequalities:
        k = _is_nonneg_bound(a, b)
        if k is not None:
            nonneg.add(k)
        else:
            ineqs.append((a, b))

    # column layout: x_k (or x_k+, x_k-) then one surplus per inequality
    cols: list[tuple[int, int]] = []  # (var, sign)
    for k in range(n):
        cols.append((k, 1))
        if k not in nonneg:
            cols.append((k, -1))
    n_x = len(cols)
    n_struct = n_x + len(ineqs)

    rows: list[list[int]] = []

    def expand(a: Row) -> list[Fraction]:
        return [a[k] * s for k, s in cols]

    for a, b in lp.equalities:
        rows.append(_scale_to_int(expand(a) + [Fraction(0)] * len(ineqs) + [b]))
    for i, (a, b) in enumerate(ineqs):
        surplus = [Fraction(0)] * len(ineqs)
        surplus[i] = Fraction(-1)
        rows.append(_scale_to_int(expand(a) + surplus + [b]))
    for row in rows:
        if row[-1] < 0:
            row[:] = [-v for v in row]
    m = len(rows)

    cobj = _scale_to_int(expand(lp.objective) + [Fraction(0)] * len(ineqs))
    phase2 = [-v for v in cobj] + [0]
    phase1 = [-sum(row[j] for row in rows) for j in range(n_struct + 1)]
    table = rows + [phase2, phase1]
    basis = [n_struct + r for r in range(m)]

    STATS["lp_calls"] += 1
    STATS["lp_cells"] += (m + 2) * (n_struct + 1)
    status, T, basis, d = kernels.lp_solve(table, basis, n_struct, m)
    if status == kernels.INFEASIBLE:
        return LpResult(LpStatus.INFEASIBLE)
    if status == kernels.UNBOUNDED:
        return LpResult(LpStatus.UNBOUNDED)

    y = [Fraction(0)] * n_struct
    for r, j in enumerate(basis):
        if j < n_struct:
            y[j] = Fraction(T[r][n_struct], d)
    x = [Fraction(0)] * n
    for (k, s), v in zip(cols, y):
        if v:
            x[k] += s * v
    point = tuple(x)
    return LpResult(LpStatus.OPTIMAL, dot(lp.objective, point), point)
