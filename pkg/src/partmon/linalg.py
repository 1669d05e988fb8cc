"""Exact rank and row-space tests by fraction-free elimination."""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Sequence

from . import kernels

Matrix = Sequence[Sequence[Fraction]]


def _int_rows(rows: Matrix) -> list[list[int]]:
    """Scale each row by the lcm of its denominators."""
    out = []
    for row in rows:
        row = [Fraction(v) for v in row]
        lcm = 1
        for v in row:
            lcm = math.lcm(lcm, v.denominator)
        out.append([int(v * lcm) for v in row])
    return out


def rank(rows: Matrix) -> int:
    rows = [r for r in rows]
    if not rows or not len(rows[0]):
        return 0
    _, pivots, _ = kernels.rref(_int_rows(rows), len(rows[0]))
    return len(pivots)


def transpose(rows: Matrix) -> list[list[Fraction]]:
    return [list(col) for col in zip(*rows)]


def in_row_space(
    M: Matrix, v: Sequence[Fraction]
) -> tuple[bool, tuple[Fraction, ...] | None]:
    """Whether ``v`` lies in the row space of ``M``.

    Solves ``M^T c = v`` by eliminating on ``[M^T | v]``. Membership is
    exactly ``rank(M) == rank(M with v appended)``; when it holds, the
    returned ``c`` satisfies ``c^T M = v^T`` (free coordinates are zero).
    """
    v = [Fraction(x) for x in v]
    nrows = len(M)
    if nrows == 0:
        member = all(x == 0 for x in v)
        return member, (() if member else None)
    if any(len(row) != len(v) for row in M):
        raise ValueError("vector length does not match the matrix column count")
    system = [list(col) + [rhs] for col, rhs in zip(transpose(M), v)]
    T, pivots, d = kernels.rref(_int_rows(system), nrows)
    r = len(pivots)
    if any(T[i][nrows] != 0 for i in range(r, len(T))):
        return False, None
    c = [Fraction(0)] * nrows
    for i, col in enumerate(pivots):
        c[col] = Fraction(T[i][nrows], d)
    return True, tuple(c)


def combine(c: Sequence[Fraction], M: Matrix) -> tuple[Fraction, ...]:
    """``c^T M``, exactly."""
    if not M:
        return ()
    out = [Fraction(0)] * len(M[0])
    for ci, row in zip(c, M):
        if ci:
            for j, x in enumerate(row):
                if x:
                    out[j] += ci * x
    return tuple(out)
