"""Pure-Python integer kernels.

Reference backend for :mod:`partmon.kernels`. Tables are lists of lists of
Python ints and are modified in place. All updates are fraction-free: every
entry equals ``d`` times the true rational value, where ``d`` is the running
pivot denominator, and every division below is exact.
"""

from __future__ import annotations

OPTIMAL = 0
UNBOUNDED = 1
INFEASIBLE = 2


def pivot(T: list[list[int]], p: int, q: int, d: int) -> int:
    """Integer-preserving pivot on ``T[p][q]``; returns the new denominator.

    A negative pivot flips the sign of the whole table so the denominator
    stays positive.
    """
    prow = T[p]
    pq = prow[q]
    for r, row in enumerate(T):
        if r == p:
            continue
        rq = row[q]
        if rq == 0:
            if pq != d:
                row[:] = [pq * a // d for a in row]
        else:
            row[:] = [(pq * a - rq * b) // d for a, b in zip(row, prow)]
    if pq < 0:
        for row in T:
            row[:] = [-a for a in row]
        pq = -pq
    return pq


def _phase(T, basis, d, obj, n_struct, m):
    rhs = n_struct
    while True:
        objrow = T[obj]
        q = -1
        for j in range(n_struct):
            if objrow[j] < 0:
                q = j
                break
        if q < 0:
            return OPTIMAL, d
        p = -1
        for r in range(m):
            a = T[r][q]
            if a > 0:
                if p < 0:
                    p = r
                    continue
                lhs = T[r][rhs] * T[p][q]
                cur = T[p][rhs] * a
                if lhs < cur or (lhs == cur and basis[r] < basis[p]):
                    p = r
        if p < 0:
            return UNBOUNDED, d
        d = pivot(T, p, q, d)
        basis[p] = q


def lp_solve(T: list[list[int]], basis: list[int], n_struct: int, m: int):
    """Two-phase simplex with Bland's rule on a fraction-free table.

    Layout: rows ``0..m-1`` are constraints, row ``m`` the phase-two
    objective, row ``m+1`` the phase-one objective. Columns ``0..n_struct-1``
    are structural, column ``n_struct`` is the right-hand side. Artificial
    columns are never stored; ``basis`` holds ``n_struct + r`` for a row
    still covered by its artificial variable.

    Returns ``(status, T, basis, d)``.
    """
    d = 1
    _, d = _phase(T, basis, d, m + 1, n_struct, m)
    if T[m + 1][n_struct] != 0:
        return INFEASIBLE, T, basis, d
    for r in range(m):
        if basis[r] >= n_struct:
            row = T[r]
            for j in range(n_struct):
                if row[j] != 0:
                    d = pivot(T, r, j, d)
                    basis[r] = j
                    break
    status, d = _phase(T, basis, d, m, n_struct, m)
    return status, T, basis, d


def rref(T: list[list[int]], ncols: int):
    """Fraction-free Gauss-Jordan over the first ``ncols`` columns.

    On return ``T`` equals ``d`` times the reduced row echelon form.
    Returns ``(T, pivot_columns, d)``.
    """
    d = 1
    pivots: list[int] = []
    r = 0
    nrows = len(T)
    for c in range(ncols):
        if r == nrows:
            break
        p = next((i for i in range(r, nrows) if T[i][c] != 0), -1)
        if p < 0:
            continue
        if p != r:
            T[p], T[r] = T[r], T[p]
        d = pivot(T, r, c, d)
        pivots.append(c)
        r += 1
    return T, pivots, d
