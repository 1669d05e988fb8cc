# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled integer kernels.

Same algorithms and pivot order as :mod:`partmon._purepy`, on int64 tables
with 128-bit intermediates. Any entry leaving the int64 range raises
``OverflowError``; the caller then reruns the pure-Python path, which has
unbounded integers.
"""

import numpy as np
cimport numpy as cnp
from libc.stdint cimport int64_t

cnp.import_array()

cdef extern from *:
    """
    #include <stdint.h>
    typedef __int128 pm_i128;
    static inline int pm_fits(pm_i128 v) {
        return v >= -(pm_i128)INT64_MAX && v <= (pm_i128)INT64_MAX;
    }
    """
    ctypedef long long pm_i128
    int pm_fits(pm_i128 v) nogil

cdef enum:
    OPTIMAL = 0
    UNBOUNDED = 1
    INFEASIBLE = 2


cdef int64_t _pivot(int64_t[:, ::1] T, Py_ssize_t p, Py_ssize_t q, int64_t d) except 0:
    cdef Py_ssize_t nr = T.shape[0]
    cdef Py_ssize_t nc = T.shape[1]
    cdef Py_ssize_t r, j
    cdef int64_t pq = T[p, q]
    cdef int64_t rq
    cdef pm_i128 v
    for r in range(nr):
        if r == p:
            continue
        rq = T[r, q]
        if rq == 0:
            if pq == d:
                continue
            for j in range(nc):
                v = (<pm_i128>pq * T[r, j]) / d
                if not pm_fits(v):
                    raise OverflowError("pivot entry exceeds int64")
                T[r, j] = <int64_t>v
        else:
            for j in range(nc):
                v = (<pm_i128>pq * T[r, j] - <pm_i128>rq * T[p, j]) / d
                if not pm_fits(v):
                    raise OverflowError("pivot entry exceeds int64")
                T[r, j] = <int64_t>v
    if pq < 0:
        for r in range(nr):
            for j in range(nc):
                T[r, j] = -T[r, j]
        pq = -pq
    return pq


cdef int _phase(int64_t[:, ::1] T, int64_t[::1] basis, int64_t* d,
                Py_ssize_t obj, Py_ssize_t n_struct, Py_ssize_t m) except -1:
    cdef Py_ssize_t rhs = n_struct
    cdef Py_ssize_t j, r, p, q
    cdef pm_i128 lhs, cur
    while True:
        q = -1
        for j in range(n_struct):
            if T[obj, j] < 0:
                q = j
                break
        if q < 0:
            return OPTIMAL
        p = -1
        for r in range(m):
            if T[r, q] > 0:
                if p < 0:
                    p = r
                    continue
                lhs = <pm_i128>T[r, rhs] * T[p, q]
                cur = <pm_i128>T[p, rhs] * T[r, q]
                if lhs < cur or (lhs == cur and basis[r] < basis[p]):
                    p = r
        if p < 0:
            return UNBOUNDED
        d[0] = _pivot(T, p, q, d[0])
        basis[p] = q


def lp_solve(table, basis_in, Py_ssize_t n_struct, Py_ssize_t m):
    """See :func:`partmon._purepy.lp_solve`; inputs are not modified."""
    arr = np.array(table, dtype=np.int64)
    barr = np.array(basis_in, dtype=np.int64)
    cdef int64_t[:, ::1] T = arr
    cdef int64_t[::1] basis = barr
    cdef int64_t d = 1
    cdef int status
    cdef Py_ssize_t r, j
    _phase(T, basis, &d, m + 1, n_struct, m)
    if T[m + 1, n_struct] != 0:
        return INFEASIBLE, arr.tolist(), barr.tolist(), int(d)
    for r in range(m):
        if basis[r] >= n_struct:
            for j in range(n_struct):
                if T[r, j] != 0:
                    d = _pivot(T, r, j, d)
                    basis[r] = j
                    break
    status = _phase(T, basis, &d, m, n_struct, m)
    return status, arr.tolist(), barr.tolist(), int(d)


def rref(table, Py_ssize_t ncols):
    """See :func:`partmon._purepy.rref`; the input is not modified."""
    arr = np.array(table, dtype=np.int64)
    if arr.ndim != 2 or arr.shape[0] == 0 or arr.shape[1] == 0:
        return [list(row) for row in table], [], 1
    cdef int64_t[:, ::1] T = arr
    cdef Py_ssize_t nrows = T.shape[0]
    cdef Py_ssize_t width = T.shape[1]
    cdef Py_ssize_t r = 0, c, i, p, k
    cdef int64_t d = 1, tmp
    pivots = []
    for c in range(ncols):
        if r == nrows:
            break
        p = -1
        for i in range(r, nrows):
            if T[i, c] != 0:
                p = i
                break
        if p < 0:
            continue
        if p != r:
            for k in range(width):
                tmp = T[p, k]
                T[p, k] = T[r, k]
                T[r, k] = tmp
        d = _pivot(T, r, c, d)
        pivots.append(c)
        r += 1
    return arr.tolist(), pivots, int(d)
