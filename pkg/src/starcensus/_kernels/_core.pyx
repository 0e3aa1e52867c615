# cython: boundscheck=False, wraparound=False, initializedcheck=False, cdivision=True
"""Compiled counting kernels.

Same contracts as fallback.py: distances come from the sq_sub/add_tab
code tables, so one kernel serves prime fields, extension fields, and
residue rings alike.
"""

import numpy as np

cimport numpy as cnp

ctypedef cnp.int32_t i32
ctypedef cnp.int64_t i64


cdef inline int _dist(const i32[:, ::1] a, Py_ssize_t i,
                      const i32[:, ::1] b, Py_ssize_t j,
                      int d,
                      const i32[:, ::1] sq_sub,
                      const i32[:, ::1] add_tab) noexcept nogil:
    cdef int acc = sq_sub[a[i, 0], b[j, 0]]
    cdef int c
    for c in range(1, d):
        acc = add_tab[acc, sq_sub[a[i, c], b[j, c]]]
    return acc


def pairwise_block(const i32[:, ::1] pts_a, const i32[:, ::1] pts_b,
                   const i32[:, ::1] sq_sub, const i32[:, ::1] add_tab):
    """(A, B) matrix of distances between two code-point arrays."""
    cdef Py_ssize_t na = pts_a.shape[0], nb = pts_b.shape[0]
    cdef int d = pts_a.shape[1]
    out = np.empty((na, nb), dtype=np.int32)
    cdef i32[:, ::1] o = out
    cdef Py_ssize_t i, j
    with nogil:
        for i in range(na):
            for j in range(nb):
                o[i, j] = _dist(pts_a, i, pts_b, j, d, sq_sub, add_tab)
    return out


cdef i64 _descend(const i32[:, ::1] pts, Py_ssize_t hub, int slot,
                  Py_ssize_t n, int d, int k, const i32[::1] tvals,
                  const i32[:, ::1] sq_sub, const i32[:, ::1] add_tab) noexcept nogil:
    cdef i64 acc = 0
    cdef Py_ssize_t leaf
    for leaf in range(n):
        if _dist(pts, hub, pts, leaf, d, sq_sub, add_tab) == tvals[slot]:
            if slot + 1 == k:
                acc += 1
            else:
                acc += _descend(pts, hub, slot + 1, n, d, k, tvals, sq_sub, add_tab)
    return acc


def brute_count(const i32[:, ::1] pts, const i32[::1] tvals,
                const i32[:, ::1] sq_sub, const i32[:, ::1] add_tab):
    """Full (k+1)-fold loop over (hub, leaf_1..leaf_k) tuples, pruning a
    branch as soon as one slot's distance check fails."""
    cdef Py_ssize_t n = pts.shape[0]
    cdef int d = pts.shape[1]
    cdef int k = tvals.shape[0]
    cdef i64 total = 0
    cdef Py_ssize_t hub
    if n == 0:
        return 0
    with nogil:
        for hub in range(n):
            total += _descend(pts, hub, 0, n, d, k, tvals, sq_sub, add_tab)
    return int(total)


def neighbor_counts(const i32[:, ::1] pts, const i32[::1] tvals,
                    const i32[:, ::1] sq_sub, const i32[:, ::1] add_tab):
    """out[i, s] = number of points at distance tvals[s] from point i."""
    cdef Py_ssize_t n = pts.shape[0]
    cdef int d = pts.shape[1]
    cdef int m = tvals.shape[0]
    out = np.zeros((n, m), dtype=np.int64)
    cdef i64[:, ::1] o = out
    cdef Py_ssize_t i, j
    cdef int s, dist
    with nogil:
        for i in range(n):
            for j in range(n):
                dist = _dist(pts, i, pts, j, d, sq_sub, add_tab)
                for s in range(m):
                    if tvals[s] == dist:
                        o[i, s] += 1
    return out
