"""Pure numpy implementations of the hot counting kernels.

Same contracts as the compiled core in _core.pyx.  Distances are driven
by two precomputed tables over element codes:

    sq_sub[a, b] = (a - b)^2   in the domain
    add_tab[a, b] = a + b      in the domain

so the kernels themselves are domain-agnostic.  The brute kernel
evaluates the full (k+1)-fold tuple sum; it is vectorized in hub blocks
but performs the same enumeration as the compiled loop.
"""

import numpy as np

_BLOCK_ENTRIES = 1 << 21


def _block_size(n_cols: int) -> int:
    return max(1, _BLOCK_ENTRIES // max(1, n_cols))


def pairwise_block(pts_a, pts_b, sq_sub, add_tab):
    """(A, B) matrix of distances between two code-point arrays."""
    d = pts_a.shape[1]
    out = sq_sub[pts_a[:, None, 0], pts_b[None, :, 0]]
    for c in range(1, d):
        out = add_tab[out, sq_sub[pts_a[:, None, c], pts_b[None, :, c]]]
    return out


_SLOT_LETTERS = "abcdefghijklmnopqrstuvw"


def brute_count(pts, tvals, sq_sub, add_tab) -> int:
    """Full (k+1)-fold loop: sum over every (hub, leaf_1..leaf_k) tuple of
    the product of per-slot distance matches."""
    n = pts.shape[0]
    k = len(tvals)
    if n == 0:
        return 0
    if k > len(_SLOT_LETTERS):
        raise ValueError(f"k = {k} too large for the fallback kernel")
    subscripts = ",".join(f"x{_SLOT_LETTERS[i]}" for i in range(k)) + "->"
    total = 0
    step = _block_size(n)
    for i0 in range(0, n, step):
        dist = pairwise_block(pts[i0 : i0 + step], pts, sq_sub, add_tab)
        mats = [(dist == t).astype(np.int8) for t in tvals]
        total += int(
            np.einsum(subscripts, *mats, dtype=np.int64, casting="unsafe", optimize=False)
        )
    return total


def neighbor_counts(pts, tvals, sq_sub, add_tab):
    """out[i, s] = number of points at distance tvals[s] from point i."""
    n = pts.shape[0]
    out = np.zeros((n, len(tvals)), dtype=np.int64)
    step = _block_size(n)
    for i0 in range(0, n, step):
        dist = pairwise_block(pts[i0 : i0 + step], pts, sq_sub, add_tab)
        for s, t in enumerate(tvals):
            out[i0 : i0 + step, s] = (dist == t).sum(axis=1)
    return out
