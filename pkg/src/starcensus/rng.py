"""Deterministic randomness for experiments.

All sampling is driven by the Philox 4x64 counter-based generator keyed
with the 64-bit experiment seed, so runs reproduce bit-identically from
the seed alone.  Subsets are drawn by a partial Fisher-Yates shuffle that
consumes exactly one bounded draw per selected element; consequently the
first n selections agree between a size-n and a size-2n sample with the
same seed, which is what the nested doubling sweeps rely on.
"""

import numpy as np


def generator(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(key=np.uint64(seed)))


def partial_shuffle_prefix(total: int, size: int, seed: int) -> np.ndarray:
    """First `size` entries of a seeded Fisher-Yates shuffle of range(total)."""
    if not 0 <= size <= total:
        raise ValueError(f"size {size} outside [0, {total}]")
    idx = np.arange(total, dtype=np.int64)
    g = generator(seed)
    for i in range(size):
        j = i + int(g.integers(0, total - i))
        idx[i], idx[j] = idx[j], idx[i]
    return idx[:size].copy()
