"""Hot-loop kernels: a compiled Cython core with a pure numpy fallback.

The compiled module is selected at import when it was built; setting
STARCENSUS_PURE=1 forces the fallback.  Both expose the same functions
(pairwise_block, brute_count, neighbor_counts) and are cross-checked in
the test suite and compared in benchmarks/bench_kernels.py.
"""

import os

from . import fallback

try:
    from . import _core
except ImportError:
    _core = None

_FORCE_PURE = os.environ.get("STARCENSUS_PURE", "").lower() in ("1", "true", "yes")
_impl = fallback if (_FORCE_PURE or _core is None) else _core


def backend_name() -> str:
    return "python" if _impl is fallback else "compiled"


def compiled_available() -> bool:
    return _core is not None


pairwise_block = _impl.pairwise_block
brute_count = _impl.brute_count
neighbor_counts = _impl.neighbor_counts
