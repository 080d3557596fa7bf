"""Backend selection for the exhaustive sample kernels.

The compiled extension is used when it imports; ``FLOWCOEF_PURE=1`` forces
the numpy fallback.
"""
import os
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import _fallback

_compiled = None
if os.environ.get("FLOWCOEF_PURE", "") not in ("1", "true", "yes"):
    try:
        from . import _kernel as _compiled
    except ImportError:
        _compiled = None

BACKEND = "compiled" if _compiled is not None else "numpy"
INT64_LIMIT = 2 ** 62


def _impl(backend):
    if backend is None:
        return _compiled or _fallback
    if backend == "compiled":
        if _compiled is None:
            raise RuntimeError("compiled kernel is not built")
        return _compiled
    if backend == "numpy":
        return _fallback
    raise ValueError(f"unknown backend {backend!r}")


def _shards(k, threads):
    threads = max(1, min(threads or 1, k + 1))
    edges = [round(t * (k + 1) / threads) for t in range(threads + 1)]
    return [(lo, hi) for lo, hi in zip(edges, edges[1:]) if hi > lo]


def _run(fn, shards, threads):
    if len(shards) == 1:
        return [fn(*shards[0])]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(lambda sh: fn(*sh), shards))


def sample_values(scaled, threads=1, backend=None):
    """Per-sample objective values (scaled integers) in odometer order.

    ``scaled`` is a (k, k, k) integer array ``[layer, row, col]``. Entry 0 of
    the result is the empty assignment and is dropped.
    """
    m = np.asarray(scaled)
    k = m.shape[0]
    peak = int(np.abs(m.astype(object)).max()) if m.size else 0
    if peak * k * k >= INT64_LIMIT:
        # too wide for int64: exact object arithmetic in the numpy path
        parts = _run(lambda lo, hi: _fallback.sample_values(m.astype(object), lo, hi),
                     _shards(k, threads), threads)
    else:
        impl = _impl(backend)
        m64 = np.ascontiguousarray(m, dtype=np.int64)
        parts = _run(lambda lo, hi: impl.sample_values(m64, lo, hi), _shards(k, threads), threads)
    return np.concatenate(parts)[1:]


def sample_codes(k, threads=1, backend=None):
    impl = _impl(backend)
    parts = _run(lambda lo, hi: impl.sample_codes(k, lo, hi), _shards(k, threads), threads)
    return np.concatenate(parts)[1:]


def decode_code(code):
    code = int(code)
    return (code >> 24) & 0xFF, (code >> 16) & 0xFF, (code >> 8) & 0xFF, code & 0xFF
