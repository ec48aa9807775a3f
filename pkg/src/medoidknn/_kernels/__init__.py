"""Kernel backend selection.

Imports the compiled extension when present, otherwise falls back to the
pure-Python implementation. Set ``MEDOIDKNN_PURE_PYTHON=1`` to force the
fallback (used by the backend-equivalence tests and the benchmark).
Both backends accumulate floats in the same order, so results are
bit-identical either way.
"""

from __future__ import annotations

import os

import numpy as np

from . import _pyimpl

if os.environ.get("MEDOIDKNN_PURE_PYTHON"):
    _impl = _pyimpl
    BACKEND = "python"
else:
    try:
        from . import _speedups as _impl  # type: ignore[attr-defined]

        BACKEND = "c"
    except ImportError:
        _impl = _pyimpl
        BACKEND = "python"


def pack_sequences(seqs):
    """Concatenate int sequences into (flat int32 array, int64 offsets)."""
    offsets = np.zeros(len(seqs) + 1, dtype=np.int64)
    for i, s in enumerate(seqs):
        offsets[i + 1] = offsets[i] + len(s)
    flat = np.empty(offsets[-1], dtype=np.int32)
    for i, s in enumerate(seqs):
        flat[offsets[i]:offsets[i + 1]] = s
    return flat, offsets


def levenshtein_ids(a: np.ndarray, b: np.ndarray) -> int:
    return _impl.levenshtein_ids(a, b)


def pairwise_matrix(seqs, threads: int = 1) -> np.ndarray:
    """Symmetric edit-distance matrix over int sequences.

    ``threads`` splits the row range across a thread pool; every cell has a
    single writer, so the result does not depend on the thread count.
    """
    n = len(seqs)
    out = np.zeros((n, n), dtype=np.float64)
    if n < 2:
        return out
    flat, offsets = pack_sequences(seqs)
    if threads <= 1 or n < 2 * threads:
        _impl.pairwise_levenshtein(flat, offsets, out, 0, n)
        return out
    from concurrent.futures import ThreadPoolExecutor

    bounds = [int(round(n * t / threads)) for t in range(threads + 1)]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        futures = [
            pool.submit(_impl.pairwise_levenshtein, flat, offsets, out, lo, hi)
            for lo, hi in zip(bounds, bounds[1:])
            if hi > lo
        ]
        for f in futures:
            f.result()
    return out


def sparse_dot(ids_a, vals_a, ids_b, vals_b) -> float:
    return _impl.sparse_dot(ids_a, vals_a, ids_b, vals_b)


def sparse_sqnorm(vals) -> float:
    return _impl.sparse_sqnorm(vals)
