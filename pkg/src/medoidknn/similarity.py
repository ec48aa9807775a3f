"""String and vector similarity primitives: Levenshtein edit distance,
Dice digram coefficient, and cosine similarity over sparse vectors.

Levenshtein is generic over any hashable symbol type (characters, tokens,
term ids); symbols are mapped to dense ints and handed to the kernel
backend. Cosine iterates term ids in ascending order so results match the
packed fast path bit for bit.
"""

from __future__ import annotations

import math
from collections.abc import Mapping, Sequence

import numpy as np

from . import _kernels
from .errors import NegativeWeight


def encode_symbols(a: Sequence, b: Sequence) -> tuple[np.ndarray, np.ndarray]:
    """Map two symbol sequences onto a shared dense int32 alphabet."""
    table: dict = {}
    ea = np.empty(len(a), dtype=np.int32)
    eb = np.empty(len(b), dtype=np.int32)
    for out, seq in ((ea, a), (eb, b)):
        for i, sym in enumerate(seq):
            code = table.get(sym)
            if code is None:
                code = len(table)
                table[sym] = code
            out[i] = code
    return ea, eb


def levenshtein(a: Sequence, b: Sequence) -> int:
    """Minimum number of insertions, deletions and substitutions turning
    ``a`` into ``b``. Quadratic time, linear-row space."""
    ea, eb = encode_symbols(a, b)
    return _kernels.levenshtein_ids(ea, eb)


def digrams(term: str) -> frozenset[str]:
    """Distinct adjacent character pairs of a term (empty below length 2)."""
    return frozenset(term[i:i + 2] for i in range(len(term) - 1))


def dice(a: str, b: str) -> float:
    """Digram overlap 2C/(A+B) over distinct digram sets, in [0, 1].

    Terms too short to produce digrams fall back to an equality test.
    """
    da = digrams(a)
    db = digrams(b)
    total = len(da) + len(db)
    if total == 0:
        return 1.0 if a == b else 0.0
    return 2.0 * len(da & db) / total


def _checked_sqnorm(entries: Mapping[int, float]) -> float:
    acc = 0.0
    for term_id in sorted(entries):
        w = entries[term_id]
        if w < 0:
            raise NegativeWeight(f"component {term_id} is negative ({w})")
        acc += w * w
    return acc


def cosine(a: Mapping[int, float], b: Mapping[int, float]) -> float:
    """Cosine similarity of two nonnegative sparse vectors, in [0, 1].

    Returns 0 when either vector has zero norm. Raises NegativeWeight if
    any stored component is negative.
    """
    norm_a = math.sqrt(_checked_sqnorm(a))
    norm_b = math.sqrt(_checked_sqnorm(b))
    if norm_a == 0.0 or norm_b == 0.0:
        return 0.0
    if len(b) < len(a):
        a, b = b, a
    dot = 0.0
    for term_id in sorted(a):
        w = b.get(term_id)
        if w is not None:
            dot += a[term_id] * w
    return dot / (norm_a * norm_b)


def cosine_distance(a: Mapping[int, float], b: Mapping[int, float]) -> float:
    """1 - cosine, a [0, 1] dissimilarity."""
    return 1.0 - cosine(a, b)
