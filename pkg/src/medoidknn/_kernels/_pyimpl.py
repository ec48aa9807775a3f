"""Pure-Python kernels, used when the compiled extension is unavailable.

Signatures mirror ``_speedups`` exactly. Summation orders are fixed
(ascending index) so both backends produce bit-identical floats.
"""

from __future__ import annotations


def levenshtein_ids(a, b) -> int:
    """Edit distance between two int sequences, two-row dynamic program."""
    a = list(a)
    b = list(b)
    la, lb = len(a), len(b)
    if la == 0:
        return lb
    if lb == 0:
        return la
    prev = list(range(lb + 1))
    cur = [0] * (lb + 1)
    for i in range(1, la + 1):
        cur[0] = i
        ai = a[i - 1]
        for j in range(1, lb + 1):
            cost = 0 if ai == b[j - 1] else 1
            d = prev[j - 1] + cost
            up = prev[j] + 1
            if up < d:
                d = up
            left = cur[j - 1] + 1
            if left < d:
                d = left
            cur[j] = d
        prev, cur = cur, prev
    return prev[lb]


def pairwise_levenshtein(flat, offsets, out, row_start, row_end) -> None:
    """Fill rows [row_start, row_end) of the symmetric distance matrix.

    ``flat`` is the concatenation of all sequences, ``offsets[i]:offsets[i+1]``
    delimits sequence i. Writes both (i, j) and (j, i) for j > i; each cell
    has a unique writer so disjoint row ranges are safe to fill in parallel.
    """
    flat = list(flat)
    offs = list(offsets)
    n = len(offs) - 1
    seqs = [flat[offs[i]:offs[i + 1]] for i in range(n)]
    for i in range(row_start, row_end):
        out[i, i] = 0.0
        for j in range(i + 1, n):
            d = float(levenshtein_ids(seqs[i], seqs[j]))
            out[i, j] = d
            out[j, i] = d


def sparse_dot(ids_a, vals_a, ids_b, vals_b) -> float:
    """Dot product of two sparse vectors given as sorted-id/value arrays."""
    i = j = 0
    na, nb = len(ids_a), len(ids_b)
    acc = 0.0
    while i < na and j < nb:
        ta = ids_a[i]
        tb = ids_b[j]
        if ta == tb:
            acc += float(vals_a[i]) * float(vals_b[j])
            i += 1
            j += 1
        elif ta < tb:
            i += 1
        else:
            j += 1
    return acc


def sparse_sqnorm(vals) -> float:
    """Sum of squared values, accumulated in storage order."""
    acc = 0.0
    for v in vals:
        fv = float(v)
        acc += fv * fv
    return acc
