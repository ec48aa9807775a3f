# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels for the two hot loops: token-level edit distance
(pairwise, dominates training) and sparse dot products (dominate
prediction). Must stay numerically identical to ``_pyimpl``."""

from libc.stdlib cimport free, malloc


cdef int _lev_core(const int* a, Py_ssize_t la, const int* b, Py_ssize_t lb,
                   int* prev, int* cur) nogil:
    cdef Py_ssize_t i, j
    cdef int cost, d, up, left, ai
    if la == 0:
        return <int> lb
    if lb == 0:
        return <int> la
    for j in range(lb + 1):
        prev[j] = <int> j
    for i in range(1, la + 1):
        cur[0] = <int> i
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


def levenshtein_ids(int[::1] a, int[::1] b):
    """Edit distance between two int32 sequences."""
    cdef Py_ssize_t la = a.shape[0]
    cdef Py_ssize_t lb = b.shape[0]
    cdef Py_ssize_t width = lb + 1
    cdef int* buf = <int*> malloc(2 * width * sizeof(int))
    if buf == NULL:
        raise MemoryError()
    cdef const int* pa = NULL
    cdef const int* pb = NULL
    if la > 0:
        pa = &a[0]
    if lb > 0:
        pb = &b[0]
    cdef int result
    with nogil:
        result = _lev_core(pa, la, pb, lb, buf, buf + width)
    free(buf)
    return result


def pairwise_levenshtein(int[::1] flat, long long[::1] offsets,
                         double[:, ::1] out, Py_ssize_t row_start,
                         Py_ssize_t row_end):
    """Fill rows [row_start, row_end) of the symmetric distance matrix.

    Each (i, j) cell with i < j is written exactly once (plus its mirror),
    so disjoint row ranges can be filled by concurrent threads.
    """
    cdef Py_ssize_t n = offsets.shape[0] - 1
    cdef Py_ssize_t i, j, la, lb, maxlen, width
    cdef const int* base = NULL
    cdef int d
    if flat.shape[0] > 0:
        base = &flat[0]
    maxlen = 0
    for i in range(n):
        la = offsets[i + 1] - offsets[i]
        if la > maxlen:
            maxlen = la
    width = maxlen + 1
    cdef int* buf = <int*> malloc(2 * width * sizeof(int))
    if buf == NULL:
        raise MemoryError()
    with nogil:
        for i in range(row_start, row_end):
            out[i, i] = 0.0
            la = offsets[i + 1] - offsets[i]
            for j in range(i + 1, n):
                lb = offsets[j + 1] - offsets[j]
                d = _lev_core(base + offsets[i], la, base + offsets[j], lb,
                              buf, buf + width)
                out[i, j] = <double> d
                out[j, i] = <double> d
    free(buf)


def sparse_dot(int[::1] ids_a, double[::1] vals_a,
               int[::1] ids_b, double[::1] vals_b):
    """Dot product of two sparse vectors given as sorted-id/value arrays."""
    cdef Py_ssize_t i = 0, j = 0
    cdef Py_ssize_t na = ids_a.shape[0]
    cdef Py_ssize_t nb = ids_b.shape[0]
    cdef double acc = 0.0
    cdef int ta, tb
    with nogil:
        while i < na and j < nb:
            ta = ids_a[i]
            tb = ids_b[j]
            if ta == tb:
                acc += vals_a[i] * vals_b[j]
                i += 1
                j += 1
            elif ta < tb:
                i += 1
            else:
                j += 1
    return acc


def sparse_sqnorm(double[::1] vals):
    """Sum of squared values, accumulated in storage order."""
    cdef Py_ssize_t i
    cdef double acc = 0.0
    with nogil:
        for i in range(vals.shape[0]):
            acc += vals[i] * vals[i]
    return acc
