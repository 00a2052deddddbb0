# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot loops: word-level edit distance and permutation enumeration.

Mirrors the signatures in _kernels_py; the dispatcher in kernels.py picks
whichever import succeeds.
"""

from libc.stdlib cimport free, malloc


def levenshtein(int[::1] a, int[::1] b):
    """Edit distance between two int-encoded token sequences."""
    cdef Py_ssize_t la = a.shape[0]
    cdef Py_ssize_t lb = b.shape[0]
    if la == 0:
        return lb
    if lb == 0:
        return la
    cdef int *prev = <int *> malloc((lb + 1) * sizeof(int))
    cdef int *curr = <int *> malloc((lb + 1) * sizeof(int))
    if prev == NULL or curr == NULL:
        free(prev)
        free(curr)
        raise MemoryError()
    cdef Py_ssize_t i, j
    cdef int cost, best
    try:
        for j in range(lb + 1):
            prev[j] = <int> j
        for i in range(la):
            curr[0] = <int> (i + 1)
            for j in range(lb):
                cost = 0 if a[i] == b[j] else 1
                best = prev[j] + cost          # substitution / match
                if prev[j + 1] + 1 < best:     # deletion
                    best = prev[j + 1] + 1
                if curr[j] + 1 < best:         # insertion
                    best = curr[j] + 1
                curr[j + 1] = best
            prev, curr = curr, prev
        return prev[lb]
    finally:
        free(prev)
        free(curr)


def count_perm_dot_abs_ge(long long[::1] u, long long[::1] v,
                          long long center, long long target):
    """Over all permutations p of v, count |sum_i u[i]*v[p(i)] - center| >= target.

    Returns (hits, total).  Uses Heap's algorithm; each step swaps two
    positions so the dot product updates in O(1).
    """
    cdef Py_ssize_t n = u.shape[0]
    if n != v.shape[0]:
        raise ValueError("u and v must have equal length")
    if n == 0:
        return (0, 1)
    if n > 13:
        raise ValueError("permutation enumeration limited to n <= 13")

    cdef long long *work = <long long *> malloc(n * sizeof(long long))
    cdef Py_ssize_t *counters = <Py_ssize_t *> malloc(n * sizeof(Py_ssize_t))
    if work == NULL or counters == NULL:
        free(work)
        free(counters)
        raise MemoryError()

    cdef long long dot = 0, hits = 0, total = 1, diff, tmp
    cdef Py_ssize_t i, j, k
    try:
        for i in range(n):
            work[i] = v[i]
            counters[i] = 0
            dot += u[i] * v[i]
        diff = dot - center
        if diff < 0:
            diff = -diff
        if diff >= target:
            hits += 1

        i = 0
        while i < n:
            if counters[i] < i:
                j = 0 if i % 2 == 0 else counters[i]
                k = i
                # swap work[j] and work[k], updating the dot product
                dot += (u[j] - u[k]) * (work[k] - work[j])
                tmp = work[j]
                work[j] = work[k]
                work[k] = tmp
                total += 1
                diff = dot - center
                if diff < 0:
                    diff = -diff
                if diff >= target:
                    hits += 1
                counters[i] += 1
                i = 0
            else:
                counters[i] = 0
                i += 1
        return (hits, total)
    finally:
        free(work)
        free(counters)
