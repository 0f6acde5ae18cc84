# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled partition search.

Mirrors ``_search_py.best_partition`` operation for operation so both
backends return bit-identical results.
"""
from libc.stdlib cimport malloc, free
from libc.string cimport memcpy, memset

cdef double EPS = 1e-9
cdef double NEG_INF = -1e300


cdef struct Search:
    int n
    int m
    int k
    int cap
    bint revenue
    bint prune
    const double* V        # row-major n x m
    double* tail           # tail[j] = sum of column maxima of categories j..m-1
    int* labels
    int* best_labels
    int* size
    double* sums           # block b, bidder i at b*n + i
    double* bmax
    double* saved          # saved[j*n + i]: block row before category j was added
    int nb
    int deficit
    double partial
    double best
    bint found
    long long leaves


cdef double _leaf_value(Search* s) noexcept nogil:
    cdef int b, i
    cdef double total = 0.0, first, second, v
    if not s.revenue:
        return s.partial
    for b in range(s.nb):
        if s.n == 1:
            continue
        first = NEG_INF
        second = NEG_INF
        for i in range(s.n):
            v = s.sums[b * s.n + i]
            if v > first:
                second = first
                first = v
            elif v > second:
                second = v
        total += second
    return total


cdef void _dfs(Search* s, int j) noexcept nogil:
    cdef int b, i, nb_before, deficit_before, remaining, opened
    cdef double old_max, new_max, v, partial_before
    cdef double* row
    if j == s.m:
        s.leaves += 1
        v = _leaf_value(s)
        if not s.found or v > s.best + EPS:
            s.best = v
            s.found = True
            memcpy(s.best_labels, s.labels, s.m * sizeof(int))
        return
    remaining = s.m - j - 1
    nb_before = s.nb
    for b in range(nb_before + 1):
        opened = b == nb_before
        if opened:
            if nb_before >= s.cap:
                break
            deficit_before = s.deficit
            s.deficit = s.deficit + s.k - 1
        else:
            deficit_before = s.deficit
            if s.size[b] < s.k:
                s.deficit = s.deficit - 1
        if s.deficit > remaining:
            s.deficit = deficit_before
            continue
        row = s.sums + b * s.n
        if opened:
            s.nb = nb_before + 1
            s.size[b] = 0
            s.bmax[b] = 0.0
            memset(row, 0, s.n * sizeof(double))
        memcpy(s.saved + j * s.n, row, s.n * sizeof(double))
        old_max = s.bmax[b]
        new_max = NEG_INF
        for i in range(s.n):
            row[i] = row[i] + s.V[i * s.m + j]
            if row[i] > new_max:
                new_max = row[i]
        partial_before = s.partial
        s.bmax[b] = new_max
        s.partial = s.partial + (new_max - old_max)
        s.size[b] += 1
        s.labels[j] = b
        if not (s.prune and s.found and s.partial + s.tail[j + 1] <= s.best + EPS):
            _dfs(s, j + 1)
        s.size[b] -= 1
        s.partial = partial_before
        s.bmax[b] = old_max
        memcpy(row, s.saved + j * s.n, s.n * sizeof(double))
        s.nb = nb_before
        s.deficit = deficit_before


def best_partition(const double[:, ::1] V, int k, int max_bundles, bint revenue):
    """Return ``(value, labels, leaves)`` of the first optimal partition.

    Partitions are visited in restricted-growth-string order; only those
    with every block of size >= k and at most ``max_bundles`` blocks count.
    """
    cdef int n = V.shape[0], m = V.shape[1], i, j
    cdef Search s
    cdef double cm
    if m == 0:
        return 0.0, [], 0
    s.n = n
    s.m = m
    s.k = k
    s.cap = max_bundles if 0 < max_bundles < m else m
    s.revenue = revenue
    s.prune = not revenue
    s.V = &V[0, 0]
    s.tail = <double*>malloc((m + 1) * sizeof(double))
    s.labels = <int*>malloc(m * sizeof(int))
    s.best_labels = <int*>malloc(m * sizeof(int))
    s.size = <int*>malloc(m * sizeof(int))
    s.sums = <double*>malloc(m * n * sizeof(double))
    s.bmax = <double*>malloc(m * sizeof(double))
    s.saved = <double*>malloc(m * n * sizeof(double))
    try:
        s.tail[m] = 0.0
        for j in range(m - 1, -1, -1):
            cm = 0.0
            for i in range(n):
                if V[i, j] > cm:
                    cm = V[i, j]
            s.tail[j] = s.tail[j + 1] + cm
        s.nb = 0
        s.deficit = 0
        s.partial = 0.0
        s.best = NEG_INF
        s.found = False
        s.leaves = 0
        with nogil:
            _dfs(&s, 0)
        if not s.found:
            return None, None, s.leaves
        return s.best, [s.best_labels[j] for j in range(m)], s.leaves
    finally:
        free(s.tail)
        free(s.labels)
        free(s.best_labels)
        free(s.size)
        free(s.sums)
        free(s.bmax)
        free(s.saved)
