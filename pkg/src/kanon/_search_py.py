"""Pure-Python partition search, used when the compiled kernel is unavailable.

Performs the same floating point operations in the same order as the
Cython version, so the two backends agree exactly.
"""
from __future__ import annotations

import numpy as np

EPS = 1e-9
NEG_INF = -1e300


def best_partition(V, k: int, max_bundles: int, revenue: bool):
    """Return ``(value, labels, leaves)`` of the first optimal partition.

    Partitions are visited in restricted-growth-string order; only those
    with every block of size >= k and at most ``max_bundles`` blocks count.
    ``(None, None, leaves)`` means no partition qualified.
    """
    V = np.ascontiguousarray(V, dtype=float)
    n, m = V.shape
    if m == 0:
        return 0.0, [], 0
    cols = [V[:, j].tolist() for j in range(m)]
    cap = max_bundles if 0 < max_bundles < m else m
    prune = not revenue

    tail = [0.0] * (m + 1)
    for j in range(m - 1, -1, -1):
        cm = 0.0
        for x in cols[j]:
            if x > cm:
                cm = x
        tail[j] = tail[j + 1] + cm

    labels = [0] * m
    size = [0] * m
    sums = [[0.0] * n for _ in range(m)]
    bmax = [0.0] * m
    st = {"nb": 0, "deficit": 0, "partial": 0.0, "best": NEG_INF, "found": False,
          "best_labels": None, "leaves": 0}

    def leaf_value():
        if not revenue:
            return st["partial"]
        total = 0.0
        for b in range(st["nb"]):
            if n == 1:
                continue
            first = NEG_INF
            second = NEG_INF
            for v in sums[b]:
                if v > first:
                    second = first
                    first = v
                elif v > second:
                    second = v
            total += second
        return total

    def dfs(j):
        if j == m:
            st["leaves"] += 1
            v = leaf_value()
            if not st["found"] or v > st["best"] + EPS:
                st["best"] = v
                st["found"] = True
                st["best_labels"] = labels[:]
            return
        remaining = m - j - 1
        nb_before = st["nb"]
        col = cols[j]
        for b in range(nb_before + 1):
            opened = b == nb_before
            deficit_before = st["deficit"]
            if opened:
                if nb_before >= cap:
                    break
                st["deficit"] = deficit_before + k - 1
            elif size[b] < k:
                st["deficit"] = deficit_before - 1
            if st["deficit"] > remaining:
                st["deficit"] = deficit_before
                continue
            if opened:
                st["nb"] = nb_before + 1
                size[b] = 0
                bmax[b] = 0.0
                sums[b] = [0.0] * n
            saved = sums[b]
            row = [saved[i] + col[i] for i in range(n)]
            new_max = NEG_INF
            for x in row:
                if x > new_max:
                    new_max = x
            sums[b] = row
            old_max = bmax[b]
            partial_before = st["partial"]
            bmax[b] = new_max
            st["partial"] = partial_before + (new_max - old_max)
            size[b] += 1
            labels[j] = b
            if not (prune and st["found"] and st["partial"] + tail[j + 1] <= st["best"] + EPS):
                dfs(j + 1)
            size[b] -= 1
            st["partial"] = partial_before
            bmax[b] = old_max
            sums[b] = saved
            st["nb"] = nb_before
            st["deficit"] = deficit_before

    dfs(0)
    if not st["found"]:
        return None, None, st["leaves"]
    return st["best"], st["best_labels"], st["leaves"]
