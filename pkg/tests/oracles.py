"""Independent brute-force references used by the tests.

Nothing here calls into the solvers; partitions are generated by a
different recursion and objectives are summed with plain Python loops.
"""
from __future__ import annotations

import itertools
from math import comb


def set_partitions(items):
    """All set partitions of ``items`` (first element picks its block mates)."""
    items = list(items)
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for r in range(len(rest) + 1):
        for mates in itertools.combinations(rest, r):
            remaining = [x for x in rest if x not in mates]
            for sub in set_partitions(remaining):
                yield [[first, *mates]] + sub


def count_min_block(m: int, k: int, max_blocks: int | None = None) -> int:
    """Number of partitions of an m-set into blocks of size >= k.

    Recurrence on the block holding the last element: either that block has
    more than k elements (drop the element, b choices to put it back) or
    exactly k (choose its k-1 companions).  Expressed as
    T(n, b) = b T(n-1, b) + C(n-1, k-1) T(n-k, b-1).
    """
    cap = m if max_blocks is None else max_blocks
    T = [[0] * (cap + 1) for _ in range(m + 1)]
    T[0][0] = 1
    for n in range(1, m + 1):
        for b in range(1, cap + 1):
            T[n][b] = b * T[n - 1][b]
            if n >= k:
                T[n][b] += comb(n - 1, k - 1) * T[n - k][b - 1]
    return sum(T[m][1:])


def bidder_bundle_values(V, bundle):
    return [sum(V[i][j] for j in bundle) for i in range(len(V))]


def welfare(V, bundles):
    return sum(max(bidder_bundle_values(V, b)) for b in bundles)


def revenue(V, bundles):
    total = 0.0
    for b in bundles:
        vals = sorted(bidder_bundle_values(V, b), reverse=True)
        total += vals[1] if len(vals) > 1 else 0.0
    return total


def brute_optimum(V, k, objective="welfare", max_blocks=None):
    m = len(V[0])
    f = welfare if objective == "welfare" else revenue
    best = None
    for p in set_partitions(range(m)):
        if any(len(b) < k for b in p):
            continue
        if max_blocks is not None and len(p) > max_blocks:
            continue
        v = f(V, p)
        if best is None or v > best:
            best = v
    return best


def brute_fixed_winners(V, winners, k):
    """Max of sum V[winner][j] over assignments giving each winner >= k items."""
    m = len(V[0])
    best = None
    for assign in itertools.product(range(len(winners)), repeat=m):
        counts = [assign.count(t) for t in range(len(winners))]
        if min(counts) < k:
            continue
        v = sum(V[winners[a]][j] for j, a in enumerate(assign))
        if best is None or v > best:
            best = v
    return best


def brute_flow(num_nodes, arcs, source, sink, demand=None):
    """Cheapest integer flow by enumeration; None when infeasible.

    ``arcs`` are (tail, head, lower, upper, cost) with small finite bounds.
    Without a demand the source may ship any non-negative amount.
    """
    best = None
    ranges = [range(int(a[2]), int(a[3]) + 1) for a in arcs]
    for flows in itertools.product(*ranges):
        net = [0] * num_nodes
        for (u, v, *_), f in zip(arcs, flows):
            net[u] -= f
            net[v] += f
        if any(net[x] != 0 for x in range(num_nodes) if x not in (source, sink)):
            continue
        shipped = -net[source]
        if source != sink and net[sink] != shipped:
            continue
        if demand is None and shipped < 0:
            continue
        if demand is not None and shipped != demand:
            continue
        cost = sum(f * a[4] for a, f in zip(arcs, flows))
        if best is None or cost < best:
            best = cost
    return best


def equal_split_exists(xs):
    """Exhaustive equal-size equal-sum split search over all index subsets."""
    n = len(xs)
    total = sum(xs)
    for mask in range(1 << n):
        chosen = [xs[i] for i in range(n) if mask >> i & 1]
        if len(chosen) == n // 2 and 2 * sum(chosen) == total:
            return True
    return False
