"""Polynomial-time exact solvers for two special cases.

* Constant number of signals: enumerate the set of winners, then repair the
  favourite-bidder allocation with a minimum cost feasible flow so every
  winner holds at least K categories.
* Structured valuations ``V[i][j] = p[i] * q[j] + b[i]``: after sorting
  bidders by p and categories by q, some optimum gives each winner a
  contiguous run of categories, which a DP over (bidder, category) prefixes
  finds in O(n m^2).
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Sequence

import numpy as np

from .flow import Arc, FlowNetwork, min_cost_feasible_flow
from .model import (
    TOL,
    Evaluation,
    InfeasibleError,
    Instance,
    InvalidInputError,
    SignalingScheme,
    bundle_values,
    evaluate_welfare,
)

MAX_CONSTANT_SIGNALS = 4


@dataclass(frozen=True)
class WinnerAssignment:
    winners: tuple[int, ...]
    allocation: tuple[int, ...]  # category -> position in winners

    def scheme(self) -> SignalingScheme:
        bundles = [[] for _ in self.winners]
        for j, pos in enumerate(self.allocation):
            bundles[pos].append(j)
        return SignalingScheme(tuple(tuple(b) for b in bundles))


def build_repair_network(V: np.ndarray, winners: Sequence[int], owner: Sequence[int], k: int) -> FlowNetwork:
    """Network whose feasible flows are the reallocations meeting the size floor.

    Node layout: 0 source, 1 sink, then w_i, w_i', item_j.  Sending a unit
    along w_o' -> item_j -> w_l moves category j from its current holder o to
    winner l at cost V[o, j] - V[l, j].
    """
    c, m = len(winners), V.shape[1]
    w_in = lambda i: 2 + i
    w_out = lambda i: 2 + c + i
    item = lambda j: 2 + 2 * c + j
    held = np.bincount(np.asarray(owner, dtype=int), minlength=c)
    arcs = []
    for i in range(c):
        arcs.append(Arc(0, w_in(i), held[i], held[i], 0.0))
        arcs.append(Arc(w_in(i), w_out(i), 0, m, 0.0))
        arcs.append(Arc(w_out(i), 1, k, m, 0.0))
    for j in range(m):
        o = owner[j]
        arcs.append(Arc(w_out(o), item(j), 0, 1, float(V[winners[o], j])))
        for l in range(c):
            if l != o:
                arcs.append(Arc(item(j), w_in(l), 0, 1, -float(V[winners[l], j])))
    return FlowNetwork(2 + 2 * c + m, tuple(arcs), source=0, sink=1)


def _fixed_winner_assignment(V: np.ndarray, winners: Sequence[int], k: int) -> WinnerAssignment:
    c, m = len(winners), V.shape[1]
    if c == 0 or len(set(winners)) != c:
        raise InvalidInputError("winners must be a non-empty sequence of distinct bidders")
    if c * k > m:
        raise InfeasibleError(f"K-anonymity unachievable with {c} winners: {c}*{k} > {m}")
    owner = [int(np.argmax(V[list(winners), j])) for j in range(m)]
    if min(np.bincount(owner, minlength=c)) >= k:
        return WinnerAssignment(tuple(winners), tuple(owner))
    net = build_repair_network(V, winners, owner, k)
    flows, _ = min_cost_feasible_flow(net)
    final = list(owner)
    first_item = 2 + 2 * c
    for arc, f in zip(net.arcs, flows):
        if arc.tail >= first_item and f > 0.5:
            final[arc.tail - first_item] = arc.head - 2
    return WinnerAssignment(tuple(winners), tuple(final))


def solve_fixed_winners(inst: Instance, winners: Sequence[int], k: int | None = None) -> tuple[SignalingScheme, Evaluation]:
    """Best allocation of all categories to ``winners``, each receiving >= k."""
    k = inst.k if k is None else k
    V = bundle_values(inst)
    if any(not 0 <= w < inst.n for w in winners):
        raise InvalidInputError("winner index out of range")
    scheme = _fixed_winner_assignment(V, list(winners), k).scheme()
    return scheme, evaluate_welfare(inst, scheme)


def solve_constant_signals(inst: Instance, c: int) -> tuple[SignalingScheme, Evaluation]:
    """Welfare optimum over K-anonymous schemes with at most ``c`` signals."""
    if not 1 <= c <= MAX_CONSTANT_SIGNALS:
        raise InvalidInputError(f"signal count must be in 1..{MAX_CONSTANT_SIGNALS}")
    V = bundle_values(inst)
    best = None
    for count in range(1, min(c, inst.n, inst.m // inst.k) + 1):
        for winners in combinations(range(inst.n), count):
            scheme = _fixed_winner_assignment(V, winners, inst.k).scheme()
            ev = evaluate_welfare(inst, scheme)
            if best is None or ev.total > best[1].total + TOL:
                best = (scheme, ev)
    if best is None:
        raise InfeasibleError("k > m")
    return best


def structured_dp_blocks(inst: Instance, k: int | None = None) -> tuple[float, list[tuple[int, tuple[int, ...]]]]:
    """Run the prefix DP; return its optimum and the (bidder, categories) blocks.

    Categories the DP skipped are attached to the neighbouring block below
    them in q order (or above, if none is below).
    """
    k = inst.k if k is None else k
    sv = inst.structured
    if sv is None:
        raise InvalidInputError("structured valuation required")
    bundle_values(inst)  # validates consistency of the structured block
    if inst.priors is not None and any(abs(x - 1.0) > TOL for x in inst.priors):
        raise InvalidInputError("structured DP needs unit priors")
    n, m = inst.n, inst.m
    bidders = sorted(range(n), key=lambda i: (sv.p[i], i))
    cats = sorted(range(m), key=lambda j: (sv.q[j], j))
    prefix = np.concatenate([[0.0], np.cumsum([sv.q[j] for j in cats])])

    F = np.zeros((n + 1, m + 1))
    # choice: -1 drop bidder, 0 skip category, K1 >= k block of K1
    choice = np.zeros((n + 1, m + 1), dtype=int)
    for i in range(1, n + 1):
        p, b = sv.p[bidders[i - 1]], sv.b[bidders[i - 1]]
        for j in range(1, m + 1):
            best, arg = F[i - 1, j], -1
            if F[i, j - 1] > best:
                best, arg = F[i, j - 1], 0
            for K1 in range(k, j + 1):
                v = F[i - 1, j - K1] + K1 * b + p * (prefix[j] - prefix[j - K1])
                if v > best:
                    best, arg = v, K1
            F[i, j], choice[i, j] = best, arg

    blocks: list[tuple[int, list[int]]] = []  # (bidder, sorted positions), descending
    i, j = n, m
    while i > 0 and j > 0:
        ch = choice[i, j]
        if ch == -1:
            i -= 1
        elif ch == 0:
            j -= 1
        else:
            blocks.append((bidders[i - 1], list(range(j - ch, j))))
            i, j = i - 1, j - ch
    if not blocks:
        return float(F[n, m]), [(bidders[-1], tuple(range(m)))]
    blocks.reverse()

    owner_of = [-1] * m
    for bi, (_, positions) in enumerate(blocks):
        for t in positions:
            owner_of[t] = bi
    current = 0
    for t in range(m):
        if owner_of[t] == -1:
            owner_of[t] = current
            blocks[current][1].append(t)
        else:
            current = owner_of[t]
    out = [(bidder, tuple(sorted(cats[t] for t in positions))) for bidder, positions in blocks]
    return float(F[n, m]), out


def solve_structured_dp(inst: Instance, k: int | None = None) -> tuple[SignalingScheme, Evaluation]:
    _, blocks = structured_dp_blocks(inst, k)
    scheme = SignalingScheme(tuple(cats for _, cats in blocks))
    return scheme, evaluate_welfare(inst, scheme)
