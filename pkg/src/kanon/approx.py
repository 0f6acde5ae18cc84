"""Approximation pipeline.

Welfare: solve the cardinality-constrained relaxation with S = floor(m/K)
signals, then repair undersized bundles; the repaired scheme keeps at least
half of the relaxation's welfare.  Revenue: start from a welfare scheme and
pair up winners so each merged bundle has two strong bidders competing.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .exact import ExactConfig, search, solve_exact
from .model import (
    TOL,
    WELFARE,
    Evaluation,
    Instance,
    InvalidInputError,
    SignalingScheme,
    bundle_values,
    check_partition,
    evaluate_revenue,
    evaluate_welfare,
)

WelfareSolver = Callable[[Instance], "tuple[SignalingScheme, Evaluation]"]

CARDINALITY_METHODS = ("exact", "greedy")


@dataclass(frozen=True)
class CardinalityConfig:
    s: int
    method: str = "exact"
    limit_m: int | None = None

    def __post_init__(self):
        if self.s < 1:
            raise InvalidInputError("signal cap s must be >= 1")
        if self.method not in CARDINALITY_METHODS:
            raise InvalidInputError(f"unknown cardinality method {self.method!r}")


def exact_welfare_solver(inst: Instance) -> tuple[SignalingScheme, Evaluation]:
    return solve_exact(inst, ExactConfig(objective=WELFARE))


@dataclass(frozen=True)
class RevenueTransferConfig:
    alpha: float = 1 / 3
    beta: float = 1 / 3
    welfare_solver: WelfareSolver = field(default=exact_welfare_solver, compare=False)

    def __post_init__(self):
        for name in ("alpha", "beta"):
            x = getattr(self, name)
            if not 0 < x < 1:
                raise InvalidInputError(f"{name} must lie in (0, 1)")


def _greedy_cardinality(V: np.ndarray, s: int) -> SignalingScheme:
    n, m = V.shape
    order = sorted(range(m), key=lambda j: (-V[:, j].max(), j))
    sums = np.zeros((s, n))
    top = np.zeros(s)
    members: list[list[int]] = [[] for _ in range(s)]
    for j in order:
        cand = sums + V[:, j]
        gains = cand.max(axis=1) - top
        c = int(np.argmax(gains))
        sums[c] = cand[c]
        top[c] = cand[c].max()
        members[c].append(j)
    return SignalingScheme(tuple(tuple(sorted(b)) for b in members if b))


def solve_cardinality(inst: Instance, cfg: CardinalityConfig) -> SignalingScheme:
    """Partition into at most ``cfg.s`` bundles of any size, maximizing welfare.

    ``exact`` enumerates; ``greedy`` is a heuristic with no ratio guarantee.
    """
    V = bundle_values(inst)
    if cfg.method == "greedy":
        return _greedy_cardinality(V, cfg.s)
    return search(V, 1, cfg.s, WELFARE, cfg.limit_m)


def repair_to_k_anonymous(inst: Instance, partition: SignalingScheme, k: int | None = None) -> SignalingScheme:
    """Turn a partition into a K-anonymous scheme keeping half its welfare.

    If the bundles already of size >= k carry at least half the welfare,
    the small bundles are folded into the largest big one.  Otherwise each
    small bundle is topped up with items taken from the big bundles,
    cheapest big bundle first and, inside it, the items its winner values
    least.  The half-welfare guarantee needs at most floor(m/k) input bundles.
    """
    k = inst.k if k is None else k
    m = inst.m
    if k > m:
        raise InvalidInputError("k > m: no feasible scheme")
    check_partition(partition, m)
    V = bundle_values(inst)
    ev = evaluate_welfare(inst, partition)
    bundles = [list(b) for b in partition.bundles]
    small = [i for i, b in enumerate(bundles) if len(b) < k]
    big = [i for i, b in enumerate(bundles) if len(b) >= k]
    if not small:
        return partition
    welfare_big = sum(ev.per_bundle[i].winner_value for i in big)

    if welfare_big >= ev.total / 2 - TOL:
        if not big:
            return SignalingScheme.grand(m)
        target = max(big, key=lambda i: (len(bundles[i]), -i))
        for i in small:
            bundles[target].extend(bundles[i])
        return SignalingScheme(tuple(tuple(sorted(bundles[i])) for i in big))

    pool_order = sorted(big, key=lambda i: (ev.per_bundle[i].winner_value, i))
    keep = set(big)
    ai = 0
    last_filled = None
    for bi in pool_order:
        if ai >= len(small):
            break
        w = ev.per_bundle[bi].winner
        items = deque(sorted(bundles[bi], key=lambda j: (V[w, j], j)))
        draining = False
        while items and ai < len(small):
            target = bundles[small[ai]]
            target.append(items.popleft())
            if len(target) >= k:
                last_filled = small[ai]
                ai += 1
            if len(items) < k:
                draining = True
        if draining:
            if items:
                bundles[last_filled].extend(items)
            keep.discard(bi)
        else:
            bundles[bi] = list(items)

    if ai < len(small):
        # only reachable with more than floor(m/k) input bundles
        leftover = [j for i in small[ai:] for j in bundles[i]]
        survivors = [i for i in small[:ai]] + sorted(keep)
        if len(leftover) >= k or not survivors:
            bundles[small[ai]] = leftover
            small = small[: ai + 1]
        else:
            dest = last_filled if last_filled is not None else survivors[0]
            bundles[dest].extend(leftover)
            small = small[:ai]
    out = sorted(set(small) | keep)
    return SignalingScheme(tuple(tuple(sorted(bundles[i])) for i in out))


def approx_welfare(inst: Instance, method: str = "exact", limit_m: int | None = None) -> tuple[SignalingScheme, Evaluation]:
    """Cardinality solve with S = floor(m/k), then repair to K-anonymity."""
    partition = solve_cardinality(inst, CardinalityConfig(s=inst.m // inst.k, method=method, limit_m=limit_m))
    scheme = repair_to_k_anonymous(inst, partition)
    return scheme, evaluate_welfare(inst, scheme)


def merge_pairwise(inst: Instance, scheme: SignalingScheme) -> SignalingScheme:
    """Merge the bundles of the 1st and 2nd largest contributors, 3rd and 4th, ...

    An odd trailing winner joins the last pair.
    """
    ev = evaluate_welfare(inst, scheme)
    contrib = ev.contributions(inst.n)
    won: dict[int, list[int]] = {}
    for r in ev.per_bundle:
        won.setdefault(r.winner, []).extend(scheme.bundles[r.bundle])
    winners = sorted(won, key=lambda i: (-contrib[i], i))
    groups = [winners[t:t + 2] for t in range(0, len(winners), 2)]
    if len(groups) > 1 and len(groups[-1]) == 1:
        groups[-2].extend(groups.pop())
    return SignalingScheme(tuple(tuple(sorted(j for w in g for j in won[w])) for g in groups))


@dataclass(frozen=True)
class TransferCandidate:
    name: str
    scheme: SignalingScheme
    evaluation: Evaluation


@dataclass(frozen=True)
class TransferOutcome:
    """All candidates built by the revenue transfer, plus the case the
    threshold rule selects."""

    candidates: tuple[TransferCandidate, ...]
    rule_case: str
    top_bidder: int | None
    welfare: float
    top_share: float | None
    welfare_without_top: float | None
    top_share_without_top: float | None

    @property
    def best(self) -> TransferCandidate:
        best = self.candidates[0]
        for c in self.candidates[1:]:
            if c.evaluation.total > best.evaluation.total + TOL:
                best = c
        return best

    @property
    def selected(self) -> TransferCandidate:
        return next(c for c in self.candidates if c.name == self.rule_case)


def transfer_revenue_candidates(inst: Instance, cfg: RevenueTransferConfig | None = None) -> TransferOutcome:
    cfg = cfg or RevenueTransferConfig()
    grand = SignalingScheme.grand(inst.m)
    grand_cand = TransferCandidate("grand", grand, evaluate_revenue(inst, grand))
    if inst.n < 1:
        raise InvalidInputError("need at least one bidder")
    if inst.n == 1:
        return TransferOutcome((grand_cand,), "grand", None, 0.0, None, None, None)

    scheme, ev = cfg.welfare_solver(inst)
    contrib = ev.contributions(inst.n)
    top = int(np.argmax(contrib))
    opt_w = ev.total
    merged = merge_pairwise(inst, scheme)
    cand_merge = TransferCandidate("merge", merged, evaluate_revenue(inst, merged))

    reduced = inst.without_bidder(top)
    scheme2, ev2 = cfg.welfare_solver(reduced)
    top2 = float(ev2.contributions(reduced.n).max())
    merged2 = merge_pairwise(reduced, scheme2)
    cand_merge2 = TransferCandidate("merge-without-top", merged2, evaluate_revenue(inst, merged2))

    if contrib[top] <= cfg.beta * opt_w + TOL:
        case = "merge"
    elif top2 <= cfg.alpha * ev2.total + TOL:
        case = "merge-without-top"
    else:
        case = "grand"
    return TransferOutcome(
        (cand_merge, cand_merge2, grand_cand), case, top, opt_w, float(contrib[top]), ev2.total, top2
    )


def transfer_revenue(inst: Instance, cfg: RevenueTransferConfig | None = None) -> tuple[SignalingScheme, Evaluation]:
    """Revenue scheme built from a welfare scheme; best of the three candidates."""
    best = transfer_revenue_candidates(inst, cfg).best
    return best.scheme, best.evaluation
