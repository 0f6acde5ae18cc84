"""Instance generators: random, the repair gap family, and the two
hardness-reduction constructions (with checks of their claimed properties).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations
from typing import Sequence

import numpy as np

from .exact import ExactConfig, solve_exact
from .model import REVENUE, TOL, Instance, InvalidInputError, StructuredValuation

MAX_IFF_ITEMS = 8


def _meta(name: str, **params) -> dict:
    return {"generator": name, "params": params}


def gen_random(n: int, m: int, k: int, seed: int, value_range: tuple[int, int] = (0, 9)) -> Instance:
    """Integer valuations drawn uniformly from ``value_range`` (inclusive)."""
    lo, hi = value_range
    if lo < 0 or hi < lo:
        raise InvalidInputError(f"invalid value range {value_range}")
    if n < 1 or m < 1 or not 1 <= k <= m:
        raise InvalidInputError("need n >= 1, m >= 1 and 1 <= k <= m")
    rng = np.random.default_rng(seed)
    values = rng.integers(lo, hi + 1, size=(n, m)).astype(float)
    return Instance(n=n, m=m, k=k, values=values.tolist(),
                    metadata=_meta("random", n=n, m=m, k=k, seed=seed, value_range=[lo, hi]))


def gen_random_structured(n: int, m: int, k: int, seed: int, value_range: tuple[int, int] = (0, 5)) -> Instance:
    """Random ``p[i] * q[j] + b[i]`` valuations with integer p, q, b."""
    lo, hi = value_range
    rng = np.random.default_rng(seed)
    while True:
        p, b = rng.integers(lo, hi + 1, size=n), rng.integers(lo, hi + 1, size=n)
        q = rng.integers(lo, hi + 1, size=m)
        sv = StructuredValuation(p.tolist(), q.tolist(), b.tolist())
        if np.all(sv.expand() >= 0):
            break
    return Instance.from_structured(
        sv, k, metadata=_meta("random-structured", n=n, m=m, k=k, seed=seed, value_range=[lo, hi]))


@dataclass(frozen=True)
class GapParams:
    k: int
    epsilon: float = 0.2

    def __post_init__(self):
        if self.k < 2:
            raise InvalidInputError("gap family needs k >= 2")
        if not 0 < self.epsilon < 1:
            raise InvalidInputError("epsilon must lie in (0, 1)")


def gen_gap(params: GapParams) -> Instance:
    """k^2 + k categories, k + 2 bidders.

    Bidder 0 values each of the first k^2 categories at 1/k; bidder i in
    1..k values category k^2 + i - 1 at 1; the last bidder values each of
    the last k categories at 1 - epsilon/k.
    """
    k, eps = params.k, params.epsilon
    m, n = k * k + k, k + 2
    v = np.zeros((n, m))
    v[0, : k * k] = 1 / k
    for i in range(1, k + 1):
        v[i, k * k + i - 1] = 1.0
    v[k + 1, k * k:] = 1 - eps / k
    return Instance(n=n, m=m, k=k, values=v.tolist(), metadata=_meta("gap", k=k, epsilon=eps))


def gap_schemes(k: int) -> tuple[tuple[int, ...], ...]:
    """The optimal gap scheme: first k^2 categories, then the last k."""
    return (tuple(range(k * k)), tuple(range(k * k, k * k + k)))


@dataclass(frozen=True)
class CardinalityInstance:
    """Welfare instance with a cap ``s`` on the number of signals."""

    m: int
    s: int
    values: tuple[tuple[float, ...], ...]

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(tuple(float(x) for x in row) for row in self.values))
        if not 1 <= self.s <= self.m:
            raise InvalidInputError("need 1 <= s <= m")
        if any(len(row) != self.m for row in self.values) or not self.values:
            raise InvalidInputError("values must be a non-empty n x m matrix")
        if any(x != int(x) or x < 0 for row in self.values for x in row):
            raise InvalidInputError("cardinality instances use non-negative integer values")

    def as_instance(self) -> Instance:
        return Instance(n=len(self.values), m=self.m, k=1, values=self.values)


def reduction_anonymity(m: int, s: int) -> int:
    return math.ceil((m - s) / 2 + 1)


def reduction_padding(m: int, s: int) -> int:
    k = reduction_anonymity(m, s)
    return k * s - m + k - 1


def gen_welfare_reduction(ci: CardinalityInstance) -> Instance:
    """Pad a cardinality instance into a K-anonymous one.

    K = ceil((m - S)/2 + 1); K*S - m + K - 1 new categories and as many new
    bidders are added, new bidder t valuing only new category t, at 1/S.
    """
    m, s = ci.m, ci.s
    k = reduction_anonymity(m, s)
    pad = reduction_padding(m, s)
    n_old = len(ci.values)
    v = np.zeros((n_old + pad, m + pad))
    v[:n_old, :m] = np.asarray(ci.values)
    for t in range(pad):
        v[n_old + t, m + t] = 1 / s
    return Instance(n=n_old + pad, m=m + pad, k=k, values=v.tolist(),
                    metadata=_meta("welfare-reduction", m=m, s=s, values=[list(r) for r in ci.values]))


@dataclass(frozen=True)
class SspsParams:
    xs: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "xs", tuple(int(x) for x in self.xs))
        if len(self.xs) < 2 or len(self.xs) % 2:
            raise InvalidInputError("xs needs an even number (>= 2) of entries")
        if any(x <= 0 for x in self.xs):
            raise InvalidInputError("xs entries must be positive integers")

    @property
    def w(self) -> int:
        return sum(self.xs)

    @property
    def k(self) -> int:
        return (len(self.xs) + 2) // 2


def gen_revenue_reduction(params: SspsParams) -> Instance:
    """Three bidders, 2k categories: bidders 0 and 1 each value one private
    category at W/2, bidder 2 values category 1 + i at x_i."""
    xs, k, w = params.xs, params.k, params.w
    v = np.zeros((3, 2 * k))
    v[0, 0] = w / 2
    v[1, 1] = w / 2
    v[2, 2:] = xs
    return Instance(n=3, m=2 * k, k=k, values=v.tolist(), metadata=_meta("revenue-reduction", xs=list(xs)))


def ssps_solvable(xs: Sequence[int]) -> bool:
    """Can xs be split into two halves of equal size and equal sum?"""
    total, half = sum(xs), len(xs) // 2
    if total % 2:
        return False
    # fixing index 0 in the first half removes mirrored duplicates
    return any(xs[0] + sum(xs[i] for i in rest) == total // 2
               for rest in combinations(range(1, len(xs)), half - 1))


@dataclass(frozen=True)
class IffReport:
    xs: tuple[int, ...]
    w: int
    ssps_solvable: bool
    revenue: float
    revenue_hits_w: bool

    @property
    def holds(self) -> bool:
        return self.ssps_solvable == self.revenue_hits_w


def verify_reduction_iff(params: SspsParams) -> IffReport:
    if len(params.xs) > MAX_IFF_ITEMS:
        raise InvalidInputError(f"iff check limited to {MAX_IFF_ITEMS} integers")
    inst = gen_revenue_reduction(params)
    _, ev = solve_exact(inst, ExactConfig(objective=REVENUE))
    return IffReport(params.xs, params.w, ssps_solvable(params.xs), ev.total, abs(ev.total - params.w) <= TOL)
