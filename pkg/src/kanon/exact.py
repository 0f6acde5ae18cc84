"""Brute-force oracle over all K-anonymous partitions."""
from __future__ import annotations

import os
from dataclasses import dataclass
from typing import Iterator

from . import _kernel
from .model import (
    OBJECTIVES,
    WELFARE,
    Evaluation,
    Instance,
    InvalidInputError,
    ScaleError,
    SignalingScheme,
    bundle_values,
    evaluate,
)

DEFAULT_LIMIT_M = 12


def default_limit_m() -> int:
    raw = os.environ.get("KANON_LIMIT_M")
    return int(raw) if raw else DEFAULT_LIMIT_M


@dataclass(frozen=True)
class ExactConfig:
    objective: str = WELFARE
    max_bundles: int | None = None
    limit_m: int | None = None  # None reads KANON_LIMIT_M, else 12

    def __post_init__(self):
        if self.objective not in OBJECTIVES:
            raise InvalidInputError(f"unknown objective {self.objective!r}")
        if self.max_bundles is not None and self.max_bundles < 1:
            raise InvalidInputError("max_bundles must be >= 1")


def enumerate_partitions(m: int, k: int, max_bundles: int | None = None) -> Iterator[tuple[tuple[int, ...], ...]]:
    """Yield each partition of ``range(m)`` whose blocks all have size >= k.

    Order is lexicographic in the restricted-growth encoding (category 0 is
    in block 0, each later category joins an existing block or opens the
    next one).
    """
    if k > m:
        raise InvalidInputError("k > m: no feasible partition")
    if k < 1 or m < 1:
        raise InvalidInputError("m and k must be positive")
    cap = m if max_bundles is None else min(max_bundles, m)
    blocks: list[list[int]] = []

    def rec(j: int, deficit: int):
        if j == m:
            yield tuple(tuple(b) for b in blocks)
            return
        remaining = m - j - 1
        for b in range(len(blocks) + 1):
            if b == len(blocks):
                if len(blocks) >= cap:
                    break
                d = deficit + k - 1
                if d > remaining:
                    continue
                blocks.append([j])
                yield from rec(j + 1, d)
                blocks.pop()
            else:
                d = deficit - 1 if len(blocks[b]) < k else deficit
                if d > remaining:
                    continue
                blocks[b].append(j)
                yield from rec(j + 1, d)
                blocks[b].pop()

    yield from rec(0, 0)


def search(V, k: int, max_bundles: int | None, objective: str, limit_m: int | None = None) -> SignalingScheme:
    """Run the kernel on a raw value matrix and return the optimal scheme."""
    m = V.shape[1]
    limit = default_limit_m() if limit_m is None else limit_m
    if m > limit:
        raise ScaleError(f"oracle scale exceeded: m={m} > limit_m={limit}")
    value, labels, _ = _kernel.best_partition(V, k, max_bundles or 0, objective != WELFARE)
    if labels is None:
        raise InvalidInputError("no partition satisfies the constraints")
    return SignalingScheme.from_labels(labels)


def solve_exact(inst: Instance, cfg: ExactConfig | None = None) -> tuple[SignalingScheme, Evaluation]:
    cfg = cfg or ExactConfig()
    V = bundle_values(inst)
    scheme = search(V, inst.k, cfg.max_bundles, cfg.objective, cfg.limit_m)
    return scheme, evaluate(inst, scheme, cfg.objective)
