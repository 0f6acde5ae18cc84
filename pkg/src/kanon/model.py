"""Core data types and objective evaluators for K-anonymous signaling.

A signaling scheme is a partition of the m impression categories into
bundles; each bundle is sold in its own second-price auction.  Welfare sums
the highest bidder value per bundle, revenue the second highest.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any, Iterable, Sequence

import numpy as np

TOL = 1e-9

WELFARE = "welfare"
REVENUE = "revenue"
OBJECTIVES = (WELFARE, REVENUE)


class KanonError(Exception):
    """Base class for all solver errors."""


class InvalidInputError(KanonError, ValueError):
    pass


class InfeasibleError(KanonError):
    """No scheme satisfies the anonymity (or flow) constraints."""


class ScaleError(KanonError):
    """Brute-force oracle refused an instance above its size guard."""


def _as_floats(xs: Iterable[Any]) -> tuple[float, ...]:
    return tuple(float(x) for x in xs)


@dataclass(frozen=True)
class StructuredValuation:
    """Valuations of the form ``V[i][j] = p[i] * q[j] + b[i]``."""

    p: tuple[float, ...]
    q: tuple[float, ...]
    b: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "p", _as_floats(self.p))
        object.__setattr__(self, "q", _as_floats(self.q))
        object.__setattr__(self, "b", _as_floats(self.b))

    def expand(self) -> np.ndarray:
        p = np.asarray(self.p, dtype=float)
        q = np.asarray(self.q, dtype=float)
        b = np.asarray(self.b, dtype=float)
        return np.outer(p, q) + b[:, None]

    def to_dict(self) -> dict:
        return {"p": list(self.p), "q": list(self.q), "b": list(self.b)}

    @classmethod
    def from_dict(cls, d: dict) -> "StructuredValuation":
        return cls(p=d["p"], q=d["q"], b=d["b"])


@dataclass(frozen=True)
class Instance:
    """Auction input: n bidders, m categories and anonymity level k.

    ``values[i][j]`` is bidder i's value for category j.  When ``priors`` is
    None every category has weight 1, so the bundle-value matrix equals
    ``values``.
    """

    n: int
    m: int
    k: int
    values: tuple[tuple[float, ...], ...]
    priors: tuple[float, ...] | None = None
    structured: StructuredValuation | None = None
    metadata: dict | None = field(default=None, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(_as_floats(row) for row in self.values))
        if self.priors is not None:
            object.__setattr__(self, "priors", _as_floats(self.priors))

    @classmethod
    def from_structured(cls, sv: StructuredValuation, k: int, **kw) -> "Instance":
        v = sv.expand()
        return cls(n=len(sv.p), m=len(sv.q), k=k, values=v.tolist(), structured=sv, **kw)

    def without_bidder(self, i: int) -> "Instance":
        rows = self.values[:i] + self.values[i + 1:]
        return Instance(n=self.n - 1, m=self.m, k=self.k, values=rows, priors=self.priors)

    def to_dict(self) -> dict:
        d: dict[str, Any] = {"n": self.n, "m": self.m, "k": self.k}
        if self.priors is not None:
            d["priors"] = list(self.priors)
        d["values"] = [list(row) for row in self.values]
        if self.structured is not None:
            d["structured"] = self.structured.to_dict()
        if self.metadata is not None:
            d["metadata"] = self.metadata
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "Instance":
        try:
            sv = d.get("structured")
            return cls(
                n=int(d["n"]),
                m=int(d["m"]),
                k=int(d["k"]),
                values=d["values"],
                priors=d.get("priors"),
                structured=StructuredValuation.from_dict(sv) if sv is not None else None,
                metadata=d.get("metadata"),
            )
        except (KeyError, TypeError) as exc:
            raise InvalidInputError(f"malformed instance: {exc}") from exc


@dataclass(frozen=True)
class SignalingScheme:
    """A deterministic signaling map stored as a list of bundles."""

    bundles: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        object.__setattr__(self, "bundles", tuple(tuple(int(j) for j in b) for b in self.bundles))

    @classmethod
    def from_labels(cls, labels: Sequence[int]) -> "SignalingScheme":
        """Build from a block label per category (labels are 0..B-1)."""
        blocks: dict[int, list[int]] = {}
        for j, lab in enumerate(labels):
            blocks.setdefault(int(lab), []).append(j)
        return cls(tuple(tuple(blocks[b]) for b in sorted(blocks)))

    @classmethod
    def grand(cls, m: int) -> "SignalingScheme":
        return cls((tuple(range(m)),))

    def sizes(self) -> list[int]:
        return [len(b) for b in self.bundles]

    def to_dict(self) -> dict:
        return {"bundles": [list(b) for b in self.bundles]}

    @classmethod
    def from_dict(cls, d: dict) -> "SignalingScheme":
        try:
            return cls(d["bundles"])
        except (KeyError, TypeError) as exc:
            raise InvalidInputError(f"malformed scheme: {exc}") from exc


@dataclass(frozen=True)
class BundleOutcome:
    bundle: int
    winner: int
    winner_value: float
    price: float = 0.0


@dataclass(frozen=True)
class Evaluation:
    objective: str
    total: float
    per_bundle: tuple[BundleOutcome, ...]

    def to_dict(self) -> dict:
        return {
            "objective": self.objective,
            "total": self.total,
            "per_bundle": [
                {"bundle": r.bundle, "winner": r.winner, "winner_value": r.winner_value, "price": r.price}
                for r in self.per_bundle
            ],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "Evaluation":
        recs = tuple(
            BundleOutcome(int(r["bundle"]), int(r["winner"]), float(r["winner_value"]), float(r["price"]))
            for r in d["per_bundle"]
        )
        return cls(objective=d["objective"], total=float(d["total"]), per_bundle=recs)

    def contributions(self, n: int) -> np.ndarray:
        """Per-bidder welfare contribution (sum of winner values over bundles won)."""
        out = np.zeros(n)
        for r in self.per_bundle:
            out[r.winner] += r.winner_value
        return out


def validate_instance(inst: Instance) -> list[str]:
    """Return the list of violated instance invariants; empty means valid."""
    errors = []
    if inst.n < 1:
        errors.append("n must be a positive integer")
    if inst.m < 1:
        errors.append("m must be a positive integer")
    if inst.k < 1:
        errors.append("k must be a positive integer")
    if inst.k > inst.m:
        errors.append("k > m: no feasible scheme")
    shape_ok = len(inst.values) == inst.n and all(len(row) == inst.m for row in inst.values)
    if not shape_ok:
        errors.append(f"matrix shape: expected {inst.n}x{inst.m} values")
    elif any(not np.isfinite(x) or x < 0 for row in inst.values for x in row):
        errors.append("values must be finite and non-negative")
    if inst.priors is not None:
        pr = inst.priors
        if len(pr) != inst.m:
            errors.append("priors must have length m")
        elif any(not np.isfinite(x) or x < 0 for x in pr):
            errors.append("priors must be non-negative")
        elif sum(pr) <= 0:
            errors.append("priors must have positive sum")
    sv = inst.structured
    if sv is not None:
        if len(sv.p) != inst.n or len(sv.b) != inst.n or len(sv.q) != inst.m:
            errors.append("structured valuation shape mismatch")
        else:
            expanded = sv.expand()
            if np.any(expanded < -TOL):
                errors.append("structured valuation yields negative values")
            if shape_ok and not np.allclose(expanded, np.asarray(inst.values), rtol=0, atol=TOL):
                errors.append("structured valuation does not reproduce values")
    return errors


def require_valid(inst: Instance) -> None:
    errors = validate_instance(inst)
    if errors:
        raise InvalidInputError("invalid instance: " + "; ".join(errors))


def bundle_values(inst: Instance) -> np.ndarray:
    """Prior-weighted value matrix ``V[i, j] = v[i, j] * p[j]``."""
    require_valid(inst)
    v = np.array(inst.values, dtype=float).reshape(inst.n, inst.m)
    if inst.priors is None:
        return v
    return v * np.asarray(inst.priors, dtype=float)[None, :]


def check_partition(scheme: SignalingScheme, m: int) -> None:
    seen = set()
    for b in scheme.bundles:
        if not b:
            raise InvalidInputError("empty bundle")
        for j in b:
            if j < 0 or j >= m or j in seen:
                raise InvalidInputError(f"scheme is not a partition of 0..{m - 1}")
            seen.add(j)
    if len(seen) != m:
        raise InvalidInputError(f"scheme is not a partition of 0..{m - 1}")


def check_k_anonymous(scheme: SignalingScheme, k: int, m: int) -> bool:
    check_partition(scheme, m)
    return all(len(b) >= k for b in scheme.bundles)


def _bidder_sums(V: np.ndarray, scheme: SignalingScheme) -> list[np.ndarray]:
    # sequential accumulation keeps float results independent of numpy's pairwise sum
    out = []
    for b in scheme.bundles:
        acc = np.zeros(V.shape[0])
        for j in b:
            acc += V[:, j]
        out.append(acc)
    return out


def _evaluate(inst: Instance, scheme: SignalingScheme, objective: str) -> Evaluation:
    V = bundle_values(inst)
    check_partition(scheme, inst.m)
    records = []
    total = 0.0
    for idx, sums in enumerate(_bidder_sums(V, scheme)):
        winner = int(np.argmax(sums))
        top = float(sums[winner])
        price = 0.0
        if objective == REVENUE:
            price = float(np.sort(sums)[-2]) if len(sums) > 1 else 0.0
            total += price
        else:
            total += top
        records.append(BundleOutcome(idx, winner, top, price))
    return Evaluation(objective, total, tuple(records))


def evaluate_welfare(inst: Instance, scheme: SignalingScheme) -> Evaluation:
    return _evaluate(inst, scheme, WELFARE)


def evaluate_revenue(inst: Instance, scheme: SignalingScheme) -> Evaluation:
    return _evaluate(inst, scheme, REVENUE)


def evaluate(inst: Instance, scheme: SignalingScheme, objective: str) -> Evaluation:
    if objective not in OBJECTIVES:
        raise InvalidInputError(f"unknown objective {objective!r}")
    return _evaluate(inst, scheme, objective)


def dumps(obj) -> str:
    return json.dumps(obj.to_dict(), indent=2, sort_keys=False) + "\n"
