"""Benchmark sweeps comparing algorithms against the brute-force oracle."""
from __future__ import annotations

import csv
import itertools
import json
import time
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Callable, Iterator

from .approx import approx_welfare, transfer_revenue
from .exact import ExactConfig, default_limit_m, solve_exact
from .gen import GapParams, SspsParams, gap_schemes, gen_gap, gen_random, verify_reduction_iff
from .model import REVENUE, TOL, WELFARE, Instance, SignalingScheme, evaluate_welfare

CSV_COLUMNS = ("generator", "params", "n", "m", "k", "algo", "objective", "value", "oracle", "ratio", "millis")
SUITES = ("ratio-welfare", "ratio-revenue", "gap-family", "reduction-iff")


@dataclass
class RunRecord:
    generator: str
    params: str
    n: int
    m: int
    k: int
    algo: str
    objective: str
    value: float
    oracle: float | None = None
    ratio: float | None = None
    millis: float = 0.0

    @classmethod
    def for_instance(cls, inst: Instance, algo: str, objective: str, value: float,
                     oracle: float | None = None, millis: float = 0.0, extra: dict | None = None) -> "RunRecord":
        meta = inst.metadata or {}
        params = dict(meta.get("params", {}))
        params.update(extra or {})
        return cls(meta.get("generator", "file"), json.dumps(params, sort_keys=True), inst.n, inst.m, inst.k,
                   algo, objective, value, oracle, ratio(oracle, value) if oracle is not None else None, millis)

    def to_dict(self) -> dict:
        return asdict(self)


def ratio(oracle: float, value: float) -> float:
    """oracle / value, with 0/0 read as 1."""
    if value <= TOL:
        return 1.0 if oracle <= TOL else float("inf")
    return oracle / value


def _timed(fn: Callable, *args):
    t0 = time.perf_counter()
    out = fn(*args)
    return out, (time.perf_counter() - t0) * 1000


def welfare_ratio_cases(count: int = 200) -> Iterator[Instance]:
    """Seeded instances with n <= 5, m <= 8, k in {2, 3}."""
    for seed in range(count):
        n, m, k = 2 + seed % 4, 4 + seed % 5, 2 + (seed // 5) % 2
        yield gen_random(n, m, k, seed=seed)


def revenue_ratio_cases(count: int = 200) -> Iterator[Instance]:
    """Seeded instances with n <= 5, m <= 8, k = 2."""
    for seed in range(count):
        n, m = 2 + seed % 4, 4 + seed % 5
        yield gen_random(n, m, 2, seed=1000 + seed)


def iff_cases() -> Iterator[SspsParams]:
    """Every integer vector of length 2 or 4 with entries in 1..4."""
    for length in (2, 4):
        for xs in itertools.product(range(1, 5), repeat=length):
            yield SspsParams(xs)


def run_ratio_welfare() -> list[RunRecord]:
    rows = []
    for inst in welfare_ratio_cases():
        (_, ev), ms = _timed(approx_welfare, inst)
        _, opt = solve_exact(inst)
        rows.append(RunRecord.for_instance(inst, "approx", WELFARE, ev.total, opt.total, ms))
    return rows


def run_ratio_revenue() -> list[RunRecord]:
    rows = []
    for inst in revenue_ratio_cases():
        (_, ev), ms = _timed(transfer_revenue, inst)
        _, opt = solve_exact(inst, ExactConfig(objective=REVENUE))
        rows.append(RunRecord.for_instance(inst, "revenue-transfer", REVENUE, ev.total, opt.total, ms))
    return rows


def gap_family_rows(ks=(2, 3, 4), epsilon: float = 0.2) -> list[RunRecord]:
    """Optimum vs repaired approximation on the gap family.

    The optimum comes from the oracle when the instance is small enough,
    otherwise from evaluating the known optimal scheme.  The approximation
    uses the exact cardinality subsolver while it fits under the oracle
    limit, the greedy one beyond.
    """
    rows = []
    limit = default_limit_m()
    for k in ks:
        inst = gen_gap(GapParams(k, epsilon))
        if inst.m <= limit:
            (_, opt), ms = _timed(solve_exact, inst)
            opt_algo = "exact"
        else:
            opt, ms = _timed(evaluate_welfare, inst, SignalingScheme(gap_schemes(k)))
            opt_algo = "named-optimum"
        rows.append(RunRecord.for_instance(inst, opt_algo, WELFARE, opt.total, millis=ms))
        method = "exact" if inst.m <= limit else "greedy"
        (_, ev), ms = _timed(approx_welfare, inst, method)
        rows.append(RunRecord.for_instance(inst, f"approx-{method}", WELFARE, ev.total, opt.total, ms,
                                           extra={"bound_k_plus_1": k + 1}))
    return rows


def run_reduction_iff() -> list[RunRecord]:
    rows = []
    for params in iff_cases():
        report, ms = _timed(verify_reduction_iff, params)
        extra = {"xs": list(params.xs), "ssps_solvable": report.ssps_solvable, "iff_holds": report.holds}
        rows.append(RunRecord("revenue-reduction", json.dumps(extra, sort_keys=True), 3, 2 * params.k, params.k,
                              "exact", REVENUE, report.revenue, float(report.w),
                              ratio(report.w, report.revenue), ms))
    return rows


RUNNERS: dict[str, Callable[[], list[RunRecord]]] = {
    "ratio-welfare": run_ratio_welfare,
    "ratio-revenue": run_ratio_revenue,
    "gap-family": gap_family_rows,
    "reduction-iff": run_reduction_iff,
}


def write_csv(rows: list[RunRecord], path: Path | str) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(CSV_COLUMNS)
        for r in rows:
            w.writerow(["" if v is None else v for v in (getattr(r, c) for c in CSV_COLUMNS)])


def summarize(suite: str, rows: list[RunRecord]) -> str:
    lines = [f"suite {suite}: {len(rows)} runs"]
    ratios = [r.ratio for r in rows if r.ratio is not None]
    if ratios:
        lines.append(f"ratio oracle/value: min {min(ratios):.4f}  mean {sum(ratios) / len(ratios):.4f}  "
                     f"max {max(ratios):.4f}")
        lines.append(f"worst value/oracle: {1 / max(ratios):.4f}")
    if suite == "gap-family":
        lines.append(f"{'K':>3} {'OPT':>10} {'ALG':>10} {'K+1':>5}")
        for opt, alg in zip(rows[::2], rows[1::2]):
            lines.append(f"{opt.k:>3} {opt.value:>10.4f} {alg.value:>10.4f} {opt.k + 1:>5}")
    if suite == "reduction-iff":
        held = sum(json.loads(r.params)["iff_holds"] for r in rows)
        lines.append(f"iff holds: {held}/{len(rows)}")
    return "\n".join(lines)


def write_counterexample(path: Path | str, inst: Instance, scheme: SignalingScheme, value: float,
                         oracle: float, note: str) -> None:
    doc = {"instance": inst.to_dict(), "scheme": scheme.to_dict(), "value": value, "oracle": oracle, "note": note}
    Path(path).write_text(json.dumps(doc, indent=2) + "\n", encoding="utf-8")
