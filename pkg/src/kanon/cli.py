"""Command line interface: ``kanon gen|solve|eval|bench``.

Exit codes: 0 success, 1 usage error, 2 infeasible or oracle scale guard,
3 I/O failure.
"""
from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

from . import approx, exact, gen, special
from .bench import RUNNERS, SUITES, RunRecord, summarize, write_csv
from .model import (
    OBJECTIVES,
    REVENUE,
    WELFARE,
    InfeasibleError,
    Instance,
    InvalidInputError,
    ScaleError,
    SignalingScheme,
    check_k_anonymous,
    evaluate,
)

EXIT_USAGE, EXIT_INFEASIBLE, EXIT_IO = 1, 2, 3

ALGOS = ("exact", "approx", "constant-signals", "dp", "revenue-transfer")
WELFARE_ONLY = {"approx", "constant-signals", "dp"}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _read_json(path: str) -> dict:
    try:
        return json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise OSError(f"{path}: not valid JSON ({exc})") from exc


def _emit(doc: dict, out: str | None) -> None:
    text = json.dumps(doc, indent=2) + "\n"
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _parse_values(text: str) -> list[list[float]]:
    return [[float(x) for x in row.split(",")] for row in text.split(";") if row.strip()]


def cmd_gen(args) -> int:
    if args.kind == "random":
        inst = gen.gen_random(args.n, args.m, args.k, args.seed, (args.lo, args.hi))
    elif args.kind == "random-structured":
        inst = gen.gen_random_structured(args.n, args.m, args.k, args.seed, (args.lo, args.hi))
    elif args.kind == "gap":
        inst = gen.gen_gap(gen.GapParams(args.k, args.epsilon))
    elif args.kind == "welfare-reduction":
        if args.values is None or args.s is None:
            raise UsageError("welfare-reduction needs --values and --s")
        values = _parse_values(args.values)
        inst = gen.gen_welfare_reduction(gen.CardinalityInstance(len(values[0]), args.s, values))
    else:
        if args.xs is None:
            raise UsageError("revenue-reduction needs --xs")
        inst = gen.gen_revenue_reduction(gen.SspsParams([int(x) for x in args.xs.split(",")]))
    _emit(inst.to_dict(), args.output)
    return 0


def _check_compatible(algo: str, objective: str) -> None:
    if algo in WELFARE_ONLY and objective != WELFARE:
        raise UsageError(f"--algo {algo} supports only the welfare objective")
    if algo == "revenue-transfer" and objective != REVENUE:
        raise UsageError("--algo revenue-transfer supports only the revenue objective")


def cmd_solve(args) -> int:
    _check_compatible(args.algo, args.objective)
    inst = Instance.from_dict(_read_json(args.instance))
    limit = args.limit_m
    t0 = time.perf_counter()
    if args.algo == "exact":
        scheme, ev = exact.solve_exact(inst, exact.ExactConfig(args.objective, args.max_bundles, limit))
    elif args.algo == "approx":
        scheme, ev = approx.approx_welfare(inst, args.method, limit)
    elif args.algo == "constant-signals":
        scheme, ev = special.solve_constant_signals(inst, args.max_signals)
    elif args.algo == "dp":
        if inst.structured is None:
            raise UsageError("--algo dp needs an instance with a structured block")
        scheme, ev = special.solve_structured_dp(inst)
    else:
        cfg = approx.RevenueTransferConfig(alpha=args.alpha, beta=args.beta)
        scheme, ev = approx.transfer_revenue(inst, cfg)
    millis = (time.perf_counter() - t0) * 1000

    oracle = None
    if args.oracle:
        cfg = exact.ExactConfig(args.objective, args.max_signals if args.algo == "constant-signals" else None, limit)
        oracle = exact.solve_exact(inst, cfg)[1].total
    run = RunRecord.for_instance(inst, args.algo, args.objective, ev.total, oracle, millis)
    _emit({"scheme": scheme.to_dict(), "evaluation": ev.to_dict(), "run": run.to_dict()}, args.output)
    summary = f"{args.algo} {args.objective}: {ev.total:.6g} over {len(scheme.bundles)} bundles"
    if oracle is not None:
        summary += f" (oracle {oracle:.6g}, ratio {run.ratio:.4f})"
    print(summary, file=sys.stderr if args.output is None else sys.stdout)
    return 0


def cmd_eval(args) -> int:
    inst = Instance.from_dict(_read_json(args.instance))
    scheme = SignalingScheme.from_dict(_read_json(args.scheme))
    ev = evaluate(inst, scheme, args.objective)
    doc = ev.to_dict()
    doc["k_anonymous"] = check_k_anonymous(scheme, inst.k, inst.m)
    _emit(doc, args.output)
    return 0


def cmd_bench(args) -> int:
    rows = RUNNERS[args.suite]()
    write_csv(rows, args.output)
    print(summarize(args.suite, rows))
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="kanon", description="K-anonymous signaling scheme solvers")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    g = sub.add_parser("gen", help="generate an instance file")
    g.add_argument("kind", choices=["random", "random-structured", "gap", "welfare-reduction", "revenue-reduction"])
    g.add_argument("--n", type=int, default=3)
    g.add_argument("--m", type=int, default=6)
    g.add_argument("--k", type=int, default=2)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--lo", type=int, default=0)
    g.add_argument("--hi", type=int, default=9)
    g.add_argument("--epsilon", type=float, default=0.2)
    g.add_argument("--s", type=int, help="signal cap of the source cardinality instance")
    g.add_argument("--values", help="source values, rows ';'-separated, entries ','-separated")
    g.add_argument("--xs", help="comma-separated positive integers")
    g.add_argument("-o", "--output")
    g.set_defaults(func=cmd_gen)

    s = sub.add_parser("solve", help="solve an instance file")
    s.add_argument("instance")
    s.add_argument("--algo", choices=ALGOS, default="exact")
    s.add_argument("--objective", choices=OBJECTIVES, default=WELFARE)
    s.add_argument("--method", choices=approx.CARDINALITY_METHODS, default="exact",
                   help="cardinality subsolver for --algo approx")
    s.add_argument("--max-signals", type=int, default=2, help="signal count c for constant-signals")
    s.add_argument("--max-bundles", type=int, help="bundle cap for --algo exact")
    s.add_argument("--alpha", type=float, default=1 / 3)
    s.add_argument("--beta", type=float, default=1 / 3)
    s.add_argument("--limit-m", type=int, help="oracle scale guard (default $KANON_LIMIT_M or 12)")
    s.add_argument("--oracle", action="store_true", help="also run the brute-force oracle")
    s.add_argument("-o", "--output")
    s.set_defaults(func=cmd_solve)

    e = sub.add_parser("eval", help="evaluate a scheme file on an instance file")
    e.add_argument("instance")
    e.add_argument("scheme")
    e.add_argument("--objective", choices=OBJECTIVES, default=WELFARE)
    e.add_argument("-o", "--output")
    e.set_defaults(func=cmd_eval)

    b = sub.add_parser("bench", help="run a benchmark sweep and write CSV")
    b.add_argument("suite", choices=SUITES)
    b.add_argument("-o", "--output", default="bench.csv")
    b.set_defaults(func=cmd_bench)
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, InvalidInputError) as exc:
        print(f"kanon: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (InfeasibleError, ScaleError) as exc:
        print(f"kanon: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except OSError as exc:
        print(f"kanon: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
