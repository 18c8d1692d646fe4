"""Command-line front end: gen / solve / bench / reduce.

Exit codes: 0 success, 1 usage error, 2 validation error, 3 size-limit error.
All outputs are machine-readable (JSON instances, CSV results); figures are
opt-in PNG files.  ``AA_SEED`` provides a default master seed.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from .allocation import super_optimal
from .baselines import (
    SizeLimitExceeded,
    SizeLimits,
    exact_solve,
    heuristic_rr,
    heuristic_ru,
    heuristic_ur,
    heuristic_uu,
)
from .bench import (
    BenchConfig,
    run_sweep,
    write_aggregate_csv,
    write_results_csv,
)
from .generators import DistSpec, OddSumError, gen_instance, from_partition, substream
from .model import (
    InstanceError,
    load_instance,
    save_instance,
    write_assignment_csv,
)
from .solvers import algorithm1, algorithm2, solve_report_diagnostics

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_VALIDATION = 2
EXIT_SIZE = 3

_SEEDED_ALGS = frozenset({"ur", "ru", "rr"})


class _Parser(argparse.ArgumentParser):
    """argparse with usage failures mapped to exit code 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _even_int(text: str) -> int:
    value = int(text)
    if value < 2 or value % 2:
        raise argparse.ArgumentTypeError(f"capacity must be a positive even integer, got {text}")
    return value


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return value


def _default_seed() -> int | None:
    raw = os.environ.get("AA_SEED")
    return int(raw) if raw else None


def _add_dist_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument(
        "--dist",
        required=True,
        choices=("uniform", "normal", "powerlaw", "discrete", "power"),
        help="anchor-value distribution (power = deterministic x**beta curves)",
    )
    p.add_argument("--lo", type=float, default=0.0, help="uniform lower bound")
    p.add_argument("--hi", type=float, default=1.0, help="uniform upper bound")
    p.add_argument("--mean", type=float, default=1.0, help="normal mean")
    p.add_argument("--sd", type=float, default=1.0, help="normal standard deviation")
    p.add_argument("--alpha", type=float, default=2.0, help="power-law exponent (> 1)")
    p.add_argument("--xmin", type=float, default=1.0, help="power-law support lower end")
    p.add_argument("--xmax", type=float, default=1000.0, help="power-law support upper end")
    p.add_argument("--ell", type=float, default=1.0, help="discrete low value")
    p.add_argument("--theta", type=float, default=5.0, help="discrete high/low value ratio")
    p.add_argument("--gamma", type=float, default=0.85, help="discrete probability of the low value")
    p.add_argument("--beta-exp", type=float, default=0.5, help="exponent for --dist power")


def _dist_from_args(args: argparse.Namespace) -> DistSpec:
    match args.dist:
        case "uniform":
            return DistSpec.uniform(args.lo, args.hi)
        case "normal":
            return DistSpec.normal(args.mean, args.sd)
        case "powerlaw":
            return DistSpec.powerlaw(args.alpha, args.xmin, args.xmax)
        case "discrete":
            return DistSpec.discrete(args.ell, args.theta, args.gamma)
        case _:
            return DistSpec.power(args.beta_exp)


def _parse_beta_values(text: str) -> tuple[int, ...]:
    if ":" in text:
        lo, hi = text.split(":", 1)
        lo_i, hi_i = int(lo), int(hi)
        if lo_i < 1 or hi_i < lo_i:
            raise ValueError(f"bad beta range {text!r}")
        return tuple(range(lo_i, hi_i + 1))
    values = tuple(int(b) for b in text.split(","))
    if not values or any(b < 1 for b in values):
        raise ValueError(f"bad beta list {text!r}")
    return values


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="assignalloc", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p_gen = sub.add_parser("gen", help="generate a random instance file")
    _add_dist_flags(p_gen)
    p_gen.add_argument("--m", type=_positive_int, required=True, help="number of servers")
    p_gen.add_argument("--beta", type=_positive_int, required=True, help="threads per server")
    p_gen.add_argument("--capacity", type=_even_int, required=True, help="units per server (even)")
    p_gen.add_argument("--seed", type=int, default=_default_seed())
    p_gen.add_argument("--out", required=True, help="instance file to write")

    p_solve = sub.add_parser("solve", help="solve an instance file")
    p_solve.add_argument("instance", help="instance file (JSON)")
    p_solve.add_argument(
        "--alg",
        required=True,
        choices=("alg1", "alg2", "uu", "ur", "ru", "rr", "oracle"),
    )
    p_solve.add_argument("--seed", type=int, default=_default_seed())
    p_solve.add_argument("--out", help="assignment CSV to write")
    p_solve.add_argument("--figures", action="store_true", help="render the solution figure")

    p_bench = sub.add_parser("bench", help="run a seeded trial sweep")
    _add_dist_flags(p_bench)
    p_bench.add_argument("--m", type=_positive_int, required=True)
    p_bench.add_argument("--capacity", type=_even_int, required=True)
    p_bench.add_argument("--beta", required=True, help="range lo:hi or comma list")
    p_bench.add_argument("--trials", type=_positive_int, required=True)
    p_bench.add_argument("--seed", type=int, default=_default_seed())
    p_bench.add_argument(
        "--algs", default="alg1,alg2,uu,ur,ru,rr", help="comma list of algorithms to run"
    )
    p_bench.add_argument("--out-dir", default=".", help="directory for results/aggregate CSVs")
    p_bench.add_argument("--jobs", type=_positive_int, default=1, help="parallel trial workers")
    p_bench.add_argument("--figures", action="store_true", help="render ratio figures")

    p_reduce = sub.add_parser("reduce", help="build the two-server partition reduction")
    p_reduce.add_argument("--partition", required=True, help="comma list of positive integers")
    p_reduce.add_argument("--out", help="instance file to write")
    p_reduce.add_argument("--solve", action="store_true", help="run the exact oracle")

    return parser


def _cmd_gen(parser: argparse.ArgumentParser, args: argparse.Namespace) -> int:
    dist = _dist_from_args(args)
    if dist.kind != "power_beta" and args.seed is None:
        parser.error("--seed is required (or set AA_SEED)")
    seed = args.seed if args.seed is not None else 0
    if seed < 0:
        parser.error("--seed must be nonnegative")
    inst = gen_instance(args.m, args.beta, args.capacity, dist, seed)
    save_instance(inst, args.out)
    print(f"n={inst.n} m={inst.servers} C={inst.capacity} dist={dist.kind} -> {args.out}")
    return EXIT_OK


def _print_report(report, diagnostics=None) -> None:
    print(f"algorithm: {report.algorithm}")
    print(f"F: {report.total_utility!r}")
    print(f"F_hat: {report.super_optimal_value!r}")
    print(f"ratio_to_so: {report.ratio_to_super_optimal:.6f}")
    if diagnostics is not None:
        print(f"alpha_bound_ok: {report.alpha_bound_ok}")
        print(f"unfull_threads: {len(report.unfull_set)}")
        for name, passed in diagnostics.checks:
            print(f"check {name}: {'ok' if passed else 'FAILED'}")


def _cmd_solve(parser: argparse.ArgumentParser, args: argparse.Namespace) -> int:
    inst = load_instance(args.instance)
    if args.alg in _SEEDED_ALGS and args.seed is None:
        parser.error(f"--alg {args.alg} requires --seed (or AA_SEED)")
    so = super_optimal(inst)

    if args.alg == "oracle":
        result = exact_solve(inst)
        assignment = result.assignment
        print("algorithm: oracle")
        print(f"F_star: {result.value!r}")
        print(f"F_hat: {so.value!r}")
        ratio = result.value / so.value if so.value > 0 else 1.0
        print(f"ratio_to_so: {ratio:.6f}")
        print(f"explored: {result.explored}")
        report = None
    else:
        if args.alg == "alg1":
            report = algorithm1(inst, so)
        elif args.alg == "alg2":
            report = algorithm2(inst, so)
        elif args.alg == "uu":
            report = heuristic_uu(inst, so=so)
        else:
            rng = substream(args.seed, {"ur": 1, "ru": 2, "rr": 3}[args.alg])
            fn = {"ur": heuristic_ur, "ru": heuristic_ru, "rr": heuristic_rr}[args.alg]
            report = fn(inst, rng, so=so)
        diagnostics = (
            solve_report_diagnostics(report, so) if args.alg in ("alg1", "alg2") else None
        )
        _print_report(report, diagnostics)
        assignment = report.assignment

    if args.out:
        write_assignment_csv(inst, assignment, args.out)
        print(f"assignment -> {args.out}")
    if args.figures:
        from .figures import render_solution_figure
        from .solvers import build_report

        if report is None:
            report = build_report(
                inst, so, list(assignment.servers_of), list(assignment.allocations),
                tuple(range(inst.n)), "oracle",
            )
        stem = Path(args.out).with_suffix(".png") if args.out else (
            Path(args.instance).with_suffix("") .name + f"_{args.alg}.png"
        )
        path = render_solution_figure(inst, report, stem)
        print(f"figure -> {path}")
    return EXIT_OK


def _cmd_bench(parser: argparse.ArgumentParser, args: argparse.Namespace) -> int:
    if args.seed is None:
        parser.error("--seed is required (or set AA_SEED)")
    try:
        betas = _parse_beta_values(args.beta)
    except ValueError as exc:
        parser.error(str(exc))
    algs = tuple(a.strip() for a in args.algs.split(",") if a.strip())
    cfg = BenchConfig(
        m=args.m,
        capacity=args.capacity,
        beta_loads=betas,
        dist=_dist_from_args(args),
        trials=args.trials,
        seed=args.seed,
        algorithms=algs,
        jobs=args.jobs,
    )
    result = run_sweep(cfg)
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    results_path = out_dir / "results.csv"
    aggregate_path = out_dir / "aggregate.csv"
    write_results_csv(result.records, results_path)
    write_aggregate_csv(result.aggregates, aggregate_path)
    print(f"results -> {results_path}")
    print(f"aggregate -> {aggregate_path}")
    if args.figures:
        from .figures import render_ratio_figures

        for path in render_ratio_figures(result.aggregates, out_dir):
            print(f"figure -> {path}")
    if result.violations:
        for v in result.violations:
            print(f"violation: {v}", file=sys.stderr)
        return EXIT_VALIDATION
    return EXIT_OK


def _cmd_reduce(parser: argparse.ArgumentParser, args: argparse.Namespace) -> int:
    try:
        numbers = [int(x) for x in args.partition.split(",") if x.strip()]
    except ValueError:
        parser.error(f"--partition must be a comma list of integers, got {args.partition!r}")
    inst, target = from_partition(numbers)
    print(f"n={inst.n} m={inst.servers} C={inst.capacity} target={target}")
    if args.out:
        save_instance(inst, args.out)
        print(f"instance -> {args.out}")
    if args.solve:
        limits = SizeLimits(n_max=16, m_max=2, c_max=10**6)
        result = exact_solve(inst, limits)
        print(f"F_star: {result.value!r}")
        if result.value >= target - 1e-9:
            print("PARTITION-EXISTS")
        else:
            print("NO-PARTITION")
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "gen":
            return _cmd_gen(parser, args)
        if args.command == "solve":
            return _cmd_solve(parser, args)
        if args.command == "bench":
            return _cmd_bench(parser, args)
        return _cmd_reduce(parser, args)
    except SizeLimitExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SIZE
    except (InstanceError, OddSumError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION


if __name__ == "__main__":
    raise SystemExit(main())
