"""Seeded experiment harness: trial sweeps, ratio statistics, CSV emission.

Every (cell, trial) pair gets its own seed derived from the master seed via
``SeedSequence([master, beta, trial])``; that integer appears in the results
CSV and feeds both instance generation and the heuristics' draw streams
(``[trial_seed, 1 + k]`` for the k-th randomized heuristic).  Records are
merged in (cell, trial) order, so output is identical whether trials run
serially or across worker processes.
"""

from __future__ import annotations

import csv
import math
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Sequence

import numpy as np

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
from .generators import DistSpec, gen_instance, substream
from .model import ALPHA, Instance, UtilityFunction, verify_assignment
from .solvers import algorithm1, algorithm2, solve_report_diagnostics

ALG_ORDER = ("alg1", "alg2", "uu", "ur", "ru", "rr", "oracle")
_HEURISTIC_STREAM = {"ur": 1, "ru": 2, "rr": 3}

RESULTS_HEADER = ("dist", "beta", "trial", "seed", "algorithm", "utility", "so_value", "ratio_to_so")
AGGREGATE_HEADER = ("dist", "beta", "algorithm", "mean_ratio_to_so", "stderr", "mean_alg2_over_this")


@dataclass(frozen=True)
class BenchConfig:
    """One sweep: a beta grid over a fixed (m, C, distribution) cell family."""

    m: int
    capacity: int
    beta_loads: tuple[int, ...]
    dist: DistSpec
    trials: int
    seed: int
    algorithms: tuple[str, ...] = ("alg1", "alg2", "uu", "ur", "ru", "rr")
    fixed_instance: Instance | None = None
    oracle_limits: SizeLimits = field(default_factory=SizeLimits)
    jobs: int = 1

    def __post_init__(self):
        object.__setattr__(self, "beta_loads", tuple(int(b) for b in self.beta_loads))
        object.__setattr__(self, "algorithms", tuple(self.algorithms))
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if not self.beta_loads:
            raise ValueError("need at least one beta value")
        unknown = set(self.algorithms) - set(ALG_ORDER)
        if unknown:
            raise ValueError(f"unknown algorithms: {sorted(unknown)}")
        if "oracle" in self.algorithms:
            self._check_oracle_sizes()

    def _check_oracle_sizes(self) -> None:
        lim = self.oracle_limits
        if self.fixed_instance is not None:
            inst = self.fixed_instance
            cells = [(inst.n, inst.servers, inst.capacity)]
        else:
            cells = [(b * self.m, self.m, self.capacity) for b in self.beta_loads]
        for n, m, c in cells:
            if n > lim.n_max or m > lim.m_max or c > lim.c_max:
                raise SizeLimitExceeded(
                    f"oracle requested on cell (n={n}, m={m}, C={c}) beyond "
                    f"limits (n<={lim.n_max}, m<={lim.m_max}, C<={lim.c_max})"
                )


@dataclass(frozen=True)
class TrialRecord:
    dist: str
    beta: int
    trial: int
    seed: int
    algorithm: str
    utility: float
    so_value: float
    ratio_to_so: float


@dataclass(frozen=True)
class AggregateRecord:
    dist: str
    beta: int
    algorithm: str
    mean_ratio_to_so: float
    stderr: float
    mean_alg2_over_this: float | None


def trial_seed(master: int, beta: int, trial: int) -> int:
    seq = np.random.SeedSequence([int(master), int(beta), int(trial)])
    return int(seq.generate_state(1, np.uint64)[0])


def _ratio(utility: float, so_value: float) -> float:
    return utility / so_value if so_value > 0 else 1.0


def _run_trial(cfg: BenchConfig, beta: int, trial: int) -> tuple[list[TrialRecord], list[str]]:
    seed = trial_seed(cfg.seed, beta, trial)
    if cfg.fixed_instance is not None:
        inst = cfg.fixed_instance
    else:
        inst = gen_instance(cfg.m, beta, cfg.capacity, cfg.dist, seed)
    so = super_optimal(inst)
    records: list[TrialRecord] = []
    violations: list[str] = []
    where = f"dist={cfg.dist.kind} beta={beta} trial={trial}"

    for alg in [a for a in ALG_ORDER if a in cfg.algorithms]:
        if alg == "alg1":
            report = algorithm1(inst, so)
        elif alg == "alg2":
            report = algorithm2(inst, so)
        elif alg == "uu":
            report = heuristic_uu(inst, so=so)
        elif alg == "ur":
            report = heuristic_ur(inst, substream(seed, _HEURISTIC_STREAM[alg]), so=so)
        elif alg == "ru":
            report = heuristic_ru(inst, substream(seed, _HEURISTIC_STREAM[alg]), so=so)
        elif alg == "rr":
            report = heuristic_rr(inst, substream(seed, _HEURISTIC_STREAM[alg]), so=so)
        else:
            oracle = exact_solve(inst, cfg.oracle_limits)
            verify_assignment(inst, oracle.assignment)
            utility = oracle.value
            ratio = _ratio(utility, so.value)
            if ratio > 1 + 1e-9:
                violations.append(f"{where} oracle: ratio {ratio} above the pooled bound")
            records.append(
                TrialRecord(cfg.dist.kind, beta, trial, seed, alg, utility, so.value, ratio)
            )
            continue

        verify_assignment(inst, report.assignment)
        ratio = _ratio(report.total_utility, so.value)
        if ratio > 1 + 1e-9:
            violations.append(f"{where} {alg}: ratio {ratio} above the pooled bound")
        if alg in ("alg1", "alg2"):
            if ratio < ALPHA - 1e-9:
                violations.append(f"{where} {alg}: ratio {ratio} below alpha guarantee")
            diag = solve_report_diagnostics(report, so)
            for name in diag.failed():
                violations.append(f"{where} {alg}: diagnostic {name} failed")
        records.append(
            TrialRecord(
                cfg.dist.kind, beta, trial, seed, alg, report.total_utility, so.value, ratio
            )
        )
    return records, violations


def _run_trial_star(args: tuple[BenchConfig, int, int]):
    return _run_trial(*args)


@dataclass(frozen=True)
class SweepResult:
    records: tuple[TrialRecord, ...]
    aggregates: tuple[AggregateRecord, ...]
    violations: tuple[str, ...]


def run_sweep(cfg: BenchConfig) -> SweepResult:
    """Run every (beta, trial) cell and aggregate ratio statistics.

    With ``jobs > 1`` trials execute in worker processes; results are merged
    in task order so the output never depends on scheduling.
    """
    tasks = [(cfg, beta, trial) for beta in cfg.beta_loads for trial in range(cfg.trials)]
    if cfg.jobs > 1:
        serial_cfg = replace(cfg, jobs=1)
        with ProcessPoolExecutor(max_workers=cfg.jobs) as pool:
            outcomes = list(
                pool.map(
                    _run_trial_star,
                    [(serial_cfg, b, t) for _, b, t in tasks],
                    chunksize=max(1, len(tasks) // (cfg.jobs * 4)),
                )
            )
    else:
        outcomes = [_run_trial(*task) for task in tasks]

    records: list[TrialRecord] = []
    violations: list[str] = []
    for recs, viols in outcomes:
        records.extend(recs)
        violations.extend(viols)

    aggregates = _aggregate(cfg, records)
    return SweepResult(tuple(records), tuple(aggregates), tuple(violations))


def _aggregate(cfg: BenchConfig, records: Sequence[TrialRecord]) -> list[AggregateRecord]:
    algs = [a for a in ALG_ORDER if a in cfg.algorithms]
    alg2_utility: dict[tuple[int, int], float] = {
        (r.beta, r.trial): r.utility for r in records if r.algorithm == "alg2"
    }
    out: list[AggregateRecord] = []
    for beta in cfg.beta_loads:
        for alg in algs:
            cell = [r for r in records if r.beta == beta and r.algorithm == alg]
            ratios = np.array([r.ratio_to_so for r in cell], dtype=np.float64)
            mean = float(ratios.mean())
            stderr = (
                float(ratios.std(ddof=1) / math.sqrt(len(ratios)))
                if len(ratios) > 1
                else 0.0
            )
            rel: float | None = None
            if alg2_utility:
                quotients = [
                    alg2_utility[(r.beta, r.trial)] / r.utility
                    for r in cell
                    if r.utility > 0
                ]
                rel = float(np.mean(quotients)) if quotients else None
            out.append(AggregateRecord(cfg.dist.kind, beta, alg, mean, stderr, rel))
    return out


def write_results_csv(records: Sequence[TrialRecord], path: str | os.PathLike) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(RESULTS_HEADER)
        for r in records:
            writer.writerow(
                [r.dist, r.beta, r.trial, r.seed, r.algorithm,
                 repr(r.utility), repr(r.so_value), repr(r.ratio_to_so)]
            )


def write_aggregate_csv(aggregates: Sequence[AggregateRecord], path: str | os.PathLike) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(AGGREGATE_HEADER)
        for a in aggregates:
            rel = "" if a.mean_alg2_over_this is None else repr(a.mean_alg2_over_this)
            writer.writerow(
                [a.dist, a.beta, a.algorithm, repr(a.mean_ratio_to_so), repr(a.stderr), rel]
            )


def synthetic_instance(n: int, m: int, c: int, k: int, seed: int = 0) -> Instance:
    """Deterministic instance with k-breakpoint concave curves, for timing."""
    if k < 2:
        raise ValueError("need at least two breakpoints per curve")
    rng = substream(seed, n, m, c, k)
    threads = []
    for _ in range(n):
        interior = k - 2
        if interior > 0:
            xs = np.sort(rng.choice(np.arange(1, c), size=interior, replace=False))
            xs = np.concatenate([[0], xs, [c]])
        else:
            xs = np.array([0, c])
        slopes = np.sort(rng.random(k - 1))[::-1]
        ys = np.concatenate([[0.0], np.cumsum(slopes * np.diff(xs))])
        threads.append(UtilityFunction(tuple(zip(xs.tolist(), ys.tolist()))))
    return Instance(servers=m, capacity=c, threads=tuple(threads))


def timing_probe(n: int, m: int, c: int, k: int, seed: int = 0) -> float:
    """Wall time of one end-to-end fast solve (pooled allocation + heap pass)."""
    inst = synthetic_instance(n, m, c, k, seed)
    start = time.perf_counter()
    so = super_optimal(inst)
    algorithm2(inst, so)
    return time.perf_counter() - start
