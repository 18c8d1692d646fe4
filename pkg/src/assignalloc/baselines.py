"""Exact brute-force oracle and the four simple assignment heuristics.

The oracle enumerates canonical set-partitions of threads into at most m
groups (servers are interchangeable, so labeled assignments would repeat each
solution up to m! times) and solves each group's allocation optimally.  It is
meant for small instances only and guards its own size limits.

The heuristics cross {round-robin, random} assignment with {equal, random}
allocation.  Randomized variants take an explicit seed or numpy Generator;
given the same generator state they are bit-reproducible.  Draw order: server
choices are made per thread in thread order, allocation draws happen per
server in ascending server order, threads within a server in thread order.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

import numpy as np

from .allocation import SuperOptimalAllocation, single_server_optimal, super_optimal
from .model import Assignment, Instance, SolveReport
from .solvers import build_report


class SizeLimitExceeded(Exception):
    """Instance too large for brute-force enumeration."""


@dataclass(frozen=True)
class SizeLimits:
    n_max: int = 10
    m_max: int = 3
    c_max: int = 16


@dataclass(frozen=True)
class OracleResult:
    """Exact optimum: assignment, value, and partitions examined."""

    assignment: Assignment
    value: float
    explored: int


def _set_partitions(n: int, max_blocks: int) -> Iterator[list[list[int]]]:
    """Canonical set-partitions of range(n) into at most max_blocks groups.

    Enumerates restricted growth strings: block labels appear in first-use
    order, which visits each unordered partition exactly once.
    """
    labels = [0] * n

    def rec(i: int, used: int) -> Iterator[list[list[int]]]:
        if i == n:
            blocks: list[list[int]] = [[] for _ in range(used)]
            for t, b in enumerate(labels):
                blocks[b].append(t)
            yield blocks
            return
        for b in range(min(used + 1, max_blocks)):
            labels[i] = b
            yield from rec(i + 1, max(used, b + 1))

    yield from rec(0, 0) if n else iter(())


def exact_solve(inst: Instance, limits: SizeLimits = SizeLimits()) -> OracleResult:
    """Exact optimum by canonical partition enumeration.

    Each block is allocated optimally with the single-server solver; block
    solves are memoized since blocks repeat across partitions.  Ties between
    partitions resolve to the first one in enumeration order.
    """
    if inst.n > limits.n_max or inst.servers > limits.m_max or inst.capacity > limits.c_max:
        raise SizeLimitExceeded(
            f"instance (n={inst.n}, m={inst.servers}, C={inst.capacity}) exceeds "
            f"limits (n<={limits.n_max}, m<={limits.m_max}, C<={limits.c_max})"
        )
    cache: dict[tuple[int, ...], tuple[list[int], float]] = {}

    def solve_block(block: list[int]) -> tuple[list[int], float]:
        key = tuple(block)
        if key not in cache:
            fs = [inst.threads[i] for i in block]
            cache[key] = single_server_optimal(fs, inst.capacity)
        return cache[key]

    best_value = -np.inf
    best_servers: list[int] = []
    best_allocs: list[int] = []
    explored = 0
    for blocks in _set_partitions(inst.n, min(inst.servers, inst.n)):
        explored += 1
        servers = [0] * inst.n
        allocs = [0] * inst.n
        value = 0.0
        for b, block in enumerate(blocks):
            block_allocs, block_value = solve_block(block)
            value += block_value
            for t, c in zip(block, block_allocs):
                servers[t] = b + 1
                allocs[t] = c
        if value > best_value:
            best_value = value
            best_servers = servers
            best_allocs = allocs
    return OracleResult(
        assignment=Assignment(tuple(zip(best_servers, best_allocs))),
        value=float(best_value),
        explored=explored,
    )


def as_generator(rng: np.random.Generator | int) -> np.random.Generator:
    if isinstance(rng, np.random.Generator):
        return rng
    return np.random.default_rng(rng)


def _round_robin_servers(n: int, m: int) -> list[int]:
    return [(i % m) + 1 for i in range(n)]


def _random_servers(n: int, m: int, rng: np.random.Generator) -> list[int]:
    return [int(rng.integers(0, m)) + 1 for _ in range(n)]


def _equal_split(inst: Instance, servers: list[int]) -> list[int]:
    # k threads on a server: floor(C/k) each, first C mod k threads get one more.
    allocs = [0] * inst.n
    for j in range(1, inst.servers + 1):
        members = [i for i in range(inst.n) if servers[i] == j]
        k = len(members)
        if k == 0:
            continue
        base, extra = divmod(inst.capacity, k)
        for rank, i in enumerate(members):
            allocs[i] = base + (1 if rank < extra else 0)
    return allocs


def _random_split(
    inst: Instance, servers: list[int], rng: np.random.Generator
) -> list[int]:
    # Sequential uniform fractions of the remaining capacity, floor-rounded;
    # leftover units may go unused.
    allocs = [0] * inst.n
    for j in range(1, inst.servers + 1):
        remaining = inst.capacity
        for i in range(inst.n):
            if servers[i] != j:
                continue
            c = int(remaining * rng.random())
            allocs[i] = c
            remaining -= c
    return allocs


def _heuristic_report(
    inst: Instance,
    servers: list[int],
    allocs: list[int],
    name: str,
    so: SuperOptimalAllocation | None,
) -> SolveReport:
    so = so if so is not None else super_optimal(inst)
    return build_report(inst, so, servers, allocs, tuple(range(inst.n)), name)


def heuristic_uu(
    inst: Instance, so: SuperOptimalAllocation | None = None
) -> SolveReport:
    """Round-robin assignment, equal per-server split."""
    servers = _round_robin_servers(inst.n, inst.servers)
    return _heuristic_report(inst, servers, _equal_split(inst, servers), "uu", so)


def heuristic_ur(
    inst: Instance,
    rng: np.random.Generator | int,
    so: SuperOptimalAllocation | None = None,
) -> SolveReport:
    """Round-robin assignment, sequential random allocation per server."""
    rng = as_generator(rng)
    servers = _round_robin_servers(inst.n, inst.servers)
    return _heuristic_report(inst, servers, _random_split(inst, servers, rng), "ur", so)


def heuristic_ru(
    inst: Instance,
    rng: np.random.Generator | int,
    so: SuperOptimalAllocation | None = None,
) -> SolveReport:
    """Uniformly random server per thread, equal per-server split."""
    rng = as_generator(rng)
    servers = _random_servers(inst.n, inst.servers, rng)
    return _heuristic_report(inst, servers, _equal_split(inst, servers), "ru", so)


def heuristic_rr(
    inst: Instance,
    rng: np.random.Generator | int,
    so: SuperOptimalAllocation | None = None,
) -> SolveReport:
    """Uniformly random server per thread, random allocation per server."""
    rng = as_generator(rng)
    servers = _random_servers(inst.n, inst.servers, rng)
    return _heuristic_report(inst, servers, _random_split(inst, servers, rng), "rr", so)
