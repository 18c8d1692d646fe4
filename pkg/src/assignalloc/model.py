"""Core domain types, validation, and on-disk formats.

An instance consists of ``m`` homogeneous servers, each holding ``C`` integer
resource units, and ``n`` threads.  Every thread carries a nondecreasing
concave piecewise-linear utility curve over the integer grid ``[0, C]``.  A
solution assigns each thread to one server and gives it an integer allocation
such that no server hands out more than ``C`` units.
"""

from __future__ import annotations

import csv
import json
import math
import os
from dataclasses import dataclass, field
from functools import cached_property
from typing import Any, Sequence

import numpy as np

# Absolute tolerance for slope comparisons in monotonicity/concavity checks.
# Generated curves come from floating-point interpolation, so exact checks
# would reject valid inputs.
SLOPE_TOL = 1e-9

# Guaranteed worst-case ratio of the two approximation algorithms.
ALPHA = 2.0 * (math.sqrt(2.0) - 1.0)


class InstanceError(ValueError):
    """Base class for instance validation failures."""


class DomainError(InstanceError):
    """Breakpoints do not span exactly [0, C] with strictly increasing x."""


class MonotonicityError(InstanceError):
    """Utility values are negative or decreasing."""


class ConcavityError(InstanceError):
    """Segment slopes increase left to right beyond tolerance."""


class CapacityExceeded(Exception):
    """A server was assigned more units than its capacity."""

    def __init__(self, server: int, overflow: int):
        self.server = server
        self.overflow = overflow
        super().__init__(f"server {server} over capacity by {overflow} units")


@dataclass(frozen=True)
class UtilityFunction:
    """Nondecreasing concave piecewise-linear curve over integer resource units.

    ``breakpoints`` holds ``(x, y)`` pairs with strictly increasing integer
    ``x`` starting at 0; values between breakpoints are linear interpolations.
    The last ``x`` must equal the owning instance's capacity.
    """

    breakpoints: tuple[tuple[int, float], ...]
    name: str | None = None

    def __post_init__(self):
        bps = tuple((int(x), float(y)) for x, y in self.breakpoints)
        object.__setattr__(self, "breakpoints", bps)
        _check_breakpoints(bps)

    @property
    def domain_end(self) -> int:
        return self.breakpoints[-1][0]

    @cached_property
    def xs(self) -> np.ndarray:
        return np.array([x for x, _ in self.breakpoints], dtype=np.int64)

    @cached_property
    def ys(self) -> np.ndarray:
        return np.array([y for _, y in self.breakpoints], dtype=np.float64)

    @cached_property
    def segment_lengths(self) -> np.ndarray:
        return np.diff(self.xs)

    @cached_property
    def segment_slopes(self) -> np.ndarray:
        return np.diff(self.ys) / self.segment_lengths

    def value(self, x: int | float) -> float:
        """Piecewise-linear interpolation; exact at breakpoints."""
        xs = self.xs
        if x < 0 or x > xs[-1]:
            raise ValueError(f"x={x} outside domain [0, {int(xs[-1])}]")
        i = int(np.searchsorted(xs, x, side="left"))
        if i < len(xs) and xs[i] == x:
            return float(self.ys[i])
        j = i - 1
        return float(self.ys[j] + self.segment_slopes[j] * (x - xs[j]))

    def unit_marginal(self, u: int) -> float:
        """Gain of the u-th unit, f(u) - f(u-1)."""
        return self.value(u) - self.value(u - 1)


def _check_breakpoints(bps: tuple[tuple[int, float], ...]) -> None:
    if len(bps) < 2:
        raise DomainError("a utility function needs at least two breakpoints")
    xs = [x for x, _ in bps]
    ys = [y for _, y in bps]
    if xs[0] != 0:
        raise DomainError(f"first breakpoint must be at x=0, got x={xs[0]}")
    if any(b <= a for a, b in zip(xs, xs[1:])):
        raise DomainError("breakpoint x values must be strictly increasing")
    if ys[0] < 0:
        raise MonotonicityError(f"utility must be nonnegative, got f(0)={ys[0]}")
    slopes = [(yb - ya) / (xb - xa) for (xa, ya), (xb, yb) in zip(bps, bps[1:])]
    for k, s in enumerate(slopes):
        if s < -SLOPE_TOL:
            raise MonotonicityError(
                f"utility decreases on segment {k} (slope {s:.3g})"
            )
    for k, (s0, s1) in enumerate(zip(slopes, slopes[1:])):
        if s1 > s0 + SLOPE_TOL:
            raise ConcavityError(
                f"slope rises from {s0:.6g} to {s1:.6g} at segment {k + 1}"
            )


@dataclass(frozen=True)
class Instance:
    """m homogeneous servers with capacity C each, plus n utility curves."""

    servers: int
    capacity: int
    threads: tuple[UtilityFunction, ...]
    meta: Any = field(default=None, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "threads", tuple(self.threads))
        if self.servers < 1:
            raise InstanceError("need at least one server")
        if self.capacity < 1:
            raise InstanceError("capacity must be a positive integer")
        if len(self.threads) < 1:
            raise InstanceError("need at least one thread")
        for i, f in enumerate(self.threads):
            if f.domain_end != self.capacity:
                raise DomainError(
                    f"thread {i}: domain ends at {f.domain_end}, expected "
                    f"capacity {self.capacity}"
                )

    @property
    def n(self) -> int:
        return len(self.threads)

    def thread_label(self, i: int) -> str:
        name = self.threads[i].name
        return name if name else f"t{i + 1}"


@dataclass(frozen=True)
class Assignment:
    """Per-thread (server, allocation) pairs; servers are 1-based."""

    entries: tuple[tuple[int, int], ...]

    def __post_init__(self):
        object.__setattr__(
            self, "entries", tuple((int(r), int(c)) for r, c in self.entries)
        )

    @property
    def allocations(self) -> tuple[int, ...]:
        return tuple(c for _, c in self.entries)

    @property
    def servers_of(self) -> tuple[int, ...]:
        return tuple(r for r, _ in self.entries)


@dataclass(frozen=True)
class SolveReport:
    """Outcome of one solver run plus the diagnostics the analysis rests on.

    ``full_set`` / ``unfull_set`` partition the 0-based thread ids into those
    whose allocation matches the super-optimal one and the rest.  ``gamma`` is
    the largest linearized super-optimal utility among unfull threads (0 when
    all threads are full).
    """

    assignment: Assignment
    total_utility: float
    linearized_utility: float
    super_optimal_value: float
    full_set: frozenset[int]
    unfull_set: frozenset[int]
    gamma: float
    alpha_bound_ok: bool
    processing_order: tuple[int, ...]
    algorithm: str = ""
    instance: "Instance | None" = field(default=None, compare=False, repr=False)

    @property
    def ratio_to_super_optimal(self) -> float:
        if self.super_optimal_value == 0.0:
            return 1.0
        return self.total_utility / self.super_optimal_value


@dataclass(frozen=True)
class VerifyResult:
    total_utility: float
    residuals: tuple[int, ...]

    @property
    def feasible(self) -> bool:
        return True


def evaluate(f: UtilityFunction, x: int | float) -> float:
    """Utility of ``f`` at ``x`` units (linear interpolation)."""
    return f.value(x)


def total_utility(threads: Sequence[UtilityFunction], allocs: Sequence[int]) -> float:
    """Sum of per-thread utilities, accumulated in thread order.

    Every value/ratio in this package funnels through here so that quantities
    that are equal by construction compare equal as floats.
    """
    if len(threads) != len(allocs):
        raise ValueError("allocation vector length does not match thread count")
    return sum(f.value(c) for f, c in zip(threads, allocs))


def find_violations(raw: Any) -> list[str]:
    """Collect every validation problem in a parsed instance description."""
    problems: list[str] = []
    if not isinstance(raw, dict):
        return ["instance description must be a mapping"]
    servers = raw.get("servers")
    capacity = raw.get("capacity")
    threads = raw.get("threads")
    if not isinstance(servers, int) or servers < 1:
        problems.append("'servers' must be a positive integer")
    if not isinstance(capacity, int) or capacity < 1:
        problems.append("'capacity' must be a positive integer")
    if not isinstance(threads, list) or not threads:
        problems.append("'threads' must be a non-empty array")
        return problems
    for i, t in enumerate(threads):
        label = t.get("name") if isinstance(t, dict) else None
        label = label or f"thread {i}"
        if not isinstance(t, dict) or "breakpoints" not in t:
            problems.append(f"{label}: missing 'breakpoints'")
            continue
        try:
            f = UtilityFunction(
                tuple((p[0], p[1]) for p in t["breakpoints"]),
                name=t.get("name"),
            )
        except InstanceError as exc:
            problems.append(f"{label}: {exc}")
            continue
        except (TypeError, IndexError):
            problems.append(f"{label}: breakpoints must be [x, y] pairs")
            continue
        if isinstance(capacity, int) and capacity >= 1 and f.domain_end != capacity:
            problems.append(
                f"{label}: domain ends at {f.domain_end}, expected {capacity}"
            )
    return problems


def validate_instance(raw: Any) -> Instance:
    """Build a validated :class:`Instance` from a parsed description.

    Raises the first typed violation (:class:`DomainError`,
    :class:`MonotonicityError` or :class:`ConcavityError`); use
    :func:`find_violations` to collect all of them.
    """
    if not isinstance(raw, dict):
        raise InstanceError("instance description must be a mapping")
    for key in ("servers", "capacity", "threads"):
        if key not in raw:
            raise InstanceError(f"missing required field '{key}'")
    threads = []
    for t in raw["threads"]:
        threads.append(
            UtilityFunction(
                tuple((p[0], p[1]) for p in t["breakpoints"]),
                name=t.get("name"),
            )
        )
    return Instance(
        servers=int(raw["servers"]),
        capacity=int(raw["capacity"]),
        threads=tuple(threads),
        meta=raw.get("meta"),
    )


def serialize_instance(inst: Instance) -> dict:
    """Instance back to its plain-dict file form."""
    threads = []
    for f in inst.threads:
        entry: dict[str, Any] = {}
        if f.name is not None:
            entry["name"] = f.name
        entry["breakpoints"] = [[x, y] for x, y in f.breakpoints]
        threads.append(entry)
    out: dict[str, Any] = {
        "servers": inst.servers,
        "capacity": inst.capacity,
        "threads": threads,
    }
    if inst.meta is not None:
        out["meta"] = inst.meta
    return out


def load_instance(path: str | os.PathLike) -> Instance:
    with open(path, "r", encoding="utf-8") as fh:
        raw = json.load(fh)
    return validate_instance(raw)


def save_instance(inst: Instance, path: str | os.PathLike) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(serialize_instance(inst), fh, indent=2)
        fh.write("\n")


def verify_assignment(inst: Instance, a: Assignment) -> VerifyResult:
    """Check feasibility and return total utility plus per-server residuals.

    Raises :class:`CapacityExceeded` for the lowest-numbered overfull server.
    """
    if len(a.entries) != inst.n:
        raise ValueError(
            f"assignment covers {len(a.entries)} threads, instance has {inst.n}"
        )
    loads = [0] * inst.servers
    for i, (r, c) in enumerate(a.entries):
        if not 1 <= r <= inst.servers:
            raise ValueError(f"thread {i}: server {r} outside [1, {inst.servers}]")
        if not 0 <= c <= inst.capacity:
            raise ValueError(
                f"thread {i}: allocation {c} outside [0, {inst.capacity}]"
            )
        loads[r - 1] += c
    for j, load in enumerate(loads):
        if load > inst.capacity:
            raise CapacityExceeded(j + 1, load - inst.capacity)
    value = total_utility(inst.threads, a.allocations)
    residuals = tuple(inst.capacity - load for load in loads)
    return VerifyResult(total_utility=value, residuals=residuals)


ASSIGNMENT_CSV_HEADER = ("thread", "server", "allocation", "utility")


def write_assignment_csv(inst: Instance, a: Assignment, path: str | os.PathLike) -> None:
    """One row per thread, thread order preserved."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(ASSIGNMENT_CSV_HEADER)
        for i, (r, c) in enumerate(a.entries):
            writer.writerow([inst.thread_label(i), r, c, repr(inst.threads[i].value(c))])


def read_assignment_csv(path: str | os.PathLike) -> list[dict[str, Any]]:
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        if tuple(reader.fieldnames or ()) != ASSIGNMENT_CSV_HEADER:
            raise ValueError(f"unexpected assignment CSV header: {reader.fieldnames}")
        return [
            {
                "thread": row["thread"],
                "server": int(row["server"]),
                "allocation": int(row["allocation"]),
                "utility": float(row["utility"]),
            }
            for row in reader
        ]
