"""Single-pool separable concave maximization.

The budgeted problem "maximize sum f_i(c_i) subject to sum c_i <= B and
0 <= c_i <= C" is solved by marginal-threshold water-filling: find the largest
marginal value lambda* such that the number of resource units with marginal
gain above lambda* is at most B while the number with marginal at least
lambda* covers B, grant every unit above the threshold, and spread the
remainder over the units exactly at the threshold round-robin (one unit per
tied thread, ascending thread index, cycling until the budget is met).  Any
completion at the water line is optimal; the round-robin keeps allocations of
identical threads balanced, which downstream assignment packs markedly better
than handing one thread the whole tied block.  Because the curves are
piecewise linear with integer breakpoints, every unit inside a segment has
marginal gain exactly equal to the segment slope, so the threshold search
runs over pooled segments instead of individual units.

A deliberately naive unit-by-unit greedy oracle is included for cross-checks.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .model import Instance, UtilityFunction, total_utility


@dataclass(frozen=True)
class SuperOptimalAllocation:
    """Optimum of the single-pool relaxation with budget min(n, m) * C.

    Upper-bounds the utility of every feasible assignment.  ``threshold`` is
    the marginal value at the water line (``inf`` when the budget is zero).
    """

    c_hat: tuple[int, ...]
    value: float
    threshold: float


def _flat_segments(fs: Sequence[UtilityFunction]):
    """Pool all curve segments: (slope, unit length, owning thread index)."""
    slopes = np.concatenate([f.segment_slopes for f in fs])
    lengths = np.concatenate([f.segment_lengths for f in fs])
    owners = np.concatenate(
        [np.full(len(f.segment_lengths), i, dtype=np.int64) for i, f in enumerate(fs)]
    )
    return slopes, lengths, owners


def _spread_fill(eligible: np.ndarray, remainder: int) -> np.ndarray:
    """Round-robin ``remainder`` units over threads with ``eligible`` capacity.

    Equivalent to cycling through threads in ascending index granting one unit
    per still-eligible thread, computed in closed form: after L full cycles
    thread i holds min(eligible_i, L); the partial cycle goes to the lowest
    indices still eligible.
    """
    take = np.zeros_like(eligible)
    if remainder <= 0 or not eligible.size:
        return take
    lo, hi = 0, int(eligible.max())
    while lo < hi:
        mid = (lo + hi + 1) // 2
        if int(np.minimum(eligible, mid).sum()) <= remainder:
            lo = mid
        else:
            hi = mid - 1
    take = np.minimum(eligible, lo)
    left = remainder - int(take.sum())
    if left > 0:
        idx = np.nonzero(eligible > lo)[0][:left]
        take[idx] += 1
    return take


def _threshold_allocate(
    fs: Sequence[UtilityFunction], budget: int
) -> tuple[np.ndarray, float]:
    """Water-filling via the pooled-segment threshold search.

    Returns the per-thread allocation vector and the realized threshold
    marginal lambda*.  Zero-marginal units are eligible, so exactly
    ``min(budget, total units)`` units are handed out.
    """
    n = len(fs)
    if budget < 0:
        raise ValueError("budget must be nonnegative")
    alloc = np.zeros(n, dtype=np.int64)
    if budget == 0 or n == 0:
        return alloc, math.inf

    slopes, lengths, owners = _flat_segments(fs)
    total_units = int(lengths.sum())
    b = min(int(budget), total_units)
    if b == 0:
        return alloc, math.inf

    # lambda* = b-th largest unit marginal; segments expand to `length` units
    # of identical marginal, so rank through cumulative segment lengths.
    order = np.argsort(-slopes, kind="stable")
    csum = np.cumsum(lengths[order])
    pos = int(np.searchsorted(csum, b, side="left"))
    lam = float(slopes[order[pos]])

    above = slopes > lam
    base = np.bincount(
        owners[above], weights=lengths[above].astype(np.float64), minlength=n
    ).astype(np.int64)
    at = slopes == lam
    eligible = np.bincount(
        owners[at], weights=lengths[at].astype(np.float64), minlength=n
    ).astype(np.int64)

    alloc[:] = base + _spread_fill(eligible, b - int(base.sum()))
    return alloc, lam


def super_optimal(inst: Instance) -> SuperOptimalAllocation:
    """Maximize sum f_i(c_i) over the pooled budget min(n, m) * C.

    With n >= m the full m*C units are always consumed (curves are
    nondecreasing and flat units count); with n < m every thread simply takes
    its per-thread cap C.
    """
    budget = min(inst.n, inst.servers) * inst.capacity
    alloc, lam = _threshold_allocate(inst.threads, budget)
    value = total_utility(inst.threads, alloc.tolist())
    return SuperOptimalAllocation(
        c_hat=tuple(int(c) for c in alloc), value=value, threshold=lam
    )


def single_server_optimal(
    fs: Sequence[UtilityFunction], budget: int
) -> tuple[list[int], float]:
    """Optimal integral allocation of ``budget`` units on one server.

    Same threshold contract as :func:`super_optimal`; the per-thread cap is
    each curve's domain end.
    """
    alloc, _ = _threshold_allocate(fs, budget)
    allocs = [int(c) for c in alloc]
    return allocs, total_utility(fs, allocs)


def greedy_allocate_oracle(
    fs: Sequence[UtilityFunction], budget: int
) -> tuple[list[int], float]:
    """Unit-by-unit greedy: grant each unit to the largest next marginal.

    Ties go to the lowest thread index.  O(n + budget log n); intended as an
    independent cross-check for the threshold allocator on small budgets.
    """
    n = len(fs)
    alloc = [0] * n
    heap: list[tuple[float, int]] = []
    for i, f in enumerate(fs):
        if f.domain_end >= 1:
            heapq.heappush(heap, (-f.unit_marginal(1), i))
    granted = 0
    while granted < budget and heap:
        neg_marg, i = heapq.heappop(heap)
        alloc[i] += 1
        granted += 1
        nxt = alloc[i] + 1
        if nxt <= fs[i].domain_end:
            heapq.heappush(heap, (-fs[i].unit_marginal(nxt), i))
    return alloc, total_utility(fs, alloc)
