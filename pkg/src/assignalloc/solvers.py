"""The two approximation algorithms over the linearized problem.

Both take a super-optimal allocation, work with the linearized curves, and
return an assignment for the original concave instance whose total utility is
at least ALPHA = 2*(sqrt(2)-1) > 0.828 of the super-optimal value.

Tie-breaking is pinned for reproducibility: equal utilities resolve to the
lowest thread index, and a thread goes to the server with the most remaining
capacity, lowest index first.  When there are fewer threads than servers both
algorithms short-circuit to the trivial optimum (thread i alone on server i
with the full capacity).
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass

import numpy as np

from .allocation import SuperOptimalAllocation
from .linearize import linearize_all
from .model import ALPHA, Assignment, Instance, SolveReport, total_utility


class LemmaViolation(AssertionError):
    """A structural property the approximation guarantee rests on failed.

    Never expected on valid runs; raising one signals an implementation bug.
    """

    def __init__(self, name: str, detail: str = ""):
        self.name = name
        super().__init__(f"{name}: {detail}" if detail else name)


def build_report(
    inst: Instance,
    so: SuperOptimalAllocation,
    servers: list[int],
    allocs: list[int],
    order: tuple[int, ...],
    algorithm: str,
) -> SolveReport:
    """Assemble a SolveReport from raw solver output (1-based servers)."""
    lin = linearize_all(inst, so)
    assignment = Assignment(tuple(zip(servers, allocs)))
    f_total = total_utility(inst.threads, allocs)
    g_total = sum(g.value(c) for g, c in zip(lin, allocs))
    full = frozenset(i for i in range(inst.n) if allocs[i] == so.c_hat[i])
    unfull = frozenset(range(inst.n)) - full
    gamma = max((lin[i].peak for i in unfull), default=0.0)
    alpha_ok = g_total >= ALPHA * so.value - 1e-9 * so.value
    return SolveReport(
        assignment=assignment,
        total_utility=f_total,
        linearized_utility=g_total,
        super_optimal_value=so.value,
        full_set=full,
        unfull_set=unfull,
        gamma=gamma,
        alpha_bound_ok=alpha_ok,
        processing_order=order,
        algorithm=algorithm,
        instance=inst,
    )


def _trivial_report(
    inst: Instance, so: SuperOptimalAllocation, algorithm: str
) -> SolveReport:
    # n < m: thread i alone on server i with the full capacity.
    servers = [i + 1 for i in range(inst.n)]
    allocs = [inst.capacity] * inst.n
    return build_report(inst, so, servers, allocs, tuple(range(inst.n)), algorithm)


def algorithm1(inst: Instance, so: SuperOptimalAllocation) -> SolveReport:
    """Pairwise-scan solver: O(m n^2) after the super-optimal allocation.

    While unassigned threads remain, look for (thread, server) pairs where the
    thread's super-optimal allocation still fits.  If any exist, place the
    fitting thread with the highest linearized peak and give it its full
    super-optimal allocation; otherwise give the thread that profits most from
    the largest remaining capacity everything that server has left.
    """
    n, m = inst.n, inst.servers
    if n < m:
        return _trivial_report(inst, so, "alg1")

    lin = linearize_all(inst, so)
    c_hat = np.array(so.c_hat, dtype=np.int64)
    peak = np.array([g.peak for g in lin], dtype=np.float64)
    # Finite linear slopes; cap-0 threads never reach the unfull branch.
    lin_slope = np.array(
        [g.slope if g.cap > 0 else 0.0 for g in lin], dtype=np.float64
    )
    caps = np.full(m, inst.capacity, dtype=np.int64)
    remaining = np.ones(n, dtype=bool)
    servers = [0] * n
    allocs = [0] * n
    order: list[int] = []

    for _ in range(n):
        cap_max = int(caps.max())
        fits = remaining & (c_hat <= cap_max)
        if fits.any():
            utilities = np.where(fits, peak, -np.inf)
            i = int(np.argmax(utilities))
            c = int(c_hat[i])
        else:
            utilities = np.where(remaining, lin_slope * cap_max, -np.inf)
            i = int(np.argmax(utilities))
            c = cap_max
        j = int(np.argmax(caps))
        servers[i] = j + 1
        allocs[i] = c
        caps[j] -= c
        remaining[i] = False
        order.append(i)

    return build_report(inst, so, servers, allocs, tuple(order), "alg1")


def algorithm2(inst: Instance, so: SuperOptimalAllocation) -> SolveReport:
    """Sort-and-heap solver: O(n log n) after the super-optimal allocation.

    Threads are ordered by linearized peak descending; the block after the
    first m is reordered by peak/cap slope descending (cap 0 counts as
    infinitely steep).  Each thread then takes min(c_hat, remaining) on the
    server with the most remaining capacity, maintained in a max-heap.
    """
    n, m = inst.n, inst.servers
    if n < m:
        return _trivial_report(inst, so, "alg2")

    lin = linearize_all(inst, so)
    order = sorted(range(n), key=lambda i: (-lin[i].peak, i))
    head, tail = order[:m], order[m:]
    tail.sort(key=lambda i: (-lin[i].slope, i))
    order = head + tail

    heap = [(-inst.capacity, j) for j in range(m)]
    heapq.heapify(heap)
    servers = [0] * n
    allocs = [0] * n
    for i in order:
        neg_cap, j = heapq.heappop(heap)
        cap = -neg_cap
        c = min(so.c_hat[i], cap)
        servers[i] = j + 1
        allocs[i] = c
        heapq.heappush(heap, (-(cap - c), j))

    return build_report(inst, so, servers, allocs, tuple(order), "alg2")


@dataclass(frozen=True)
class DiagnosticsResult:
    """Pass/fail per structural check, with failure details by check name."""

    checks: tuple[tuple[str, bool], ...]
    details: tuple[tuple[str, str], ...]

    @property
    def ok(self) -> bool:
        return all(passed for _, passed in self.checks)

    def failed(self) -> list[str]:
        return [name for name, passed in self.checks if not passed]

    def as_dict(self) -> dict[str, bool]:
        return dict(self.checks)

    def raise_if_failed(self) -> None:
        details = dict(self.details)
        for name in self.failed():
            raise LemmaViolation(name, details.get(name, ""))


def solve_report_diagnostics(
    report: SolveReport, so: SuperOptimalAllocation
) -> DiagnosticsResult:
    """Re-derive a solver run's structural properties and check each one.

    Checks, in order: the report's own bookkeeping matches a recomputation; no
    server hosts two unfull threads; there are fewer unfull threads than
    servers; the unfull threads keep at least an |E|/m fraction of their
    super-optimal units; the first m threads processed are all full and worth
    at least gamma; the full threads' linearized value covers m * gamma; and
    among unfull threads a strictly steeper linearized slope never receives
    fewer units.  Intended for algorithm1/algorithm2 output only.
    """
    inst = report.instance
    if inst is None:
        raise ValueError("report carries no instance; rebuild via build_report")
    n, m = inst.n, inst.servers
    allocs = report.assignment.allocations
    servers = report.assignment.servers_of
    lin = linearize_all(inst, so)

    checks: list[tuple[str, bool]] = []
    details: list[tuple[str, str]] = []

    def record(name: str, passed: bool, detail: str = "") -> None:
        checks.append((name, bool(passed)))
        if not passed:
            details.append((name, detail))

    full = frozenset(i for i in range(n) if allocs[i] == so.c_hat[i])
    unfull = frozenset(range(n)) - full
    gamma = max((lin[i].peak for i in unfull), default=0.0)
    record(
        "report_consistency",
        full == report.full_set
        and unfull == report.unfull_set
        and gamma == report.gamma,
        f"recomputed full={sorted(full)} unfull={sorted(unfull)} gamma={gamma}",
    )

    per_server: dict[int, int] = {}
    for i in unfull:
        per_server[servers[i]] = per_server.get(servers[i], 0) + 1
    worst = max(per_server.values(), default=0)
    record(
        "one_unfull_thread_per_server",
        worst <= 1,
        f"a server hosts {worst} unfull threads",
    )

    record(
        "unfull_count_below_server_count",
        len(unfull) <= m - 1,
        f"|unfull|={len(unfull)} with m={m}",
    )

    # Exact in integers: sum_E c_i >= (|E|/m) * sum_E c_hat_i.
    sum_c = sum(allocs[i] for i in unfull)
    sum_hat = sum(so.c_hat[i] for i in unfull)
    record(
        "unfull_allocation_fraction",
        sum_c * m >= len(unfull) * sum_hat,
        f"sum c={sum_c}, sum c_hat={sum_hat}, |unfull|={len(unfull)}, m={m}",
    )

    head = report.processing_order[: min(m, n)]
    gamma_slack = 1e-9 * max(1.0, gamma)
    record(
        "head_threads_full_and_cover_gamma",
        all(i in full for i in head)
        and all(lin[i].value(allocs[i]) >= gamma - gamma_slack for i in head),
        f"head={list(head)} gamma={gamma}",
    )

    full_value = sum(lin[i].value(allocs[i]) for i in full)
    record(
        "full_value_covers_m_gamma",
        full_value >= m * gamma - 1e-9 * max(1.0, m * gamma),
        f"sum_full g={full_value} < m*gamma={m * gamma}",
    )

    steeper_ok = True
    steeper_detail = ""
    unfull_list = sorted(unfull)
    for a in unfull_list:
        for b in unfull_list:
            if lin[a].slope > lin[b].slope and allocs[a] < allocs[b]:
                steeper_ok = False
                steeper_detail = (
                    f"threads {a},{b}: slopes {lin[a].slope}>{lin[b].slope} "
                    f"but allocations {allocs[a]}<{allocs[b]}"
                )
                break
        if not steeper_ok:
            break
    record("steeper_unfull_gets_more", steeper_ok, steeper_detail)

    return DiagnosticsResult(checks=tuple(checks), details=tuple(details))
