import dataclasses
import math

import numpy as np
import pytest

from assignalloc import (
    ALPHA,
    Instance,
    LemmaViolation,
    UtilityFunction,
    algorithm1,
    algorithm2,
    exact_solve,
    solve_report_diagnostics,
    super_optimal,
    verify_assignment,
)
from helpers import random_instance


def sqrt_instance():
    f = UtilityFunction(tuple((u, math.sqrt(u)) for u in range(5)))
    return Instance(servers=2, capacity=4, threads=(f,) * 4)


class TestAlgorithm1:
    def test_tight_trace(self, tight_instance):
        so = super_optimal(tight_instance)
        report = algorithm1(tight_instance, so)
        assert report.assignment.entries == ((1, 1), (2, 1), (1, 1))
        assert report.total_utility == 2.5
        assert report.linearized_utility == 2.5
        assert report.full_set == frozenset({0, 1})
        assert report.unfull_set == frozenset({2})
        assert report.gamma == 1.0
        assert report.alpha_bound_ok

    def test_trivial_regime_single_thread(self):
        f = UtilityFunction(((0, 0.0), (3, 3.0)))
        inst = Instance(servers=2, capacity=3, threads=(f,))
        report = algorithm1(inst, super_optimal(inst))
        assert report.assignment.entries == ((1, 3),)
        assert report.total_utility == 3.0

    def test_four_sqrt_threads_all_full(self):
        inst = sqrt_instance()
        so = super_optimal(inst)
        report = algorithm1(inst, so)
        assert report.unfull_set == frozenset()
        assert report.total_utility == so.value == pytest.approx(4 * math.sqrt(2))


class TestAlgorithm2:
    def test_tight_ratio_five_sixths(self, tight_instance):
        so = super_optimal(tight_instance)
        report = algorithm2(tight_instance, so)
        oracle = exact_solve(tight_instance)
        assert report.total_utility == 2.5
        assert oracle.value == 3.0
        assert report.total_utility / oracle.value == pytest.approx(5 / 6)

    def test_equal_thread_and_server_counts(self):
        rng = np.random.default_rng(23)
        from helpers import random_concave

        c = 8
        f = random_concave(rng, c)
        inst = Instance(servers=3, capacity=c, threads=(f, f, f))
        so = super_optimal(inst)
        report = algorithm2(inst, so)
        assert sorted(r for r, _ in report.assignment.entries) == [1, 2, 3]
        assert report.assignment.allocations == (c, c, c)
        assert report.total_utility == exact_solve(inst).value

    def test_four_sqrt_threads_match_super_optimal(self):
        inst = sqrt_instance()
        so = super_optimal(inst)
        report = algorithm2(inst, so)
        assert report.total_utility == so.value == pytest.approx(4 * math.sqrt(2))

    def test_trivial_regime(self):
        f = UtilityFunction(((0, 0.0), (3, 1.0)))
        inst = Instance(servers=4, capacity=3, threads=(f, f))
        report = algorithm2(inst, super_optimal(inst))
        assert report.assignment.entries == ((1, 3), (2, 3))


class TestDeterminism:
    @pytest.mark.parametrize("solver", [algorithm1, algorithm2])
    def test_identical_runs(self, solver):
        rng = np.random.default_rng(29)
        inst = random_instance(rng, n_max=10, m_max=4, c_max=20)
        so = super_optimal(inst)
        assert solver(inst, so).assignment == solver(inst, so).assignment


class TestDiagnostics:
    def test_tight_algorithm2_run(self, tight_instance):
        so = super_optimal(tight_instance)
        report = algorithm2(tight_instance, so)
        diag = solve_report_diagnostics(report, so)
        assert report.unfull_set == frozenset({2})
        assert len(report.unfull_set) <= tight_instance.servers - 1
        assert diag.ok
        diag.raise_if_failed()

    def test_all_full_run_is_vacuous(self):
        inst = sqrt_instance()
        so = super_optimal(inst)
        diag = solve_report_diagnostics(algorithm2(inst, so), so)
        assert diag.ok

    def test_corrupted_report_raises(self, tight_instance):
        so = super_optimal(tight_instance)
        report = algorithm2(tight_instance, so)
        bad = dataclasses.replace(report, full_set=frozenset(), unfull_set=frozenset({0, 1, 2}))
        diag = solve_report_diagnostics(bad, so)
        assert not diag.ok
        with pytest.raises(LemmaViolation):
            diag.raise_if_failed()

    def test_campaign_of_1000_runs_has_zero_violations(self):
        rng = np.random.default_rng(31)
        failures = []
        for _ in range(500):
            inst = random_instance(rng, n_max=9, m_max=4, c_max=14, allow_offset=True)
            so = super_optimal(inst)
            for solver in (algorithm1, algorithm2):
                report = solver(inst, so)
                verify_assignment(inst, report.assignment)
                diag = solve_report_diagnostics(report, so)
                failures.extend(diag.failed())
                assert report.total_utility <= so.value * (1 + 1e-9)
                assert report.total_utility >= ALPHA * so.value - 1e-9 * so.value
        assert failures == []
