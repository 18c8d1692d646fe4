import pytest

from assignalloc import (
    ALPHA,
    BenchConfig,
    DistSpec,
    SizeLimitExceeded,
    run_sweep,
    synthetic_instance,
    timing_probe,
    write_aggregate_csv,
    write_results_csv,
)
from assignalloc.bench import AGGREGATE_HEADER, RESULTS_HEADER


def small_cfg(**overrides):
    base = dict(
        m=2,
        capacity=10,
        beta_loads=(1, 2),
        dist=DistSpec.uniform(),
        trials=5,
        seed=99,
        algorithms=("alg1", "alg2", "uu", "ur"),
    )
    base.update(overrides)
    return BenchConfig(**base)


class TestRunSweep:
    def test_deterministic_records(self):
        a = run_sweep(small_cfg())
        b = run_sweep(small_cfg())
        assert a.records == b.records
        assert a.aggregates == b.aggregates

    def test_parallel_matches_serial(self):
        serial = run_sweep(small_cfg())
        parallel = run_sweep(small_cfg(jobs=2))
        assert serial.records == parallel.records

    def test_csv_bytes_reproducible(self, tmp_path):
        paths = []
        for name in ("a", "b"):
            result = run_sweep(small_cfg())
            rp = tmp_path / f"results_{name}.csv"
            ap = tmp_path / f"aggregate_{name}.csv"
            write_results_csv(result.records, rp)
            write_aggregate_csv(result.aggregates, ap)
            paths.append((rp.read_bytes(), ap.read_bytes()))
        assert paths[0] == paths[1]

    def test_csv_schemas(self, tmp_path):
        result = run_sweep(small_cfg())
        rp = tmp_path / "results.csv"
        ap = tmp_path / "aggregate.csv"
        write_results_csv(result.records, rp)
        write_aggregate_csv(result.aggregates, ap)
        assert rp.read_text().splitlines()[0] == ",".join(RESULTS_HEADER)
        assert ap.read_text().splitlines()[0] == ",".join(AGGREGATE_HEADER)

    def test_tight_fixed_instance_ratios(self, tight_instance):
        cfg = BenchConfig(
            m=2,
            capacity=2,
            beta_loads=(2,),
            dist=DistSpec.uniform(),
            trials=3,
            seed=1,
            algorithms=("alg2", "oracle"),
            fixed_instance=tight_instance,
        )
        result = run_sweep(cfg)
        alg2 = [r for r in result.records if r.algorithm == "alg2"]
        oracle = [r for r in result.records if r.algorithm == "oracle"]
        assert all(r.utility == 2.5 and r.so_value == 3.0 for r in alg2)
        assert all(r.ratio_to_so == pytest.approx(2.5 / 3) for r in alg2)
        assert all(r.utility == 3.0 for r in oracle)
        assert not result.violations

    def test_uu_matches_super_optimal_at_one_thread_per_server(self):
        cfg = BenchConfig(
            m=8,
            capacity=1000,
            beta_loads=(1,),
            dist=DistSpec.uniform(),
            trials=100,
            seed=12,
            algorithms=("uu",),
        )
        result = run_sweep(cfg)
        assert all(r.utility == r.so_value for r in result.records)
        agg = result.aggregates[0]
        assert agg.mean_ratio_to_so == 1.0

    def test_per_trial_invariants_hold(self):
        result = run_sweep(small_cfg(trials=20))
        assert not result.violations
        for r in result.records:
            assert r.ratio_to_so <= 1 + 1e-9
            if r.algorithm in ("alg1", "alg2"):
                assert r.ratio_to_so >= ALPHA - 1e-9

    def test_alg2_over_self_is_unity(self):
        result = run_sweep(small_cfg())
        for agg in result.aggregates:
            if agg.algorithm == "alg2":
                assert agg.mean_alg2_over_this == 1.0

    def test_heuristics_degrade_with_load(self):
        cfg = BenchConfig(
            m=4,
            capacity=100,
            beta_loads=(1, 10),
            dist=DistSpec.uniform(),
            trials=50,
            seed=5,
            algorithms=("alg2", "uu"),
        )
        result = run_sweep(cfg)
        ratios = {
            (a.beta, a.algorithm): a.mean_alg2_over_this for a in result.aggregates
        }
        assert ratios[(10, "uu")] >= ratios[(1, "uu")]

    def test_oracle_size_guard(self):
        with pytest.raises(SizeLimitExceeded):
            small_cfg(m=8, algorithms=("alg2", "oracle"))

    def test_trial_seeds_recorded(self):
        result = run_sweep(small_cfg(trials=2))
        seeds = {(r.beta, r.trial, r.seed) for r in result.records}
        assert len({s[2] for s in seeds}) == len({(s[0], s[1]) for s in seeds})


class TestTimingProbe:
    def test_synthetic_instance_shape(self):
        inst = synthetic_instance(20, 4, 50, 8, seed=3)
        assert inst.n == 20
        assert all(len(f.breakpoints) == 8 for f in inst.threads)

    def test_moderate_dense_solve_is_fast(self):
        elapsed = timing_probe(100, 8, 1000, 1001)
        assert elapsed < 1.0

    def test_single_thread_near_zero(self):
        assert timing_probe(1, 1, 100, 4) < 0.1
