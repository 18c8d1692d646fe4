"""Joint thread-to-server assignment and resource allocation for concave
utility curves: pooled upper bound, linearization, two guaranteed-ratio
solvers, baseline heuristics, an exact oracle, instance generators, and a
seeded benchmark harness.
"""

from .allocation import (
    SuperOptimalAllocation,
    greedy_allocate_oracle,
    single_server_optimal,
    super_optimal,
)
from .baselines import (
    OracleResult,
    SizeLimitExceeded,
    SizeLimits,
    exact_solve,
    heuristic_rr,
    heuristic_ru,
    heuristic_ur,
    heuristic_uu,
)
from .bench import (
    AggregateRecord,
    BenchConfig,
    SweepResult,
    TrialRecord,
    run_sweep,
    synthetic_instance,
    timing_probe,
    write_aggregate_csv,
    write_results_csv,
)
from .generators import (
    DistSpec,
    OddSumError,
    from_partition,
    gen_instance,
    gen_power_utility,
    gen_utility,
    sample_vw,
    substream,
    utility_from_anchors,
)
from .linearize import LinearizedFunction, linearize, linearize_all
from .model import (
    ALPHA,
    Assignment,
    CapacityExceeded,
    ConcavityError,
    DomainError,
    Instance,
    InstanceError,
    MonotonicityError,
    SolveReport,
    UtilityFunction,
    VerifyResult,
    evaluate,
    find_violations,
    load_instance,
    read_assignment_csv,
    save_instance,
    serialize_instance,
    total_utility,
    validate_instance,
    verify_assignment,
    write_assignment_csv,
)
from .solvers import (
    DiagnosticsResult,
    LemmaViolation,
    algorithm1,
    algorithm2,
    build_report,
    solve_report_diagnostics,
)

__version__ = "0.1.0"

__all__ = [
    "ALPHA",
    "AggregateRecord",
    "Assignment",
    "BenchConfig",
    "CapacityExceeded",
    "ConcavityError",
    "DiagnosticsResult",
    "DistSpec",
    "DomainError",
    "Instance",
    "InstanceError",
    "LemmaViolation",
    "LinearizedFunction",
    "MonotonicityError",
    "OddSumError",
    "OracleResult",
    "SizeLimitExceeded",
    "SizeLimits",
    "SolveReport",
    "SuperOptimalAllocation",
    "SweepResult",
    "TrialRecord",
    "UtilityFunction",
    "VerifyResult",
    "algorithm1",
    "algorithm2",
    "build_report",
    "evaluate",
    "exact_solve",
    "find_violations",
    "from_partition",
    "gen_instance",
    "gen_power_utility",
    "gen_utility",
    "greedy_allocate_oracle",
    "heuristic_rr",
    "heuristic_ru",
    "heuristic_ur",
    "heuristic_uu",
    "linearize",
    "linearize_all",
    "load_instance",
    "read_assignment_csv",
    "run_sweep",
    "sample_vw",
    "save_instance",
    "serialize_instance",
    "single_server_optimal",
    "solve_report_diagnostics",
    "substream",
    "super_optimal",
    "synthetic_instance",
    "timing_probe",
    "total_utility",
    "utility_from_anchors",
    "validate_instance",
    "verify_assignment",
    "write_aggregate_csv",
    "write_assignment_csv",
    "write_results_csv",
]
