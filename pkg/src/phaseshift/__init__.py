"""Perturbative scattering phase shifts for 1-D Schrodinger problems.

The pipeline: define potentials on a grid (:mod:`phaseshift.potential`),
solve the reference wave (:mod:`phaseshift.refwave`), iterate the correction
hierarchy (:mod:`phaseshift.hierarchy`), assemble the phase series through
partition combinatorics (:mod:`phaseshift.partitions`,
:mod:`phaseshift.series`), and validate against closed-form low orders
(:mod:`phaseshift.cross_check`) and an exact ODE oracle
(:mod:`phaseshift.oracle`).  :mod:`phaseshift.cli` wraps it all in a
config-driven batch tool.
"""

from .errors import (
    ComputationFailed,
    ConfigInvalid,
    DegenerateSweep,
    EvenPointCount,
    GridMismatch,
    InsufficientFValues,
    NonpositiveK,
    OrderOutOfRange,
    PhaseshiftError,
    TabulatedGridMismatch,
    TruncationTooHigh,
    WronskianViolation,
)
from .potential import (
    ComplexGridFunction,
    Grid,
    PotentialSamples,
    PotentialSpec,
    combine_samples,
    cumulative_from_right,
    evaluate_potential,
    sample_potential,
    simpson_weights,
)
from .refwave import ReferenceWave, analytic_free_reference, solve_reference
from .hierarchy import (
    HierarchyResult,
    apply_recursion_step,
    compute_hierarchy,
    step_by_double_integral,
)
from .partitions import (
    MAX_ORDER,
    PartitionTuple,
    enumerate_partitions,
    log_derivative_coefficient,
)
from .series import (
    PhaseSeries,
    assemble_delta_n,
    assemble_series,
    divergence_flag,
    evaluate_truncated,
    log_expansion_reference,
)
from .cross_check import (
    NestedIntegrandSet,
    delta1_direct,
    delta2_direct,
    delta3_direct,
    integrand_factors,
    nested_integral,
)
from .oracle import (
    ConvergenceReport,
    OracleResult,
    TruncationCheck,
    convergence_order_check,
    solve_exact,
    sweep_exact,
)
from .cli import JobConfig, parse_config, run, serialize_config

__version__ = "0.1.0"

__all__ = [
    "ComplexGridFunction",
    "ComputationFailed",
    "ConfigInvalid",
    "ConvergenceReport",
    "DegenerateSweep",
    "EvenPointCount",
    "Grid",
    "GridMismatch",
    "HierarchyResult",
    "InsufficientFValues",
    "JobConfig",
    "MAX_ORDER",
    "NestedIntegrandSet",
    "NonpositiveK",
    "OracleResult",
    "OrderOutOfRange",
    "PartitionTuple",
    "PhaseSeries",
    "PhaseshiftError",
    "PotentialSamples",
    "PotentialSpec",
    "ReferenceWave",
    "TabulatedGridMismatch",
    "TruncationCheck",
    "TruncationTooHigh",
    "WronskianViolation",
    "analytic_free_reference",
    "apply_recursion_step",
    "assemble_delta_n",
    "assemble_series",
    "combine_samples",
    "compute_hierarchy",
    "convergence_order_check",
    "cumulative_from_right",
    "delta1_direct",
    "delta2_direct",
    "delta3_direct",
    "divergence_flag",
    "enumerate_partitions",
    "evaluate_potential",
    "evaluate_truncated",
    "integrand_factors",
    "log_derivative_coefficient",
    "log_expansion_reference",
    "nested_integral",
    "parse_config",
    "run",
    "sample_potential",
    "serialize_config",
    "simpson_weights",
    "solve_exact",
    "solve_reference",
    "step_by_double_integral",
    "sweep_exact",
    "__version__",
]
