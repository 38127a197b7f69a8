"""Entanglement correlations toolkit.

Quantifies bipartite and tripartite entanglement of pure states through
Schmidt-basis correlation statistics, extends the bipartite measures to
mixed states by convex-roof optimization, evaluates CHSH inequalities,
and simulates finite-shot coincidence experiments with seeded,
backend-independent sampling.
"""

from .bell import (
    TSIRELSON_BOUND,
    ChshValue,
    MeasurementSetting,
    chsh,
    chsh_maximize,
    joint_expectation,
)
from .convexroof import (
    Decomposition,
    RoofOptions,
    RoofResult,
    convex_roof,
    two_qubit_concurrence_oracle,
)
from .correlations import CorrelationTable, correlation_table, is_factorizable
from .errors import (
    DimensionMismatch,
    EntcorrError,
    InternalConsistencyError,
    InvalidSchedule,
    InvalidShots,
    NonFinite,
    NotHermitian,
    NotNormalized,
    NotPositive,
    StateFormatError,
    TooFewShots,
    TraceNotOne,
    ValidationError,
    WrongDimension,
)
from .expsim import (
    EstimateWithError,
    MeasurementRecord,
    estimate_convergence_scan,
    estimate_en,
    load_record,
    save_record,
    simulate_measurements,
)
from .kernels import backend_name, derive_seed
from .measures import (
    EntanglementValue,
    MeasureMethod,
    ThreeTangleDetail,
    clamp_unit_interval,
    e2_correlation_sum,
    en_closed_form,
    en_correlation_sum,
    three_tangle,
    three_tangle_detail,
)
from .qstate import (
    DensityMatrix,
    PureState,
    dominant_eigenvector,
    load_state,
    purity,
    save_state,
    validate_density,
    validate_pure,
)
from .schmidt import SchmidtDecomposition, schmidt_decompose, schmidt_rank

__version__ = "0.1.0"

__all__ = [
    "TSIRELSON_BOUND",
    "ChshValue",
    "CorrelationTable",
    "Decomposition",
    "DensityMatrix",
    "DimensionMismatch",
    "EntanglementValue",
    "EntcorrError",
    "EstimateWithError",
    "InternalConsistencyError",
    "InvalidSchedule",
    "InvalidShots",
    "MeasureMethod",
    "MeasurementRecord",
    "MeasurementSetting",
    "NonFinite",
    "NotHermitian",
    "NotNormalized",
    "NotPositive",
    "PureState",
    "RoofOptions",
    "RoofResult",
    "SchmidtDecomposition",
    "StateFormatError",
    "ThreeTangleDetail",
    "TooFewShots",
    "TraceNotOne",
    "ValidationError",
    "WrongDimension",
    "backend_name",
    "chsh",
    "chsh_maximize",
    "clamp_unit_interval",
    "convex_roof",
    "correlation_table",
    "derive_seed",
    "dominant_eigenvector",
    "e2_correlation_sum",
    "en_closed_form",
    "en_correlation_sum",
    "estimate_convergence_scan",
    "estimate_en",
    "is_factorizable",
    "joint_expectation",
    "load_record",
    "load_state",
    "purity",
    "save_record",
    "save_state",
    "schmidt_decompose",
    "schmidt_rank",
    "simulate_measurements",
    "three_tangle",
    "three_tangle_detail",
    "two_qubit_concurrence_oracle",
    "validate_density",
    "validate_pure",
]
