"""Coherence measures of quantum states, exact for pure states.

The package computes the trace distance of coherence of a pure state in
closed form together with the unique nearest incoherent state, certifies
candidates through exact dual witnesses, reduces the trace distance of
entanglement of bipartite pure states to a Schmidt-vector coherence
computation, and checks everything against independent brute-force oracles.
"""

__version__ = "0.1.0"

from .certificates import (
    ExtremePerturbation,
    IncoherentInputError,
    InconclusiveCertificateError,
    MixedCertificate,
    NonInvertibleDifferenceError,
    PureCertificate,
    extreme_points,
    verify_mixed_invertible,
    verify_pure_optimality,
)
from .config import DEFAULT_TOLERANCES, Tolerances
from .core import (
    DensityMatrix,
    DimensionMismatchError,
    IncoherentState,
    NumericalDriftWarning,
    PureState,
    SpectralDecomposition,
    ValidationError,
    as_density_matrix,
    as_incoherent_state,
    as_pure_state,
    hermitian_eig,
    is_ppt,
    operator_norm,
    partial_transpose,
    trace_norm,
)
from .entanglement import (
    BipartitePureState,
    ChannelConstructionError,
    ChannelPipelineCheck,
    MaxCorrelatedState,
    NegativityBoundCheck,
    SchmidtData,
    achieving_separable_state,
    apply_kraus,
    as_bipartite_pure,
    check_negativity_bound,
    diagonal_twirl,
    e_r_pure,
    e_tr_pure,
    negativity_pure,
    omega_channel,
    omega_kraus_operators,
    schmidt,
    schmidt_vector,
    verify_channel_pipeline,
)
from .measures import (
    L1RelEntCheck,
    as_probability_vector,
    c_l1,
    c_rel_entropy,
    c_robustness_pure,
    check_l1_vs_relent,
    f_gap,
    von_neumann_entropy,
)
from .oracle import OracleResult, c_tr_grid, c_tr_subgradient, simplex_project
from .trace_distance import (
    CanonicalForm,
    PrefixStats,
    ShortcutFlags,
    TraceDistanceResult,
    c_tr_pure,
    canonicalize,
    breakpoint_shortcuts,
    find_k,
    max_coherence_bound,
    nearest_incoherent,
    prefix_stats,
)

__all__ = [
    "__version__",
    "Tolerances",
    "DEFAULT_TOLERANCES",
    "PureState",
    "DensityMatrix",
    "IncoherentState",
    "SpectralDecomposition",
    "ValidationError",
    "DimensionMismatchError",
    "NumericalDriftWarning",
    "as_pure_state",
    "as_density_matrix",
    "as_incoherent_state",
    "hermitian_eig",
    "trace_norm",
    "operator_norm",
    "partial_transpose",
    "is_ppt",
    "CanonicalForm",
    "PrefixStats",
    "TraceDistanceResult",
    "ShortcutFlags",
    "canonicalize",
    "prefix_stats",
    "find_k",
    "nearest_incoherent",
    "c_tr_pure",
    "breakpoint_shortcuts",
    "max_coherence_bound",
    "ExtremePerturbation",
    "PureCertificate",
    "MixedCertificate",
    "IncoherentInputError",
    "InconclusiveCertificateError",
    "NonInvertibleDifferenceError",
    "extreme_points",
    "verify_pure_optimality",
    "verify_mixed_invertible",
    "OracleResult",
    "simplex_project",
    "c_tr_subgradient",
    "c_tr_grid",
    "L1RelEntCheck",
    "as_probability_vector",
    "c_l1",
    "von_neumann_entropy",
    "c_rel_entropy",
    "c_robustness_pure",
    "f_gap",
    "check_l1_vs_relent",
    "BipartitePureState",
    "SchmidtData",
    "MaxCorrelatedState",
    "NegativityBoundCheck",
    "ChannelPipelineCheck",
    "ChannelConstructionError",
    "as_bipartite_pure",
    "schmidt",
    "schmidt_vector",
    "e_tr_pure",
    "achieving_separable_state",
    "negativity_pure",
    "e_r_pure",
    "check_negativity_bound",
    "diagonal_twirl",
    "omega_kraus_operators",
    "apply_kraus",
    "omega_channel",
    "verify_channel_pipeline",
]
