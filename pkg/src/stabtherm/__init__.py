"""Thermalization-time bounds and exact Lindbladian spectra for commuting
Pauli Hamiltonians."""

__version__ = "0.1.0"

from .pauli import (
    AXIS_X,
    AXIS_Z,
    BathSpec,
    DimensionError,
    Pauli,
    ResourceError,
    StabilizerModel,
    StabthermError,
    Syndrome,
    ValidationError,
    commutes,
    h_min,
    realized_bohr_frequencies,
    theta,
)
from .modelio import (
    ParseError,
    build_ising,
    build_toric,
    builtin_ordering,
    load_model,
    load_ordering,
    parse_model,
    parse_ordering,
    save_model,
    serialize_model,
    serialize_ordering,
)
from .barrier import (
    MaxPenaltyResult,
    PenaltyResult,
    SiteOrdering,
    energy_penalty,
    generalized_barrier_exact,
    low_temp_gap_bound,
    max_penalty,
    pauli_path,
)
from .hightemp import (
    AdjacencyData,
    HighTempBound,
    KappaReport,
    adjacency,
    critical_beta,
    epsilon_pair,
    first_order_beta_estimate,
    high_temp_gap_bound,
    kappa,
    kappa_numeric,
    kappa_proposition,
    kappa_simplified,
)
from .liouvillian import (
    CosetBlock,
    ErgodicityPoint,
    GapResult,
    GibbsData,
    MixingTimeBound,
    NonPrimitiveError,
    coset_representatives,
    davies_dense,
    detailed_balance_residual,
    dirichlet_blocks,
    dirichlet_dense_from_generator,
    ergodicity_check,
    fixed_point_residual,
    g_function,
    gap_from_blocks,
    gap_from_dense,
    gibbs_data,
    heatbath_dense,
    kms_metric,
    mixing_time_bound,
    oscillator_norm,
    pauli_matrix,
    poincare_check,
    spectral_gap,
    spectrum_reality_residual,
    tau_and_r,
    unitality_residual,
    variance_and_dirichlet,
)
