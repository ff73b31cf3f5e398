"""Numerical laboratory for finite absorbing discrete-time quantum walks.

1D: exact and asymptotic eigensystem of the absorbing two-boundary walk
operator, time evolution with absorption accounting, and entropy-based
detection of fractional revivals.  2D: the absorbing Grover walk on a box,
its localized plaquette eigenvectors, and decay of delocalized states.
"""

from .coin import CoinParameters, build_coin, hadamard
from .charpoly import (
    CharPolyEvaluation,
    charpoly_closed,
    charpoly_eval,
    charpoly_evaluation,
    f_sequence,
    omega_pair,
)
from .errors import (
    AqwalkError,
    BranchAmbiguity,
    BranchDegenerate,
    DegenerateCoin,
    FullyLocalized,
    IOFailure,
    NewtonDivergence,
    NoConvergence,
    NoMinimum,
    NormViolation,
    NotADistribution,
    NullSpaceEmpty,
    NumericalBlowup,
    ResourceLimit,
    VanishedState,
)
from .grover2d import (
    GroverState2D,
    PlaquetteVector,
    alternating_eigenvectors,
    apply_step_2d,
    cell_distribution,
    centered_state_2d,
    delta_state_2d,
    entropy_series_2d,
    grover_coin,
    localized_eigenvectors,
    orthogonalize_initial,
    stable_distribution_2d,
)
from .output import ExperimentConfig, load_config, save_config, write_csv, write_pgm
from .revivals import (
    EntropySeries,
    RevivalSchedule,
    eigenvalue_power_approx,
    entropy_series,
    estimate_rho,
    find_entropy_minima,
    matrix_power_heatmap,
    peak_count,
    refine_entropy_minimum,
    revival_ray_angles,
    revival_times,
    shannon_entropy,
    tau,
)
from .spectrum import (
    SpectralPoint,
    SpectrumSet,
    eigenvector_asymptotic,
    eigenvector_exact,
    full_spectrum,
    kernel_basis,
    lambda_asymptotic,
    lambda_of_theta,
    sector_bound,
    sector_bound_first_order,
    sector_contains,
    select_regime,
    solve_theta,
    stabilization_time,
    theta_seed,
)
from .walk1d import (
    AbsorptionRecord,
    WalkState1D,
    absorption_probability,
    apply_step,
    conditional_distribution,
    delta_state,
    dense_operator,
    evolve,
)

__version__ = "0.1.0"
