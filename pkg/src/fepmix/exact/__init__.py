"""Exhaustive small-system analysis: generators, stationary laws,
transient distances, spectra and measure comparisons."""
from .ensembles import (
    canonical_correlation_ratio,
    canonical_marginal,
    correlation_ratio,
    equivalence_error,
    grand_canonical,
    grand_canonical_normalisation_error,
)
from .evolution import MixingTime, TruncationError, TvCurve, evolve, evolve_rows, mixing_time_exact, tv_curve
from .generators import FAMILIES, RateMatrix, StateSpaceOverflow, build_generator, ergodic_mask
from .intertwining import (
    circle_zrp_error,
    fep_obep_error,
    fep_sep_error,
    fep_zrp_error,
    phi_rate_mismatch,
)
from .rare import aldous_brown_check, first_pile_one_exact
from .spectral import (
    a1_moments,
    a1_statistic,
    eigencheck_a1,
    eigencheck_a1_lifted,
    restrict_to_ergodic,
    spectral_gap,
)
from .stationary import (
    ReducibleChainError,
    closed_classes,
    detailed_balance_error,
    solve_stationary,
    stationarity_residual,
    stationary,
)

__all__ = [
    "FAMILIES", "RateMatrix", "StateSpaceOverflow", "build_generator", "ergodic_mask",
    "stationary", "solve_stationary", "closed_classes", "ReducibleChainError",
    "stationarity_residual", "detailed_balance_error",
    "evolve", "evolve_rows", "tv_curve", "mixing_time_exact", "TvCurve", "MixingTime", "TruncationError",
    "spectral_gap", "restrict_to_ergodic", "eigencheck_a1", "eigencheck_a1_lifted", "a1_statistic", "a1_moments",
    "aldous_brown_check", "first_pile_one_exact",
    "grand_canonical", "grand_canonical_normalisation_error", "canonical_marginal", "equivalence_error",
    "correlation_ratio", "canonical_correlation_ratio",
    "fep_sep_error", "fep_zrp_error", "fep_obep_error", "circle_zrp_error", "phi_rate_mismatch",
]
