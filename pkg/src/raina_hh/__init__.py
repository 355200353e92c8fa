"""Generalised mean-square fractional integrals built on Raina's function,
and per-path checks of the Hermite-Hadamard chains they satisfy."""

from .errors import (
    BudgetExceededError,
    ConfigError,
    DataError,
    DomainError,
    NormalizationDegenerateError,
    QuadratureError,
    RainaHHError,
    UnsupportedFamilyError,
)
from .fracint import (
    FracIntegralRequest,
    closed_form_moment,
    frac_integral,
    frac_integral_left,
    frac_integral_right,
    moment_identity_check,
    monomial_moments,
    rl_special_case,
)
from .hh import HHReport, hh_check_convex, hh_check_strongly_convex, reduction_equivalence
from .process import (
    Distribution,
    IntegralEstimate,
    Modulus,
    Path,
    StochasticProcess,
    mean_square_convergence_diagnostic,
    mean_square_integral,
    sample_path,
    sample_paths,
    strong_convexity_gap,
    supporting_path,
    supporting_process,
)
from .series import (
    CoefficientSequence,
    RainaKernel,
    TruncationReport,
    eval_raina,
    load_sequence,
    normalization_factor,
    parse_sigma_spec,
)

__version__ = "0.1.0"
