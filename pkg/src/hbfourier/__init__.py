"""Numerics for entire functions F(z) = int_0^sigma e^{izt} dmu(t).

Measures are atoms plus a piecewise-linear density on [0, sigma]; on top of
the exact transform evaluations the package verifies the sharp Wronskian
inequality with equality detection, evaluates the sine-kernel interpolation
series, counts and classifies zeros against the Hermite-Biehler criteria, and
runs the positive-definiteness checks.
"""

from .measure import (
    Atom,
    MassSummary,
    PiecewiseLinearDensity,
    ScenarioError,
    StieltjesMeasure,
    fejer_profile,
    from_fejer,
    from_monomial_density,
    from_pd_profile,
    mass_summary,
    parse_scenario,
)
from .transforms import (
    IdentityResiduals,
    RealTransforms,
    TransformSample,
    eval_CS,
    eval_Delta,
    eval_Delta_reflected,
    eval_E,
    eval_F,
    eval_F_derivative,
    eval_F_scaled,
    eval_GH,
    eval_h_alpha,
    identity_residuals,
    real_transforms,
    transform_sample,
)
from .inequality import (
    EqualityWitness,
    HypothesisKind,
    InequalityReport,
    OmegaConfig,
    borderline_growth_d,
    check_inequality,
    default_grid,
    eval_D,
    eval_d,
    fit_equality_witness,
    margin_values,
)
from .sampling import SampledFunction, SeriesEvaluation, from_omega_config, interp_lhs, interp_rhs
from .zeros import (
    BoundaryZeroError,
    Classification,
    DiagnosticFailure,
    HypothesisViolation,
    Rectangle,
    ZeroCountResult,
    check_derivative_hb,
    classify,
    count_h_alpha_zeros,
    count_zeros,
    delta_xi,
    find_imaginary_zero,
    find_real_zeros,
    locate_zero,
)
from .posdef import (
    AutocorrelationReport,
    MonotonicityReport,
    PosDefProfile,
    StepStructure,
    alternating_sign_table,
    autocorr_h,
    check_h_hat_identity,
    cm_finite_difference_check,
    damped_kernel_integral,
    fejer_cosine_poly,
    h_prime_zero_checks,
    laplace_limit_check,
    monotone_density_S,
    recover_pd_profile,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
