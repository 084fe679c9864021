//! Limit estimation along an `N` ladder and verification checks with JSON reports.

mod checks;
mod limit;
mod report;

pub use checks::{
    check_alpha_beta_inequality, check_bounds, check_cauchy_schwarz, check_covering_inequality,
    check_i2_identity, check_monotone, check_pcf_integral_identity, remark_example, FINITE_N_TOL,
    I2_IDENTITY_TOL, INTEGRAL_IDENTITY_TOL, STRICT_MARGIN,
};
pub use limit::{
    estimate_limit, estimate_slope_at_zero, LimitEstimate, SlopeEstimate, DEFAULT_CONV_TOL,
    SLOPE_WARNING_GAP,
};
pub use report::VerificationReport;
