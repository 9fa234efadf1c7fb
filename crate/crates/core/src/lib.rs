//! Struve, modified Struve and Bessel functions, zeros of `H_nu`, product
//! and partial-fraction expansions, and grid checks of Turán-type
//! inequalities.

#![allow(clippy::excessive_precision)]

pub mod bessel;
pub mod error;
pub mod expansions;
pub mod gamma;
pub mod inequality;
pub mod numeric;
pub mod selftest;
mod series;
pub mod struve;
pub mod types;
pub mod zeros;

pub use bessel::{bessel_j, bessel_j_zero, bessel_y, BesselZeroTable};
pub use error::{Result, StruveError};
pub use expansions::{
    bessel_sandwich_h, hadamard_product_eval, improved_quotient_bound, j_series_h,
    log_derivative_h, mittag_leffler_ratio, mittag_leffler_ratio_modified,
};
pub use gamma::{beta, gamma, ln_gamma, rgamma};
pub use inequality::{
    asymptotic_constant_probe, check, check_theorem1, check_theorem2, laguerre_margin,
    scan_region, turan_delta_h, turan_delta_k, turan_delta_l, GridSpec, InequalityReport,
    MarginPoint, PointStatus, ProbeSide, Range, Theorem1Part, Theorem2Part, TheoremId,
};
pub use struve::{
    normalized, ode_residual, recurrence_residual, struve_h, struve_h_integral, struve_h_series,
    struve_k, struve_l, Recurrence,
};
pub use types::{
    EvalMethod, EvalResult, FunctionId, NormalizedId, NormalizedKind, TruncatedExpansion,
};
pub use zeros::{struve_h_zero, zero_reciprocal_square_sum, StruveZeroTable, ZeroCertificate};
