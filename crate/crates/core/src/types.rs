//! Result and identifier types shared by the evaluators, the inequality
//! checks and the command-line front end.

use serde::Serialize;
use std::fmt;

/// Representation actually used to produce a value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EvalMethod {
    Series,
    Integral,
    Asymptotic,
    Product,
    JSeries,
    ClosedForm,
    ViaHMinusY,
    /// Steed's continued fractions for Bessel functions.
    ContinuedFraction,
    /// Three-term recurrence in the order from evaluable neighbours.
    Recurrence,
    /// `H = Y + K` with both addends taken from their large-argument forms.
    YPlusK,
}

impl EvalMethod {
    pub fn as_str(self) -> &'static str {
        match self {
            EvalMethod::Series => "series",
            EvalMethod::Integral => "integral",
            EvalMethod::Asymptotic => "asymptotic",
            EvalMethod::Product => "product",
            EvalMethod::JSeries => "j_series",
            EvalMethod::ClosedForm => "closed_form",
            EvalMethod::ViaHMinusY => "via_h_minus_y",
            EvalMethod::ContinuedFraction => "continued_fraction",
            EvalMethod::Recurrence => "recurrence",
            EvalMethod::YPlusK => "y_plus_k",
        }
    }
}

impl fmt::Display for EvalMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A function value with its provenance and an absolute error estimate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EvalResult {
    pub value: f64,
    pub method: EvalMethod,
    pub est_error: f64,
    /// Series terms or integrand evaluations spent.
    pub work: usize,
}

impl EvalResult {
    pub fn new(value: f64, method: EvalMethod, est_error: f64, work: usize) -> Self {
        Self {
            value,
            method,
            est_error: est_error.abs(),
            work,
        }
    }

    pub fn exact(value: f64, method: EvalMethod) -> Self {
        Self::new(value, method, f64::EPSILON * value.abs(), 1)
    }

    /// Multiplies value and error by a constant, keeping the method.
    pub fn scaled(self, k: f64) -> Self {
        Self::new(
            self.value * k,
            self.method,
            (self.est_error * k).abs() + f64::EPSILON * (self.value * k).abs(),
            self.work,
        )
    }
}

/// Function families exposed by the evaluator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum FunctionId {
    H,
    L,
    K,
    J,
    Y,
    CalH,
    BbH,
    CalK,
}

impl std::str::FromStr for FunctionId {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        Ok(match s {
            "H" => FunctionId::H,
            "L" => FunctionId::L,
            "K" => FunctionId::K,
            "J" => FunctionId::J,
            "Y" => FunctionId::Y,
            "calH" => FunctionId::CalH,
            "bbH" => FunctionId::BbH,
            "calK" => FunctionId::CalK,
            _ => return Err(format!("unknown function `{s}`")),
        })
    }
}

/// The three normalized functions.
///
/// * `CalH`: `sqrt(pi) 2^nu x^(-nu-1) Gamma(nu+3/2) H_nu(x)`, even and entire, equal to 1 at 0.
/// * `BbH`: `2^nu x^(-nu) Gamma(nu+1/2) H_nu(x)`.
/// * `CalK`: `2^nu x^(-nu) Gamma(nu+1/2) K_nu(x)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum NormalizedKind {
    CalH,
    BbH,
    CalK,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NormalizedId {
    pub kind: NormalizedKind,
    pub nu: f64,
}

impl NormalizedId {
    pub fn new(kind: NormalizedKind, nu: f64) -> Self {
        Self { kind, nu }
    }
}

/// A truncated sum or product together with a bound on what was left out.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TruncatedExpansion {
    pub partial: f64,
    pub n_terms: usize,
    pub tail_bound: f64,
}
