//! Power series of the form `sum_k (±z)^k / (Gamma(k+a) Gamma(k+b))`,
//! evaluated in double-double arithmetic.
//!
//! This single shape covers `J_nu` (`a = 1, b = nu+1`), `H_nu` and `L_nu`
//! (`a = 3/2, b = nu+3/2`) once the power of `x/2` in front is split off.

use crate::error::{Result, StruveError};
use crate::gamma::rgamma;
use crate::numeric::DoubleDouble as DD;

const MAX_TERMS: usize = 20_000;

/// Largest admissible term relative to `max(|sum|, 1)`; beyond this the
/// double-double sum no longer delivers double precision.
pub(crate) const CANCELLATION_LIMIT: f64 = 1e16;

#[derive(Debug, Clone)]
pub(crate) struct GammaSeries {
    /// `(±z)^k0 / (Gamma(k0+a) Gamma(k0+b))`
    pub prefactor: f64,
    /// Relative rounding error of `prefactor`.
    pub prefactor_rel: f64,
    /// First index whose coefficient does not vanish.
    pub k0: usize,
    /// Normalized terms, `terms[0] = 1`.
    pub terms: Vec<DD>,
    pub sum: DD,
    /// Absolute error of `sum` in normalized units.
    pub error: f64,
}

impl GammaSeries {
    /// Index `k` of the `j`-th stored term.
    pub fn index(&self, j: usize) -> usize {
        self.k0 + j
    }

    /// `prefactor * sum_j w(k_j) terms[j]` with its absolute error.
    pub fn weighted(&self, w: impl Fn(usize) -> f64) -> (f64, f64) {
        let mut acc = DD::ZERO;
        let mut wmax: f64 = 0.0;
        for (j, t) in self.terms.iter().enumerate() {
            let wk = w(self.index(j));
            wmax = wmax.max(wk.abs());
            acc = acc + t.scale(wk);
        }
        let v = acc.to_f64() * self.prefactor;
        let err = (self.error * wmax.max(1.0) * 4.0) * self.prefactor.abs()
            + (self.prefactor_rel + f64::EPSILON) * v.abs();
        (v, err)
    }

    pub fn value(&self) -> (f64, f64) {
        let v = self.sum.to_f64() * self.prefactor;
        (v, self.error * self.prefactor.abs() + (self.prefactor_rel + f64::EPSILON) * v.abs())
    }
}

fn nonpositive_integer(v: f64) -> Option<usize> {
    if v <= 0.0 && v == v.round() {
        Some((-v) as usize)
    } else {
        None
    }
}

/// Sums `sum_{k>=0} (sign z)^k / (Gamma(k+a) Gamma(k+b))` where `z = h^2`.
pub(crate) fn gamma_series(h: f64, alternating: bool, a: f64, b: f64) -> Result<GammaSeries> {
    gamma_series_tol(h, alternating, a, b, 1e-18)
}

/// As [`gamma_series`], stopping once a term falls below `rel_tol` times the sum.
pub(crate) fn gamma_series_tol(
    h: f64,
    alternating: bool,
    a: f64,
    b: f64,
    rel_tol: f64,
) -> Result<GammaSeries> {
    let z = DD::from_prod(h, h);
    let zf = z.to_f64();
    let sign = if alternating { -1.0 } else { 1.0 };
    // Leading coefficients vanish while k+a or k+b is a non-positive integer.
    let k0 = [a, b]
        .iter()
        .filter_map(|&c| nonpositive_integer(c).map(|n| n + 1))
        .max()
        .unwrap_or(0);
    let prefactor =
        (sign * zf).powi(k0 as i32) * rgamma(k0 as f64 + a) * rgamma(k0 as f64 + b);
    // factorials up to 18! are exact; other gamma values carry a few ulps
    let gamma_rel = |c: f64| if c == c.round() && c <= 19.0 { 0.0 } else { 4.0 * f64::EPSILON };
    let prefactor_rel = gamma_rel(k0 as f64 + a)
        + gamma_rel(k0 as f64 + b)
        + if k0 > 0 { k0 as f64 * f64::EPSILON } else { 0.0 };

    let mut terms = Vec::with_capacity(64);
    let mut t = DD::ONE;
    let mut sum = DD::ONE;
    let mut max_abs: f64 = 1.0;
    terms.push(t);
    let mut k = k0;
    loop {
        let den = DD::from_sum(k as f64, a) * DD::from_sum(k as f64, b);
        t = t * z / den;
        if alternating {
            t = -t;
        }
        k += 1;
        let ta = t.hi.abs();
        terms.push(t);
        sum = sum + t;
        max_abs = max_abs.max(ta);
        let shrinking = den.hi.abs() > zf;
        if shrinking && (ta <= 1e-34 * max_abs || ta <= rel_tol * sum.hi.abs()) {
            break;
        }
        if ta == 0.0 {
            break;
        }
        if terms.len() > MAX_TERMS {
            return Err(StruveError::Internal(format!(
                "power series did not converge at z = {zf}"
            )));
        }
    }
    let n = terms.len() as f64;
    let last = terms.last().map(|t| t.hi.abs()).unwrap_or(0.0);
    let error = last + n * max_abs * 1e-31;
    if max_abs > CANCELLATION_LIMIT * sum.hi.abs().max(1.0) {
        return Err(StruveError::Accuracy {
            reason: format!(
                "series cancellation: largest term {max_abs:e} against sum {:e}",
                sum.hi
            ),
            estimate: sum.to_f64() * prefactor,
        });
    }
    Ok(GammaSeries {
        prefactor,
        prefactor_rel,
        k0,
        terms,
        sum,
        error,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponential_from_the_a_equals_b_equals_one_case() {
        // sum z^k/(k!)^2 with z = 1 is I_0(2) = 2.2795853023360672674
        let s = gamma_series(1.0, false, 1.0, 1.0).unwrap();
        let (v, e) = s.value();
        assert!((v - 2.279_585_302_336_067_3).abs() < 1e-15);
        assert!(e < 1e-15);
    }

    #[test]
    fn vanishing_leading_coefficients_shift_the_start() {
        // b = -1: k = 0, 1 vanish, first term k = 2 is (±z)^2/(Gamma(3)Gamma(1))
        let s = gamma_series(0.5, true, 1.0, -1.0).unwrap();
        assert_eq!(s.k0, 2);
        assert!((s.prefactor - 0.0625 / 2.0).abs() < 1e-18);
    }

    #[test]
    fn cancellation_is_reported() {
        let r = gamma_series(40.0, true, 1.5, 1.5);
        assert!(matches!(r, Err(StruveError::Accuracy { .. })));
    }
}
