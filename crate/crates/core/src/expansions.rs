//! Product and partial-fraction expansions over the zeros of `H_nu`, the
//! Bessel-series form of `H_nu`, and the Bessel bounds for `H_nu`.
//!
//! Tail bounds use only `h_(k) >= (k - 1/2) pi` (zeros counted with
//! multiplicity), so every `tail_bound` is rigorous. The partial-fraction
//! sums additionally add the exact remainders of `sum 1/h^2` and
//! `sum 1/h^4`, leaving an `O(x^5 / N^5)` tail.

use crate::bessel::{bessel_j, bessel_j_zero};
use crate::error::{domain, ensure_finite, Result, StruveError};
use crate::gamma::ln_gamma;
use crate::numeric::CompensatedSum;
use crate::struve::struve_h;
use crate::types::TruncatedExpansion;
use crate::zeros::{
    lower_bound_tail, rayleigh_sum_h, rayleigh_sum_h4, zero_lower_bound, zero_table,
    StruveZeroTable,
};
use std::f64::consts::PI;

/// Minimum distance from a pole for the ratio expansions.
pub const POLE_RADIUS: f64 = 1e-6;

fn head(nu: f64, n_terms: usize) -> Result<StruveZeroTable> {
    if n_terms == 0 {
        return domain("at least one zero is required");
    }
    let t = zero_table(nu, n_terms)?;
    Ok(StruveZeroTable {
        nu,
        zeros: t.zeros[..n_terms].to_vec(),
        multiplicity: t.multiplicity[..n_terms].to_vec(),
        bracket: Vec::new(),
        certificate: Vec::new(),
    })
}

/// `prod_{n <= N} (1 - x^2/h_{nu,n}^2)^mult`, converging to the normalized `H`.
pub fn hadamard_product_eval(nu: f64, x: f64, n_terms: usize) -> Result<TruncatedExpansion> {
    ensure_finite("x", x)?;
    let t = head(nu, n_terms)?;
    let x2 = x * x;
    let mut p = 1.0;
    for (&z, &m) in t.zeros.iter().zip(&t.multiplicity) {
        if x.abs() == z {
            return Ok(TruncatedExpansion {
                partial: 0.0,
                n_terms,
                tail_bound: 0.0,
            });
        }
        let f = (1.0 - x / z) * (1.0 + x / z);
        p *= f.powi(m as i32);
    }
    let counted = t.counted();
    let next = zero_lower_bound(counted + 1);
    let tail_bound = if x2 < next * next {
        // omitted factors lie in [exp(-s), 1]
        let s = x2 * lower_bound_tail(counted, 1) / (1.0 - x2 / (next * next));
        p.abs() * -(-s).exp_m1()
    } else {
        f64::INFINITY
    };
    Ok(TruncatedExpansion {
        partial: p,
        n_terms,
        tail_bound: tail_bound + 4.0 * f64::EPSILON * counted as f64 * p.abs(),
    })
}

struct PoleSums {
    /// `sum mult * 2x / (x^2 - h^2)`
    fraction: f64,
    s1: f64,
    s2: f64,
    counted: usize,
}

fn pole_sums(t: &StruveZeroTable, x: f64, sign: f64) -> PoleSums {
    let mut fr = CompensatedSum::new();
    let mut s1 = CompensatedSum::new();
    let mut s2 = CompensatedSum::new();
    for (&z, &m) in t.zeros.iter().zip(&t.multiplicity) {
        let m = m as f64;
        let z2 = z * z;
        // x^2 - h^2 or x^2 + h^2, factored to keep precision near the pole
        let den = if sign < 0.0 { (x - z) * (x + z) } else { x * x + z2 };
        fr.add(m * 2.0 * x / den);
        s1.add(m / z2);
        s2.add(m / (z2 * z2));
    }
    PoleSums {
        fraction: fr.value(),
        s1: s1.value(),
        s2: s2.value(),
        counted: t.counted(),
    }
}

fn remainder_bound(x: f64, counted: usize, with_pole: bool) -> f64 {
    let k = counted as f64 - 0.5;
    let base = 2.0 * x.powi(5) / (5.0 * PI.powi(6) * k.powi(5));
    if !with_pole {
        return base;
    }
    let next = zero_lower_bound(counted + 1);
    let q = x * x / (next * next);
    if q >= 1.0 {
        f64::INFINITY
    } else {
        base / (1.0 - q)
    }
}

fn check_poles(t: &StruveZeroTable, x: f64) -> Result<()> {
    for (i, &z) in t.zeros.iter().enumerate() {
        if (x - z).abs() < POLE_RADIUS {
            return Err(StruveError::PoleProximity {
                x,
                index: i + 1,
                zero: z,
                radius: POLE_RADIUS,
            });
        }
    }
    Ok(())
}

fn check_positive(x: f64) -> Result<()> {
    ensure_finite("x", x)?;
    if x <= 0.0 {
        return domain(format!("ratio expansions require x > 0, got {x}"));
    }
    Ok(())
}

/// `H_{nu-1}(x)/H_nu(x) = (2 nu + 1)/x + sum mult * 2x/(x^2 - h^2)`.
pub fn mittag_leffler_ratio(nu: f64, x: f64, n_terms: usize) -> Result<TruncatedExpansion> {
    check_positive(x)?;
    let t = head(nu, n_terms)?;
    check_poles(&t, x)?;
    let s = pole_sums(&t, x, -1.0);
    // sum_{n>N} 2x/(x^2-h^2) = -2x sum 1/h^2 - 2x^3 sum 1/h^4 - 2x^5 sum 1/(h^4 (h^2-x^2))
    let corr = -2.0 * x * (rayleigh_sum_h(nu) - s.s1) - 2.0 * x.powi(3) * (rayleigh_sum_h4(nu) - s.s2);
    let partial = (2.0 * nu + 1.0) / x + s.fraction + corr;
    Ok(TruncatedExpansion {
        partial,
        n_terms,
        tail_bound: remainder_bound(x, s.counted, true) + 8.0 * f64::EPSILON * (partial.abs() + x),
    })
}

/// `x H'_nu(x)/H_nu(x) = nu + 1 + sum mult * 2x^2/(x^2 - h^2)`.
pub fn log_derivative_h(nu: f64, x: f64, n_terms: usize) -> Result<TruncatedExpansion> {
    let r = mittag_leffler_ratio(nu, x, n_terms)?;
    // x H_{nu-1}/H_nu = nu + x H'/H
    Ok(TruncatedExpansion {
        partial: x * r.partial - nu,
        n_terms,
        tail_bound: x * r.tail_bound,
    })
}

/// `L_{nu-1}(x)/L_nu(x) = (2 nu + 1)/x + sum mult * 2x/(x^2 + h^2)`.
pub fn mittag_leffler_ratio_modified(
    nu: f64,
    x: f64,
    n_terms: usize,
) -> Result<TruncatedExpansion> {
    check_positive(x)?;
    let t = head(nu, n_terms)?;
    let s = pole_sums(&t, x, 1.0);
    let corr = 2.0 * x * (rayleigh_sum_h(nu) - s.s1) - 2.0 * x.powi(3) * (rayleigh_sum_h4(nu) - s.s2);
    let partial = (2.0 * nu + 1.0) / x + s.fraction + corr;
    Ok(TruncatedExpansion {
        partial,
        n_terms,
        tail_bound: remainder_bound(x, s.counted, false) + 8.0 * f64::EPSILON * (partial.abs() + x),
    })
}

/// `H_nu(x) = sqrt(x/(2 pi)) sum_n (x/2)^n / (n! (n + 1/2)) J_{n+nu+1/2}(x)`.
///
/// The tail uses `|J_mu| <= 1` for `mu >= 0`.
pub fn j_series_h(nu: f64, x: f64, n_terms: usize) -> Result<TruncatedExpansion> {
    ensure_finite("nu", nu)?;
    ensure_finite("x", x)?;
    if nu <= -1.0 {
        return domain(format!("Bessel series requires nu > -1, got {nu}"));
    }
    if x <= 0.0 || x > 20.0 {
        return domain(format!("Bessel series requires 0 < x <= 20, got {x}"));
    }
    let h = 0.5 * x;
    let mut c = 1.0; // (x/2)^n / n!
    let mut sum = CompensatedSum::new();
    for n in 0..n_terms {
        let j = bessel_j(n as f64 + nu + 0.5, x)?.value;
        sum.add(c / (n as f64 + 0.5) * j);
        c *= h / (n + 1) as f64;
    }
    let pre = (x / (2.0 * PI)).sqrt();
    let n = n_terms as f64;
    let tail = if n + 1.0 > h {
        pre * c / (n + 0.5) / (1.0 - h / (n + 1.0))
    } else {
        f64::INFINITY
    };
    Ok(TruncatedExpansion {
        partial: pre * sum.value(),
        n_terms,
        tail_bound: tail,
    })
}

/// Lower and upper Bessel bounds for `H_nu(x)` on `0 < x < j_{nu,1}`,
/// `|nu| < 1/2`:
/// `g x J_nu(x) < H_nu(x) < g j^2/(j^2 - x^2) x J_nu(x)` with
/// `g = Gamma(nu+1) / (sqrt(pi) Gamma(nu+3/2))`.
pub fn bessel_sandwich_h(nu: f64, x: f64) -> Result<(f64, f64)> {
    ensure_finite("nu", nu)?;
    ensure_finite("x", x)?;
    if nu.abs() >= 0.5 {
        return domain(format!("Bessel bounds require |nu| < 1/2, got {nu}"));
    }
    let j1 = bessel_j_zero(nu, 1)?;
    if x <= 0.0 || x >= j1 {
        return domain(format!("Bessel bounds require 0 < x < j_(nu,1) = {j1}, got {x}"));
    }
    let g = (ln_gamma(nu + 1.0)? - ln_gamma(nu + 1.5)?).exp() / PI.sqrt();
    let base = g * x * bessel_j(nu, x)?.value;
    let j2 = j1 * j1;
    Ok((base, base * j2 / ((j1 - x) * (j1 + x))))
}

/// Upper bound `2 nu + 1 + (2/j_{nu,1}^2 - 1/(2(nu+1))) x^2` for
/// `x H_{nu-1}(x)/H_nu(x)` on `0 < x < h_{nu,1}`, `|nu| <= 1/2`.
pub fn improved_quotient_bound(nu: f64, x: f64) -> Result<f64> {
    ensure_finite("nu", nu)?;
    ensure_finite("x", x)?;
    if nu.abs() > 0.5 {
        return domain(format!("quotient bound requires |nu| <= 1/2, got {nu}"));
    }
    let h1 = crate::zeros::struve_h_zero(nu, 1)?;
    if x <= 0.0 || x >= h1 {
        return domain(format!("quotient bound requires 0 < x < h_(nu,1) = {h1}, got {x}"));
    }
    let j1 = bessel_j_zero(nu, 1)?;
    Ok(2.0 * nu + 1.0 + (2.0 / (j1 * j1) - 0.5 / (nu + 1.0)) * x * x)
}

/// `x H_{nu-1}(x) / H_nu(x)` by direct evaluation.
pub fn quotient_direct(nu: f64, x: f64) -> Result<f64> {
    Ok(x * struve_h(nu - 1.0, x)?.value / struve_h(nu, x)?.value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::struve::{normalized, struve_h_prime, struve_l};
    use crate::types::{NormalizedId, NormalizedKind};
    use std::f64::consts::FRAC_PI_2;

    #[test]
    fn products() {
        let r = hadamard_product_eval(-0.5, FRAC_PI_2, 500).unwrap();
        assert!((r.partial - 2.0 / PI).abs() <= r.tail_bound);
        let r = hadamard_product_eval(0.3, 0.0, 1).unwrap();
        assert_eq!(r.partial, 1.0);
        let r = hadamard_product_eval(0.5, PI, 500).unwrap();
        assert!((r.partial - 4.0 / (PI * PI)).abs() <= r.tail_bound);
        let r = hadamard_product_eval(0.0, 3.0, 200).unwrap();
        let n = normalized(NormalizedId::new(NormalizedKind::CalH, 0.0), 3.0).unwrap().value;
        assert!((r.partial - n).abs() <= r.tail_bound + 1e-9);
    }

    #[test]
    fn ratios_at_closed_form_order() {
        let r = mittag_leffler_ratio(-0.5, 1.0, 2000).unwrap();
        assert!((r.partial - (1f64.tan().recip() - 1.0)).abs() <= r.tail_bound + 1e-14);
        let r = mittag_leffler_ratio(-0.5, FRAC_PI_2, 2000).unwrap();
        assert!((r.partial + 2.0 / PI).abs() < 1e-12);
        let r = mittag_leffler_ratio_modified(-0.5, 1.0, 2000).unwrap();
        assert!((r.partial - (1f64.tanh().recip() - 1.0)).abs() < 1e-12);
        let r = mittag_leffler_ratio_modified(-0.5, 1e-4, 2000).unwrap();
        assert!((r.partial - 1e-4 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn ratios_against_direct_evaluation() {
        let r = mittag_leffler_ratio(0.0, 1.0, 2000).unwrap();
        let d = struve_h(-1.0, 1.0).unwrap().value / struve_h(0.0, 1.0).unwrap().value;
        assert!((r.partial - d).abs() < r.tail_bound + 1e-10);
        let r = mittag_leffler_ratio_modified(0.0, 2.0, 2000).unwrap();
        let d = struve_l(-1.0, 2.0).unwrap().value / struve_l(0.0, 2.0).unwrap().value;
        assert!((r.partial - d).abs() < r.tail_bound + 1e-10);
        for (nu, x) in [(-0.5, 1.0), (0.5, 1.0)] {
            let r = log_derivative_h(nu, x, 2000).unwrap();
            let d = x * struve_h_prime(nu, x).unwrap().value / struve_h(nu, x).unwrap().value;
            assert!((r.partial - d).abs() < 1e-6);
        }
        let r = log_derivative_h(-0.5, 1e-4, 2000).unwrap();
        assert!((r.partial - 0.5).abs() < 1e-6);
    }

    #[test]
    fn pole_is_rejected() {
        let h1 = crate::zeros::struve_h_zero(0.0, 1).unwrap();
        let e = mittag_leffler_ratio(0.0, h1 + 1e-7, 10).unwrap_err();
        assert!(matches!(e, StruveError::PoleProximity { index: 1, .. }));
    }

    #[test]
    fn bessel_series_form() {
        let r = j_series_h(0.5, PI, 40).unwrap();
        assert!((r.partial - 2.0 * 2f64.sqrt() / PI).abs() < 1e-8);
        let r = j_series_h(0.0, 1.0, 40).unwrap();
        assert!((r.partial - struve_h(0.0, 1.0).unwrap().value).abs() < 1e-8);
        let r = j_series_h(1.0, 1e-6, 10).unwrap();
        let d = struve_h(1.0, 1e-6).unwrap().value;
        assert!(((r.partial - d) / d).abs() < 1e-6);
    }

    #[test]
    fn sandwich_and_quotient() {
        for (nu, x) in [(0.0, 1.0), (0.4, 2.0)] {
            let (lo, hi) = bessel_sandwich_h(nu, x).unwrap();
            let v = struve_h(nu, x).unwrap().value;
            assert!(lo < v && v < hi, "nu={nu} x={x}: {lo} {v} {hi}");
        }
        let (lo, hi) = bessel_sandwich_h(-0.4, 0.5).unwrap();
        assert!(lo < hi);
        let b = improved_quotient_bound(0.5, 1.0).unwrap();
        assert!((b - (2.0 + 2.0 / (PI * PI) - 1.0 / 3.0)).abs() < 1e-14);
        assert!(quotient_direct(0.5, 1.0).unwrap() < b);
        let b = improved_quotient_bound(0.0, 1e-6).unwrap();
        assert!((b - 1.0).abs() < 1e-11);
        // at nu = -1/2 the first Bessel zero is pi/2 and the bound holds
        let b = improved_quotient_bound(-0.5, 1.0).unwrap();
        assert!((b - (8.0 / (PI * PI) - 1.0)).abs() < 1e-13);
        assert!(1f64.tan().recip() - 1.0 < b);
    }
}
