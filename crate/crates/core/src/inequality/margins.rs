//! Per-point margins. Each returns `lhs`, `rhs` and a scale so that
//! `(lhs - rhs) / scale >= 0` means the inequality holds at the point.
//! No region checks happen here; the scanner applies them.

use super::quantities::{turan_h, turan_k, turan_l, Est};
use super::TheoremId;
use crate::bessel::bessel_j_zero;
use crate::error::{domain, Result};
use crate::gamma::{gamma, ln_gamma};
use crate::struve::{
    calh_derivative, calk_nu_derivative, calk_x_derivative, laplace_moment, struve_h, struve_k,
    struve_k_prime, MomentWeight,
};
use crate::types::EvalMethod;
use crate::zeros::struve_h_zero;
use std::f64::consts::PI;

#[derive(Debug, Clone, Copy)]
pub(crate) struct PointValue {
    pub lhs: f64,
    pub rhs: f64,
    pub scale: f64,
    pub method: EvalMethod,
    pub est_error: f64,
    pub work: usize,
}

impl PointValue {
    fn new(lhs: Est, rhs: Est, scale: f64, method: EvalMethod) -> Self {
        PointValue {
            lhs: lhs.v,
            rhs: rhs.v,
            scale: scale.max(1.0),
            method,
            est_error: lhs.e + rhs.e,
            work: lhs.w + rhs.w,
        }
    }

    /// Several nonnegative components, each normalized by its own scale;
    /// `lhs` is the smallest normalized component.
    fn components(parts: &[(Est, f64)], method: EvalMethod) -> Self {
        let mut lhs = f64::INFINITY;
        let mut err: f64 = 0.0;
        let mut work = 0;
        for (c, s) in parts {
            let s = s.max(1.0);
            let v = c.v / s;
            if v < lhs {
                lhs = v;
                err = c.e / s;
            }
            work += c.w;
        }
        PointValue { lhs, rhs: 0.0, scale: 1.0, method, est_error: err, work }
    }

    pub fn margin(&self) -> f64 {
        (self.lhs - self.rhs) / self.scale
    }
}

fn calk(nu: f64, x: f64) -> Result<Est> {
    Ok(calk_x_derivative(nu, 0, x)?.into())
}

/// `(-1)^n K_nu^(n)(x)` by the Leibniz rule on `c x^nu M_0(x)`.
pub(crate) fn k_signed_derivative(nu: f64, n: u32, x: f64) -> Result<Est> {
    let c = ((1.0 - nu) * std::f64::consts::LN_2 - 0.5 * PI.ln() - ln_gamma(nu + 0.5)?).exp();
    let mut acc = Est::exact(0.0);
    let mut binom = 1.0;
    for k in 0..=n {
        let j = n - k;
        let ff: f64 = (0..j).map(|i| nu - i as f64).product();
        let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
        let m: Est = {
            let r = laplace_moment(nu, x, MomentWeight::Power(k), 1e-14)?;
            Est { v: r.value, e: r.error, w: r.evals }
        };
        acc = acc + m * (c * binom * sign * ff * x.powf(nu - j as f64));
        binom = binom * (n - k) as f64 / (k + 1) as f64;
    }
    Ok(acc)
}

fn log_convex_midpoint(mid: Est, lo: Est, hi: Est) -> (Est, f64) {
    let sq = mid * mid;
    (lo * hi - sq, sq.v.abs())
}

fn h_scale(h: Est) -> f64 {
    h.v * h.v
}

pub(crate) fn sandwich_bounds(nu: f64, x: f64) -> Result<(f64, f64, f64)> {
    let j1 = bessel_j_zero(nu, 1)?;
    let g = (ln_gamma(nu + 1.0)? - ln_gamma(nu + 1.5)?).exp() / PI.sqrt();
    let base = g * x * crate::bessel::bessel_j(nu, x)?.value;
    Ok((base, base * j1 * j1 / ((j1 - x) * (j1 + x)), j1))
}

pub(crate) fn quotient_bound(nu: f64, x: f64) -> Result<f64> {
    let j1 = bessel_j_zero(nu, 1)?;
    Ok(2.0 * nu + 1.0 + (2.0 / (j1 * j1) - 0.5 / (nu + 1.0)) * x * x)
}

/// Evaluates the margin of `id` at one point.
pub(crate) fn point(id: TheoremId, nu: f64, x: f64, y: Option<f64>) -> Result<PointValue> {
    use TheoremId::*;
    let ex = Est::exact;
    Ok(match id {
        T1a | T1b | T1d => {
            let (lo, c, hi, m) = turan_h(nu, x)?;
            PointValue::new(c * c - lo * hi, ex(0.0), h_scale(c), m)
        }
        T1cLag => {
            let (lo, c, hi, m) = turan_h(nu, x)?;
            PointValue::new(c * c - lo * hi, c * hi * (1.0 / x), h_scale(c), m)
        }
        T1cNew => {
            let (lo, c, hi, m) = turan_h(nu, x)?;
            PointValue::new(c * c - lo * hi, c * c * (1.0 / (2.0 * nu + 3.0)), h_scale(c), m)
        }
        T1e => {
            let (lo, c, hi, m) = turan_h(nu, x)?;
            PointValue::new(c * c * (1.0 / (nu + 0.5)), c * c - lo * hi, h_scale(c), m)
        }
        TuranL => {
            let (lo, c, hi, m) = turan_l(nu, x)?;
            PointValue::new(c * c - lo * hi, ex(0.0), h_scale(c), m)
        }
        Lag(order) => {
            let orders: Vec<u32> = match order {
                Some(m) => vec![m],
                None => vec![1, 2, 3],
            };
            let mut parts = Vec::with_capacity(orders.len());
            for m in orders {
                let a: Est = calh_derivative(nu, m - 1, x)?.into();
                let b: Est = calh_derivative(nu, m, x)?.into();
                let c: Est = calh_derivative(nu, m + 1, x)?.into();
                parts.push((b * b - a * c, b.v * b.v));
            }
            PointValue::components(&parts, EvalMethod::Series)
        }
        BoundSandwich => {
            let h: Est = struve_h(nu, x)?.into();
            let (lo, hi, _) = sandwich_bounds(nu, x)?;
            let s = h_scale(h);
            PointValue::components(&[(h - ex(lo), s), (ex(hi) - h, s)], h_method(nu, x)?)
        }
        BoundQuotient => {
            let hm: Est = struve_h(nu - 1.0, x)?.into();
            let h: Est = struve_h(nu, x)?.into();
            let q = hm * ex(x) / h;
            let b = quotient_bound(nu, x)?;
            let s = q.v * q.v;
            PointValue::components(
                &[(ex(b) - q, s), (ex(2.0 * nu + 1.0 - b), 1.0)],
                h_method(nu, x)?,
            )
        }
        T2aCm => {
            let mut parts = Vec::new();
            for n in 0..=4 {
                let d: Est = calk_x_derivative(nu, n, x)?.into();
                parts.push((d, d.v.abs()));
            }
            let delta = (0.5 * x).min(0.25);
            let (lc, s) = log_convex_midpoint(calk(nu, x)?, calk(nu, x - delta)?, calk(nu, x + delta)?);
            parts.push((lc, s));
            PointValue::components(&parts, EvalMethod::Integral)
        }
        T2aE1 => {
            let k: Est = struve_k(nu, x, 1e-14)?.into();
            let kp: Est = struve_k_prime(nu, x)?.into();
            let r = kp * ex(x) / k;
            PointValue::new(ex(nu), r, nu.abs(), EvalMethod::Integral)
        }
        T2bCm => {
            let mut parts = Vec::new();
            for m in 0..=3 {
                let d: Est = calk_nu_derivative(nu, m, x)?.into();
                parts.push((d, d.v.abs()));
            }
            let delta = (0.5 * (nu + 0.5)).min(0.25);
            let (lc, s) = log_convex_midpoint(calk(nu, x)?, calk(nu - delta, x)?, calk(nu + delta, x)?);
            parts.push((lc, s));
            PointValue::components(&parts, EvalMethod::Integral)
        }
        T2bT1 => {
            let (lo, c, hi) = turan_k(nu, x)?;
            PointValue::new(c * c * (1.0 / (nu + 0.5)), c * c - lo * hi, h_scale(c), EvalMethod::Integral)
        }
        T2cCm => {
            let mut parts = Vec::new();
            for n in 0..=4 {
                let d = k_signed_derivative(nu, n, x)?;
                parts.push((d, d.v.abs()));
            }
            let delta = (0.5 * x).min(0.25);
            let k = |t: f64| -> Result<Est> { Ok(struve_k(nu, t, 1e-14)?.into()) };
            let (lc, s) = log_convex_midpoint(k(x)?, k(x - delta)?, k(x + delta)?);
            parts.push((lc, s));
            PointValue::components(&parts, EvalMethod::Integral)
        }
        T2dMono => {
            let g = |t: f64| -> Result<Est> {
                let k: Est = struve_k(nu, t, 1e-14)?.into();
                let kp: Est = struve_k_prime(nu, t)?.into();
                Ok(kp * ex(t) / k)
            };
            let (a, b) = (g(x)?, g(x + super::MONO_STEP)?);
            PointValue::new(b, a, a.v.abs(), EvalMethod::Integral)
        }
        T2dTuranK => {
            let (lo, c, hi) = turan_k(nu, x)?;
            PointValue::new(c * hi * (2.0 / x), c * c - lo * hi, h_scale(c), EvalMethod::Integral)
        }
        T2eR1 => {
            let k = calk(nu, x)?;
            let bound = gamma(-nu)? / gamma(0.5 - nu)?;
            PointValue::new(ex(bound), k, bound * bound, EvalMethod::Integral)
        }
        T2fR2 => {
            let y = match y {
                Some(y) => y,
                None => return domain("T2f_R2 needs a y coordinate"),
            };
            let r = gamma(0.5 - nu)? / gamma(-nu)?;
            let s = calk(nu, x + y)?;
            let p = calk(nu, x)? * calk(nu, y)? * r;
            PointValue::new(s, p, s.v * s.v, EvalMethod::Integral)
        }
        T2gR3 | T2gR3Rev => {
            let a = calk(0.5, x)? * calk(2.0 * nu - 0.5, x)?;
            let b = calk(nu - 1.0, x)? * calk(nu + 1.0, x)?;
            let s = a.v.abs().max(b.v.abs());
            if id == T2gR3 {
                PointValue::new(a, b, s, EvalMethod::Integral)
            } else {
                PointValue::new(b, a, s, EvalMethod::Integral)
            }
        }
    })
}

fn h_method(nu: f64, x: f64) -> Result<EvalMethod> {
    Ok(struve_h(nu, x)?.method)
}

/// Upper end of the `x` region for parts bounded by a zero.
pub(crate) fn zero_limit(id: TheoremId, nu: f64) -> Result<Option<f64>> {
    use TheoremId::*;
    Ok(match id {
        T1b | BoundQuotient => Some(struve_h_zero(nu, 1)?),
        T1cNew => Some(struve_h_zero(nu + 1.0, 1)?),
        BoundSandwich => Some(bessel_j_zero(nu, 1)?),
        _ => None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn cm_first_derivative_closed_form() {
        // normalized K at nu = 1/2 is 2/(sqrt(pi) x)
        let d = calk_x_derivative(0.5, 1, 2.0).unwrap().value;
        assert!((d - 1.0 / (2.0 * PI.sqrt())).abs() < 1e-13);
    }

    #[test]
    fn leibniz_derivative_matches_k_prime() {
        let d = k_signed_derivative(-0.25, 1, 1.5).unwrap().v;
        let kp = struve_k_prime(-0.25, 1.5).unwrap().value;
        assert!((d + kp).abs() < 1e-12);
        let k0 = k_signed_derivative(0.3, 0, 2.0).unwrap().v;
        assert!((k0 - struve_k(0.3, 2.0, 1e-14).unwrap().value).abs() < 1e-14);
    }

    #[test]
    fn r3_equality_at_three_halves() {
        let p = point(TheoremId::T2gR3, 1.5, 1.0, None).unwrap();
        assert!(p.margin().abs() < 1e-12);
    }

    #[test]
    fn nu_derivatives_of_normalized_k_are_positive() {
        // The nu-derivatives carry no alternating sign: the log kernel is
        // log(1 + t^2) >= 0, so odd orders are positive, not negative.
        for m in 1..=3 {
            assert!(calk_nu_derivative(0.2, m, 1.0).unwrap().value > 0.0);
        }
    }
}
