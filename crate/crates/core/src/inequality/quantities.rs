//! Turán and Laguerre expressions and the asymptotic-constant probes.

use crate::error::{domain, ensure_finite, Result};
use crate::struve::{calh_derivative, struve_h, struve_k, struve_k_any, struve_l};
use crate::types::{EvalMethod, EvalResult};
use std::ops::{Add, Div, Mul, Sub};

/// A value with an absolute error estimate and accumulated work.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Est {
    pub v: f64,
    pub e: f64,
    pub w: usize,
}

impl Est {
    pub fn exact(v: f64) -> Self {
        Est { v, e: 0.0, w: 0 }
    }
}

impl From<EvalResult> for Est {
    fn from(r: EvalResult) -> Self {
        Est { v: r.value, e: r.est_error, w: r.work }
    }
}

impl Add for Est {
    type Output = Est;
    fn add(self, o: Est) -> Est {
        let v = self.v + o.v;
        Est { v, e: self.e + o.e + f64::EPSILON * v.abs(), w: self.w + o.w }
    }
}

impl Sub for Est {
    type Output = Est;
    fn sub(self, o: Est) -> Est {
        let v = self.v - o.v;
        Est { v, e: self.e + o.e + f64::EPSILON * v.abs(), w: self.w + o.w }
    }
}

impl Mul for Est {
    type Output = Est;
    fn mul(self, o: Est) -> Est {
        let v = self.v * o.v;
        Est {
            v,
            e: self.v.abs() * o.e + o.v.abs() * self.e + self.e * o.e + f64::EPSILON * v.abs(),
            w: self.w + o.w,
        }
    }
}

impl Div for Est {
    type Output = Est;
    fn div(self, o: Est) -> Est {
        let v = self.v / o.v;
        Est {
            v,
            e: (self.e + v.abs() * o.e) / o.v.abs() + f64::EPSILON * v.abs(),
            w: self.w + o.w,
        }
    }
}

impl Mul<f64> for Est {
    type Output = Est;
    fn mul(self, k: f64) -> Est {
        Est { v: self.v * k, e: self.e * k.abs(), w: self.w }
    }
}

fn finish(d: Est, method: EvalMethod) -> EvalResult {
    EvalResult::new(d.v, method, d.e, d.w)
}

fn positive_x(x: f64) -> Result<()> {
    ensure_finite("x", x)?;
    if x <= 0.0 {
        return domain(format!("requires x > 0, got {x}"));
    }
    Ok(())
}

pub(crate) fn turan_h(nu: f64, x: f64) -> Result<(Est, Est, Est, EvalMethod)> {
    let c = struve_h(nu, x)?;
    let m = c.method;
    Ok((struve_h(nu - 1.0, x)?.into(), c.into(), struve_h(nu + 1.0, x)?.into(), m))
}

/// `H_nu^2 - H_{nu-1} H_{nu+1}`.
pub fn turan_delta_h(nu: f64, x: f64) -> Result<EvalResult> {
    positive_x(x)?;
    let (lo, c, hi, m) = turan_h(nu, x)?;
    Ok(finish(c * c - lo * hi, m))
}

pub(crate) fn turan_l(nu: f64, x: f64) -> Result<(Est, Est, Est, EvalMethod)> {
    let c = struve_l(nu, x)?;
    let m = c.method;
    Ok((struve_l(nu - 1.0, x)?.into(), c.into(), struve_l(nu + 1.0, x)?.into(), m))
}

/// `L_nu^2 - L_{nu-1} L_{nu+1}`.
pub fn turan_delta_l(nu: f64, x: f64) -> Result<EvalResult> {
    positive_x(x)?;
    let (lo, c, hi, m) = turan_l(nu, x)?;
    Ok(finish(c * c - lo * hi, m))
}

pub(crate) fn turan_k(nu: f64, x: f64) -> Result<(Est, Est, Est)> {
    if nu <= -0.5 {
        return domain(format!("K Turán expression requires nu > -1/2, got {nu}"));
    }
    Ok((
        struve_k_any(nu - 1.0, x)?.into(),
        struve_k(nu, x, 1e-14)?.into(),
        struve_k(nu + 1.0, x, 1e-14)?.into(),
    ))
}

/// `K_nu^2 - K_{nu-1} K_{nu+1}`; `K_{nu-1}` comes from the lowering relation
/// when `nu - 1 <= -1/2`.
pub fn turan_delta_k(nu: f64, x: f64) -> Result<EvalResult> {
    positive_x(x)?;
    let (lo, c, hi) = turan_k(nu, x)?;
    Ok(finish(c * c - lo * hi, EvalMethod::Integral))
}

/// `[f^(m)]^2 - f^(m-1) f^(m+1)` for the normalized `H`, `f(0) = 1`.
pub fn laguerre_margin(nu: f64, m: u32, x: f64) -> Result<EvalResult> {
    ensure_finite("nu", nu)?;
    ensure_finite("x", x)?;
    if nu.abs() > 0.5 {
        return domain(format!("Laguerre expression requires |nu| <= 1/2, got {nu}"));
    }
    if !(1..=6).contains(&m) {
        return domain(format!("Laguerre expression requires 1 <= m <= 6, got {m}"));
    }
    if x.abs() > 20.0 {
        return domain(format!("Laguerre expression requires |x| <= 20, got {x}"));
    }
    let a: Est = calh_derivative(nu, m - 1, x)?.into();
    let b: Est = calh_derivative(nu, m, x)?.into();
    let c: Est = calh_derivative(nu, m + 1, x)?.into();
    Ok(finish(b * b - a * c, EvalMethod::Series))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProbeSide {
    Zero,
    Infinity,
}

impl std::str::FromStr for ProbeSide {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "zero" => Ok(ProbeSide::Zero),
            "infinity" | "inf" => Ok(ProbeSide::Infinity),
            _ => Err(format!("unknown probe side '{s}'")),
        }
    }
}

/// `Delta_nu(x) / H_nu(x)^2` at `x = 1e-3` or `x = 200`; tends to
/// `1/(nu + 3/2)` and `1/(nu + 1/2)` respectively.
pub fn asymptotic_constant_probe(nu: f64, side: ProbeSide) -> Result<f64> {
    ensure_finite("nu", nu)?;
    let x = match side {
        ProbeSide::Zero => {
            if nu <= -1.5 {
                return domain(format!("zero-side probe requires nu > -3/2, got {nu}"));
            }
            1e-3
        }
        ProbeSide::Infinity => {
            if nu <= 1.5 {
                return domain(format!("infinity-side probe requires nu > 3/2, got {nu}"));
            }
            200.0
        }
    };
    let (lo, c, hi, _) = turan_h(nu, x)?;
    Ok((c.v * c.v - lo.v * hi.v) / (c.v * c.v))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::{FRAC_PI_2, PI};

    #[test]
    fn delta_h() {
        assert!(turan_delta_h(1.0, 1e-8).unwrap().value.abs() < 1e-12);
        assert_relative_eq!(turan_delta_h(-0.5, PI).unwrap().value, 4.0 / (PI * PI), max_relative = 1e-12);
        assert_relative_eq!(turan_delta_h(-0.5, 1.0).unwrap().value, 0.538_911_347_758_358_03, max_relative = 1e-12);
        assert!(turan_delta_h(0.0, 0.0).is_err());
    }

    #[test]
    fn delta_l() {
        assert_relative_eq!(turan_delta_l(-0.5, 1.0).unwrap().value, 0.752_045_077_355_976_46, max_relative = 1e-12);
        assert!(turan_delta_l(-1.0, 1e-8).unwrap().value >= -1e-15);
        assert_relative_eq!(turan_delta_l(0.0, 2.0).unwrap().value, 1.835_531_733_159_408_2, max_relative = 1e-12);
    }

    #[test]
    fn delta_k() {
        let k = |nu: f64, x: f64| struve_k(nu, x, 1e-14).unwrap().value;
        let t = turan_delta_k(1.5, 2.0).unwrap().value;
        assert!(t <= k(1.5, 2.0).powi(2) / 2.0);
        let t = turan_delta_k(1.0, 5.0).unwrap().value;
        assert!(t <= 2.0 / 5.0 * k(1.0, 5.0) * k(2.0, 5.0));
        // K_{-1/2} from the lowering relation against H - Y
        let t = turan_delta_k(0.5, 2.0).unwrap();
        let hy = |nu: f64| crate::struve::struve_k_via_h_minus_y(nu, 2.0).unwrap().value;
        let direct = hy(0.5).powi(2) - hy(-0.5) * hy(1.5);
        assert!((t.value - direct).abs() < 1e-10);
        assert!(turan_delta_k(-0.5, 1.0).is_err());
    }

    #[test]
    fn laguerre() {
        assert_relative_eq!(laguerre_margin(0.5, 1, 0.0).unwrap().value, 1.0 / 6.0, max_relative = 1e-14);
        assert_relative_eq!(
            laguerre_margin(-0.5, 1, FRAC_PI_2).unwrap().value,
            0.241_029_018_494_401_72,
            max_relative = 1e-12
        );
        assert_relative_eq!(laguerre_margin(0.0, 2, 1.0).unwrap().value, 0.049_137_960_157_952_574, max_relative = 1e-11);
        assert!(laguerre_margin(0.0, 7, 1.0).is_err());
        assert!(laguerre_margin(0.6, 1, 1.0).is_err());
    }

    #[test]
    fn probes() {
        assert!((asymptotic_constant_probe(1.0, ProbeSide::Zero).unwrap() - 0.4).abs() < 1e-3);
        assert!((asymptotic_constant_probe(-0.5, ProbeSide::Zero).unwrap() - 1.0).abs() < 1e-3);
        assert!((asymptotic_constant_probe(2.5, ProbeSide::Infinity).unwrap() - 1.0 / 3.0).abs() < 2e-2);
        assert!(asymptotic_constant_probe(1.0, ProbeSide::Infinity).is_err());
    }
}
