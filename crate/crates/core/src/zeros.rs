//! Positive zeros `h_{nu,n}` of `H_nu` for `|nu| <= 1/2`.
//!
//! For `|nu| < 1/2` every zero is simple and lies strictly between
//! consecutive Bessel zeros, `j_{nu,n} < h_{nu,n} < j_{nu,n+1}`, which
//! supplies a sign-change bracket for each one. At `nu = -1/2` the zeros are
//! `n pi`; at `nu = 1/2`, `H_{1/2}(x) = sqrt(2/(pi x)) (1 - cos x)` has double
//! zeros at `2 n pi`.

use crate::bessel::{refine_root, BesselZeroTable};
use crate::error::{domain, ensure_finite, Result, StruveError};
use crate::numeric::CompensatedSum;
use crate::struve::{struve_h, struve_h_prime};
use crate::types::TruncatedExpansion;
use serde::Serialize;
use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Arc, Mutex, OnceLock};

/// Evidence that a tabulated point is a zero.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum ZeroCertificate {
    /// `H` takes opposite signs at the two probe points.
    SignChange { left: f64, right: f64 },
    /// `H` is non-negative at both probe points and vanishes to rounding at
    /// the zero, as for the double zeros of `1 - cos x`.
    LocalMinimum { left: f64, at: f64, right: f64 },
    /// Closed form, no probing needed.
    ClosedForm,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StruveZeroTable {
    pub nu: f64,
    pub zeros: Vec<f64>,
    pub multiplicity: Vec<u32>,
    /// Interlacing Bessel zeros `(j_{nu,n}, j_{nu,n+1})`, or the search
    /// interval for the closed-form orders.
    pub bracket: Vec<(f64, f64)>,
    pub certificate: Vec<ZeroCertificate>,
}

fn check_order(nu: f64) -> Result<()> {
    ensure_finite("nu", nu)?;
    if nu.abs() > 0.5 {
        return domain(format!(
            "Struve zeros are only tabulated for |nu| <= 1/2, got {nu}"
        ));
    }
    Ok(())
}

fn h(nu: f64, x: f64) -> Result<f64> {
    Ok(struve_h(nu, x)?.value)
}

impl StruveZeroTable {
    /// Computes the first `count` positive zeros.
    pub fn new(nu: f64, count: usize) -> Result<Self> {
        check_order(nu)?;
        let mut t = StruveZeroTable {
            nu,
            zeros: Vec::with_capacity(count),
            multiplicity: Vec::with_capacity(count),
            bracket: Vec::with_capacity(count),
            certificate: Vec::with_capacity(count),
        };
        if nu == -0.5 || nu == 0.5 {
            let (period, mult) = if nu < 0.0 { (PI, 1) } else { (2.0 * PI, 2) };
            for n in 1..=count {
                let z = n as f64 * period;
                t.zeros.push(z);
                t.multiplicity.push(mult);
                t.bracket.push((z - 0.5 * period, z + 0.5 * period));
                t.certificate.push(ZeroCertificate::ClosedForm);
            }
            return Ok(t);
        }
        let j = BesselZeroTable::new(nu, count + 1)?;
        let f = |x: f64| h(nu, x);
        let df = |x: f64| Ok(struve_h_prime(nu, x)?.value);
        for n in 0..count {
            let (a, b) = (j.zeros[n], j.zeros[n + 1]);
            let z = refine_root(&f, &df, a, b, None).map_err(|e| match e {
                StruveError::Internal(m) => StruveError::Internal(format!(
                    "interlacing bracket ({a}, {b}) for zero {} of H_{nu}: {m}",
                    n + 1
                )),
                other => other,
            })?;
            let d = 1e-9 * z.max(1.0);
            let (l, r) = (f(z - d)?, f(z + d)?);
            if l.signum() == r.signum() {
                return Err(StruveError::Internal(format!(
                    "no sign change of H_{nu} around {z}"
                )));
            }
            t.zeros.push(z);
            t.multiplicity.push(1);
            t.bracket.push((a, b));
            t.certificate.push(ZeroCertificate::SignChange { left: l, right: r });
        }
        Ok(t)
    }

    pub fn count(&self) -> usize {
        self.zeros.len()
    }

    /// Certifies the double zeros at `nu = 1/2` by probing both sides.
    pub fn certify_minima(&mut self) -> Result<()> {
        for i in 0..self.zeros.len() {
            if self.multiplicity[i] == 2 {
                let z = self.zeros[i];
                let d = 1e-3;
                let left = h(self.nu, z - d)?;
                let at = h(self.nu, z)?;
                let right = h(self.nu, z + d)?;
                if !(left > 0.0 && right > 0.0 && at.abs() < 1e-12) {
                    return Err(StruveError::Internal(format!(
                        "double zero at {z} failed its local-minimum check"
                    )));
                }
                self.certificate[i] = ZeroCertificate::LocalMinimum { left, at, right };
            }
        }
        Ok(())
    }

    /// Number of zeros counted with multiplicity.
    pub fn counted(&self) -> usize {
        self.multiplicity.iter().map(|&m| m as usize).sum()
    }

    /// Sum of `mult / h^(2p)` over the table.
    pub fn power_sum(&self, p: i32) -> f64 {
        self.zeros
            .iter()
            .zip(&self.multiplicity)
            .map(|(&z, &m)| m as f64 / z.powi(2 * p))
            .sum::<CompensatedSum>()
            .value()
    }
}

/// Lower bound for the `k`-th zero counted with multiplicity, valid for
/// `|nu| <= 1/2`: `h_{nu,n} > j_{nu,n} >= j_{-1/2,n} = (n - 1/2) pi`, and the
/// double zeros `2 n pi` at `nu = 1/2` occupy positions `2n - 1, 2n`.
pub fn zero_lower_bound(k: usize) -> f64 {
    (k as f64 - 0.5) * PI
}

/// `sum_{k > K} 1/L_k^(2p)` for the lower bounds `L_k` above, bounded by the
/// integral from `K`.
pub fn lower_bound_tail(counted: usize, p: i32) -> f64 {
    let q = 2 * p - 1;
    let k = counted as f64 - 0.5;
    if k <= 0.0 {
        return f64::INFINITY;
    }
    1.0 / (q as f64 * PI.powi(2 * p) * k.powi(q))
}

type Cache = Mutex<HashMap<u64, Arc<StruveZeroTable>>>;

fn cache() -> &'static Cache {
    static CACHE: OnceLock<Cache> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// A shared table holding at least `count` zeros. Tables are computed once
/// per order and grown on demand; zero `n` does not depend on the table size.
pub fn zero_table(nu: f64, count: usize) -> Result<Arc<StruveZeroTable>> {
    check_order(nu)?;
    let key = nu.to_bits();
    if let Some(t) = cache().lock().expect("zero cache poisoned").get(&key) {
        if t.count() >= count {
            return Ok(Arc::clone(t));
        }
    }
    let t = Arc::new(StruveZeroTable::new(nu, count)?);
    let mut guard = cache().lock().expect("zero cache poisoned");
    let entry = guard.entry(key).or_insert_with(|| Arc::clone(&t));
    if entry.count() < t.count() {
        *entry = Arc::clone(&t);
    }
    Ok(t)
}

/// The `n`-th positive zero of `H_nu`, `|nu| <= 1/2`.
pub fn struve_h_zero(nu: f64, n: usize) -> Result<f64> {
    if n == 0 {
        return domain("zero index is 1-based");
    }
    Ok(zero_table(nu, n)?.zeros[n - 1])
}

/// `sum mult / h_{nu,n}^2` over the first `n_terms` zeros, with a bound on
/// the omitted part. The full sum equals `1/(3(2 nu + 3))`.
pub fn zero_reciprocal_square_sum(nu: f64, n_terms: usize) -> Result<TruncatedExpansion> {
    let t = zero_table(nu, n_terms)?;
    let head = StruveZeroTable {
        nu,
        zeros: t.zeros[..n_terms].to_vec(),
        multiplicity: t.multiplicity[..n_terms].to_vec(),
        bracket: Vec::new(),
        certificate: Vec::new(),
    };
    Ok(TruncatedExpansion {
        partial: head.power_sum(1),
        n_terms,
        tail_bound: lower_bound_tail(head.counted(), 1),
    })
}

/// `1/(3(2 nu + 3))`, the exact value of `sum mult / h_{nu,n}^2`.
pub fn rayleigh_sum_h(nu: f64) -> f64 {
    1.0 / (3.0 * (2.0 * nu + 3.0))
}

/// The exact value of `sum mult / h_{nu,n}^4`.
pub fn rayleigh_sum_h4(nu: f64) -> f64 {
    let s1 = rayleigh_sum_h(nu);
    let c2 = 1.0 / (60.0 * (nu + 1.5) * (nu + 2.5));
    s1 * s1 - 2.0 * c2
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bessel::bessel_j_zero;
    use approx::assert_relative_eq;

    #[test]
    fn closed_form_orders() {
        assert_eq!(struve_h_zero(-0.5, 3).unwrap(), 3.0 * PI);
        let t = zero_table(0.5, 2).unwrap();
        assert_eq!(t.zeros[0], 2.0 * PI);
        assert_eq!(t.multiplicity[0], 2);
        let mut t = StruveZeroTable::new(0.5, 5).unwrap();
        t.certify_minima().unwrap();
        assert!(matches!(t.certificate[4], ZeroCertificate::LocalMinimum { .. }));
    }

    #[test]
    fn first_zero_of_order_zero() {
        let z = struve_h_zero(0.0, 1).unwrap();
        assert_relative_eq!(z, 4.333_237_820_406_421_670_5, max_relative = 1e-13);
        assert!(z > bessel_j_zero(0.0, 1).unwrap() && z < bessel_j_zero(0.0, 2).unwrap());
        assert!(struve_h(0.0, z).unwrap().value.abs() <= 1e-11);
    }

    #[test]
    fn order_outside_range() {
        assert!(struve_h_zero(0.9, 1).is_err());
        assert!(StruveZeroTable::new(-0.51, 1).is_err());
    }

    #[test]
    fn reciprocal_square_sums() {
        let r = zero_reciprocal_square_sum(-0.5, 10_000).unwrap();
        assert!((r.partial - 1.0 / 6.0).abs() <= r.tail_bound && r.tail_bound < 1e-4);
        let r = zero_reciprocal_square_sum(0.5, 10_000).unwrap();
        assert!((r.partial - 1.0 / 12.0).abs() <= r.tail_bound && r.tail_bound < 1e-4);
        let r = zero_reciprocal_square_sum(0.0, 200).unwrap();
        let exact = rayleigh_sum_h(0.0);
        assert!(exact - r.partial >= 0.0 && exact - r.partial <= r.tail_bound);
        assert!((r.partial - 1.0 / 9.0).abs() < 2e-3);
    }

    #[test]
    fn fourth_power_sum_at_closed_form_order() {
        // sum 1/(n pi)^4 = 1/90
        assert_relative_eq!(rayleigh_sum_h4(-0.5), 1.0 / 90.0, max_relative = 1e-14);
        // 2 sum 1/(2 n pi)^4 = 1/720
        assert_relative_eq!(rayleigh_sum_h4(0.5), 1.0 / 720.0, max_relative = 1e-14);
    }
}
