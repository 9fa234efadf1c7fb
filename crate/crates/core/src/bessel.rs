//! Bessel functions `J_nu`, `Y_nu` of real order and positive argument, and
//! the positive zeros `j_{nu,n}`.
//!
//! * `x <= 18`: ascending series in double-double arithmetic. `Y` follows
//!   from the connection formula. At integer order `Y` uses the logarithmic
//!   series below `x = 2` and Steed's continued fractions above.
//! * `x > 18`: Hankel's asymptotic expansion when its smallest term is
//!   below `1e-15`, otherwise Steed's continued fractions.

use crate::error::{domain, ensure_finite, Result, StruveError};
use crate::numeric::{cos_pi, is_integer, sin_pi, CompensatedSum};
use crate::series::gamma_series;
use crate::types::{EvalMethod, EvalResult};
use std::f64::consts::{FRAC_2_PI, PI};

pub const X_SWITCH: f64 = 18.0;

const HANKEL_TOL: f64 = 1e-15;

/// `J_nu(x)` for real `nu` and `x > 0`.
pub fn bessel_j(nu: f64, x: f64) -> Result<EvalResult> {
    ensure_finite("nu", nu)?;
    ensure_finite("x", x)?;
    if x <= 0.0 {
        return domain(format!("bessel_j requires x > 0, got {x}"));
    }
    if x <= X_SWITCH {
        return j_series(nu, x);
    }
    if let Some((j, _, err, work)) = hankel(nu, x) {
        return Ok(EvalResult::new(j, EvalMethod::Asymptotic, err, work));
    }
    let (j, _, work) = steed_any_order(nu, x)?;
    Ok(EvalResult::new(
        j,
        EvalMethod::ContinuedFraction,
        1e-14 * j.abs().max(1e-3),
        work,
    ))
}

/// `Y_nu(x)` for real `nu` and `x > 0`.
pub fn bessel_y(nu: f64, x: f64) -> Result<EvalResult> {
    ensure_finite("nu", nu)?;
    ensure_finite("x", x)?;
    if x <= 0.0 {
        return domain(format!("bessel_y requires x > 0, got {x}"));
    }
    if x > X_SWITCH {
        if let Some((_, y, err, work)) = hankel(nu, x) {
            return Ok(EvalResult::new(y, EvalMethod::Asymptotic, err, work));
        }
        let (_, y, work) = steed_any_order(nu, x)?;
        return Ok(EvalResult::new(
            y,
            EvalMethod::ContinuedFraction,
            1e-14 * y.abs().max(1e-3),
            work,
        ));
    }
    if is_integer(nu) {
        let n = nu.abs() as u32;
        let sign = if nu < 0.0 && n % 2 == 1 { -1.0 } else { 1.0 };
        if x < 2.0 {
            let (v, e, w) = y_integer_series(n, x)?;
            return Ok(EvalResult::new(sign * v, EvalMethod::Series, e, w));
        }
        let (_, y, work) = steed(n as f64, x)?;
        return Ok(EvalResult::new(
            sign * y,
            EvalMethod::ContinuedFraction,
            1e-14 * y.abs().max(1e-3),
            work,
        ));
    }
    let (v, e, w) = y_connection(nu, x)?;
    Ok(EvalResult::new(v, EvalMethod::Series, e, w))
}

/// `J_nu` by the ascending series; valid for every real order.
pub(crate) fn j_series(nu: f64, x: f64) -> Result<EvalResult> {
    let h = 0.5 * x;
    let s = gamma_series(h, true, 1.0, nu + 1.0)?;
    let (v, e) = s.value();
    let p = h.powf(nu);
    Ok(EvalResult::new(
        v * p,
        EvalMethod::Series,
        e * p.abs(),
        s.terms.len(),
    ))
}

/// `Y_n` for integer `n >= 0` and `0 < x < 2` from the logarithmic series.
fn y_integer_series(n: u32, x: f64) -> Result<(f64, f64, usize)> {
    const EULER: f64 = 0.577_215_664_901_532_9;
    let h = 0.5 * x;
    let q = h * h;
    let nf = n as f64;
    let mut finite = CompensatedSum::new();
    let mut mag = 0.0;
    if n > 0 {
        let mut t = (crate::gamma::ln_gamma(nf)? - nf * h.ln()).exp();
        for k in 0..n {
            finite.add(t);
            mag += t.abs();
            if k + 1 < n {
                t *= q / ((k + 1) as f64 * (nf - k as f64 - 1.0));
            }
        }
    }
    let mut tail = CompensatedSum::new();
    let mut t = (nf * h.ln() - crate::gamma::ln_gamma(nf + 1.0)?).exp();
    // psi(k+1) + psi(n+k+1) = -2 gamma + H_k + H_{n+k}
    let mut hk = 0.0;
    let mut hnk: f64 = (1..=n).map(|i| 1.0 / i as f64).sum();
    let mut k = 0u32;
    loop {
        let term = t * (hk + hnk - 2.0 * EULER);
        tail.add(term);
        mag += term.abs();
        k += 1;
        t *= -q / (k as f64 * (nf + k as f64));
        hk += 1.0 / k as f64;
        hnk += 1.0 / (nf + k as f64);
        if t.abs() * (hk + hnk + 2.0) < 1e-18 * tail.value().abs().max(1e-300) || k > 200 {
            break;
        }
    }
    let j = j_series(nf, x)?;
    let v = FRAC_2_PI * j.value * h.ln() - (finite.value() + tail.value()) / PI;
    ensure_finite("Y_n(x)", v)?;
    let e = 4.0 * f64::EPSILON * (mag / PI + v.abs()) + FRAC_2_PI * j.est_error * h.ln().abs();
    Ok((v, e, n as usize + k as usize))
}

fn y_connection(nu: f64, x: f64) -> Result<(f64, f64, usize)> {
    let a = j_series(nu, x)?;
    let b = j_series(-nu, x)?;
    let s = sin_pi(nu);
    let c = cos_pi(nu);
    let v = (a.value * c - b.value) / s;
    let e = (a.est_error + b.est_error + f64::EPSILON * (a.value.abs() + b.value.abs())) / s.abs();
    Ok((v, e, a.work + b.work))
}

/// Hankel's expansion; `None` when the smallest term exceeds the tolerance.
fn hankel(nu: f64, x: f64) -> Option<(f64, f64, f64, usize)> {
    let mu = 4.0 * nu * nu;
    let mut p = CompensatedSum::new();
    let mut q = CompensatedSum::new();
    p.add(1.0);
    let mut term: f64 = 1.0;
    let mut prev = f64::INFINITY;
    let mut k = 1usize;
    let omitted = loop {
        let odd = (2 * k - 1) as f64;
        term *= (mu - odd * odd) / (k as f64 * 8.0 * x);
        let mag = term.abs();
        if mag >= prev {
            break prev;
        }
        if mag < 1e-17 {
            break mag;
        }
        // terms alternate P, Q, P, Q ... with signs (+,-) in pairs
        let sgn = if (k / 2) % 2 == 0 { 1.0 } else { -1.0 };
        if k % 2 == 1 {
            q.add(sgn * term);
        } else {
            p.add(sgn * term);
        }
        prev = mag;
        k += 1;
        if k > 200 {
            break mag;
        }
    };
    if omitted > HANKEL_TOL {
        return None;
    }
    let (pv, qv) = (p.value(), q.value());
    // omega = x - phi with phi = (nu/2 + 1/4) pi
    let (sx, cx) = x.sin_cos();
    let phi = 0.5 * nu + 0.25;
    let (sp, cp) = (sin_pi(phi), cos_pi(phi));
    let cw = cx * cp + sx * sp;
    let sw = sx * cp - cx * sp;
    let amp = (FRAC_2_PI / x).sqrt();
    let j = amp * (pv * cw - qv * sw);
    let y = amp * (pv * sw + qv * cw);
    // phase of x carries a relative rounding of order eps*x
    let err = amp * (omitted + 2.0 * f64::EPSILON * x.max(1.0));
    Some((j, y, err, k))
}

/// Steed's method for any real order via reflection.
fn steed_any_order(nu: f64, x: f64) -> Result<(f64, f64, usize)> {
    if nu >= 0.0 {
        return steed(nu, x);
    }
    let m = -nu;
    let (j, y, w) = steed(m, x)?;
    let (s, c) = (sin_pi(m), cos_pi(m));
    Ok((c * j - s * y, s * j + c * y, w))
}

/// Steed's CF1/CF2 algorithm for `nu >= 0`, `x >= 2`.
fn steed(nu: f64, x: f64) -> Result<(f64, f64, usize)> {
    const MAXIT: usize = 200_000;
    let eps = 2.0 * f64::EPSILON;
    let fpmin = f64::MIN_POSITIVE / f64::EPSILON;
    if x < 2.0 {
        return Err(StruveError::Internal(
            "continued fraction path requires x >= 2".into(),
        ));
    }
    let nl = ((nu - x + 1.5).floor() as i64).max(0) as usize;
    let xmu = nu - nl as f64;
    let xmu2 = xmu * xmu;
    let xi = 1.0 / x;
    let xi2 = 2.0 * xi;
    let w = xi2 / PI;

    // CF1: J'_nu / J_nu
    let mut isign = 1.0;
    let mut h = (nu * xi).max(fpmin);
    let mut b = xi2 * nu;
    let mut d = 0.0;
    let mut c = h;
    let mut it = 0;
    loop {
        b += xi2;
        d = b - d;
        if d.abs() < fpmin {
            d = fpmin;
        }
        c = b - 1.0 / c;
        if c.abs() < fpmin {
            c = fpmin;
        }
        d = 1.0 / d;
        let del = c * d;
        h *= del;
        if d < 0.0 {
            isign = -isign;
        }
        it += 1;
        if (del - 1.0).abs() <= eps {
            break;
        }
        if it >= MAXIT {
            return Err(StruveError::Accuracy {
                reason: format!("CF1 did not converge for nu = {nu}, x = {x}"),
                estimate: f64::NAN,
            });
        }
    }
    let mut rjl = isign * fpmin;
    let mut rjpl = h * rjl;
    let rjl1 = rjl;
    let mut fact = nu * xi;
    for _ in 0..nl {
        let rjtemp = fact * rjl + rjpl;
        fact -= xi;
        rjpl = fact * rjtemp - rjl;
        rjl = rjtemp;
    }
    if rjl == 0.0 {
        rjl = eps;
    }
    let f = rjpl / rjl;

    // CF2: p + iq
    let mut a = 0.25 - xmu2;
    let mut p = -0.5 * xi;
    let mut q = 1.0;
    let br = 2.0 * x;
    let mut bi = 2.0;
    let mut fact = a * xi / (p * p + q * q);
    let mut cr = br + q * fact;
    let mut ci = bi + p * fact;
    let mut den = br * br + bi * bi;
    let mut dr = br / den;
    let mut di = -bi / den;
    let mut dlr = cr * dr - ci * di;
    let mut dli = cr * di + ci * dr;
    let mut temp = p * dlr - q * dli;
    q = p * dli + q * dlr;
    p = temp;
    let mut i = 1;
    loop {
        a += (2 * i) as f64;
        bi += 2.0;
        dr = a * dr + br;
        di = a * di + bi;
        if dr.abs() + di.abs() < fpmin {
            dr = fpmin;
        }
        fact = a / (cr * cr + ci * ci);
        cr = br + cr * fact;
        ci = bi - ci * fact;
        if cr.abs() + ci.abs() < fpmin {
            cr = fpmin;
        }
        den = dr * dr + di * di;
        dr /= den;
        di /= -den;
        dlr = cr * dr - ci * di;
        dli = cr * di + ci * dr;
        temp = p * dlr - q * dli;
        q = p * dli + q * dlr;
        p = temp;
        i += 1;
        if (dlr - 1.0).abs() + dli.abs() <= eps {
            break;
        }
        if i >= MAXIT {
            return Err(StruveError::Accuracy {
                reason: format!("CF2 did not converge for nu = {nu}, x = {x}"),
                estimate: f64::NAN,
            });
        }
    }
    let gam = (p - f) / q;
    let mut rjmu = (w / ((p - f) * gam + q)).sqrt();
    rjmu = rjmu.copysign(rjl);
    let mut rymu = rjmu * gam;
    let rymup = rymu * (p + q / gam);
    let mut ry1 = xmu * xi * rymu - rymup;
    let fact = rjmu / rjl;
    let j = rjl1 * fact;
    for k in 1..=nl {
        let rytemp = (xmu + k as f64) * xi2 * ry1 - rymu;
        rymu = ry1;
        ry1 = rytemp;
    }
    Ok((j, rymu, it + i + nl))
}

/// `sum_n 1/j_{nu,n}^2 = 1/(4(nu+1))`.
pub fn rayleigh_sum_j(nu: f64) -> Result<f64> {
    ensure_finite("nu", nu)?;
    if nu <= -1.0 {
        return domain(format!("rayleigh_sum_j requires nu > -1, got {nu}"));
    }
    Ok(0.25 / (nu + 1.0))
}

/// Upper bound for `sum_{n>N} 1/j_{nu,n}^2` valid for `nu >= -1/2`, from
/// `j_{nu,n} >= j_{-1/2,n} = (n - 1/2) pi >= n pi / 2`.
pub fn rayleigh_tail_bound(n_terms: usize) -> f64 {
    4.0 / (PI * PI * n_terms.max(1) as f64)
}

fn j_derivative(nu: f64, x: f64) -> Result<f64> {
    Ok(bessel_j(nu - 1.0, x)?.value - nu / x * bessel_j(nu, x)?.value)
}

fn j_value(nu: f64, x: f64) -> Result<f64> {
    Ok(bessel_j(nu, x)?.value)
}

/// McMahon's large-zero expansion.
fn mcmahon(nu: f64, n: usize) -> f64 {
    let beta = (n as f64 + 0.5 * nu - 0.25) * PI;
    let mu = 4.0 * nu * nu;
    let e = 8.0 * beta;
    beta - (mu - 1.0) / e - 4.0 * (mu - 1.0) * (7.0 * mu - 31.0) / (3.0 * e.powi(3))
}

/// Refines a root of `f` in the sign-change bracket `[a, b]` by safeguarded
/// Newton, falling back to bisection after 25 Newton iterations.
pub(crate) fn refine_root(
    f: &dyn Fn(f64) -> Result<f64>,
    df: &dyn Fn(f64) -> Result<f64>,
    mut a: f64,
    mut b: f64,
    guess: Option<f64>,
) -> Result<f64> {
    let mut fa = f(a)?;
    let fb = f(b)?;
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.signum() == fb.signum() {
        return Err(StruveError::Internal(format!(
            "no sign change on [{a}, {b}]"
        )));
    }
    // a few bisections make the Newton basin reliable
    for _ in 0..4 {
        let m = 0.5 * (a + b);
        let fm = f(m)?;
        if fm == 0.0 {
            return Ok(m);
        }
        if fm.signum() == fa.signum() {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    let mut x = match guess {
        Some(g) if g > a && g < b => g,
        _ => 0.5 * (a + b),
    };
    for it in 0..200 {
        let fx = f(x)?;
        if fx == 0.0 {
            return Ok(x);
        }
        if fx.signum() == fa.signum() {
            a = x;
            fa = fx;
        } else {
            b = x;
        }
        let width = b - a;
        if width <= 4.0 * f64::EPSILON * b.abs() {
            return Ok(0.5 * (a + b));
        }
        let mut next = 0.5 * (a + b);
        if it < 25 {
            let d = df(x)?;
            if d != 0.0 && d.is_finite() {
                let nx = x - fx / d;
                if nx > a && nx < b {
                    if (nx - x).abs() <= 2.0 * f64::EPSILON * x.abs() {
                        return Ok(nx);
                    }
                    next = nx;
                }
            }
        }
        x = next;
    }
    Ok(0.5 * (a + b))
}

fn next_zero(nu: f64, start: f64, n: usize) -> Result<f64> {
    let f = |x: f64| j_value(nu, x);
    let df = |x: f64| j_derivative(nu, x);
    let step = 0.5;
    let mut a = start;
    let mut fa = f(a)?;
    for _ in 0..100_000 {
        let b = a + step;
        let fb = f(b)?;
        if fa == 0.0 || fa.signum() != fb.signum() {
            return refine_root(&f, &df, a, b, Some(mcmahon(nu, n)));
        }
        a = b;
        fa = fb;
    }
    Err(StruveError::Internal(format!(
        "bracket search failed for j_({nu},{n})"
    )))
}

fn first_search_start(nu: f64) -> f64 {
    // j_{nu,1}^2 > 4(nu+1) and j_{nu,1} > nu
    let lb = 2.0 * (nu + 1.0).sqrt();
    if nu > 0.0 {
        lb.max(nu)
    } else {
        lb
    }
}

/// Ordered positive zeros of `J_nu`.
#[derive(Debug, Clone, PartialEq)]
pub struct BesselZeroTable {
    pub nu: f64,
    pub zeros: Vec<f64>,
}

impl BesselZeroTable {
    /// Computes the first `count` zeros sequentially, each from a verified
    /// sign-change bracket.
    pub fn new(nu: f64, count: usize) -> Result<Self> {
        ensure_finite("nu", nu)?;
        if nu <= -1.0 {
            return domain(format!("Bessel zeros require nu > -1, got {nu}"));
        }
        let mut zeros = Vec::with_capacity(count);
        if nu == 0.5 || nu == -0.5 {
            let off = if nu > 0.0 { 0.0 } else { 0.5 };
            zeros.extend((1..=count).map(|n| (n as f64 - off) * PI));
            return Ok(Self { nu, zeros });
        }
        let mut start = first_search_start(nu);
        for n in 1..=count {
            let z = next_zero(nu, start, n)?;
            start = z + 0.1;
            zeros.push(z);
        }
        Ok(Self { nu, zeros })
    }

    pub fn count(&self) -> usize {
        self.zeros.len()
    }

    /// The `n`-th zero, 1-based.
    pub fn get(&self, n: usize) -> Option<f64> {
        n.checked_sub(1).and_then(|i| self.zeros.get(i).copied())
    }
}

/// The `n`-th positive zero `j_{nu,n}`.
pub fn bessel_j_zero(nu: f64, n: usize) -> Result<f64> {
    if n == 0 {
        return domain("zero index is 1-based");
    }
    let t = BesselZeroTable::new(nu, n)?;
    Ok(t.zeros[n - 1])
}
