//! Built-in consistency suites run by the `selftest` command.

use crate::bessel::{rayleigh_sum_j, rayleigh_tail_bound, BesselZeroTable};
use crate::error::Result;
use crate::expansions::j_series_h;
use crate::struve::{
    ode_residual, recurrence_residual, struve_h, struve_h_integral, struve_h_series, struve_k,
    struve_l, Recurrence,
};
use crate::zeros::{rayleigh_sum_h, zero_reciprocal_square_sum, zero_table};
use serde::Serialize;
use std::f64::consts::PI;

pub const CROSS_ORDERS: [f64; 5] = [-0.4, 0.0, 0.5, 1.0, 2.5];
pub const CROSS_POINTS: [f64; 6] = [0.5, 1.0, 2.0, 5.0, 10.0, 15.0];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    ClosedForm,
    Cross,
    Ode,
    Recurrence,
    Rayleigh,
}

impl Suite {
    pub const ALL: [Suite; 5] = [
        Suite::ClosedForm,
        Suite::Cross,
        Suite::Ode,
        Suite::Recurrence,
        Suite::Rayleigh,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Suite::ClosedForm => "closed_form",
            Suite::Cross => "cross",
            Suite::Ode => "ode",
            Suite::Recurrence => "recurrence",
            Suite::Rayleigh => "rayleigh",
        }
    }
}

impl std::str::FromStr for Suite {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Suite::ALL
            .iter()
            .copied()
            .find(|x| x.as_str() == s)
            .ok_or_else(|| format!("unknown suite '{s}'"))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub passed: bool,
    pub checks: usize,
    /// Largest observed error divided by its tolerance.
    pub worst_ratio: f64,
    pub failures: Vec<String>,
}

struct Tally {
    checks: usize,
    worst: f64,
    failures: Vec<String>,
}

impl Tally {
    fn new() -> Self {
        Tally { checks: 0, worst: 0.0, failures: Vec::new() }
    }

    fn check(&mut self, label: impl FnOnce() -> String, err: f64, tol: f64) {
        self.checks += 1;
        let r = err / tol;
        if r.is_nan() || r > 1.0 {
            self.failures.push(format!("{}: error {err:e} > {tol:e}", label()));
        }
        if r.is_nan() {
            self.worst = f64::INFINITY;
        } else {
            self.worst = self.worst.max(r);
        }
    }

    fn result(&mut self, label: impl FnOnce() -> String, r: Result<f64>, tol: f64) {
        match r {
            Ok(e) => self.check(label, e, tol),
            Err(e) => {
                self.checks += 1;
                self.worst = f64::INFINITY;
                self.failures.push(format!("{}: {e}", label()));
            }
        }
    }

    fn flag(&mut self, label: impl FnOnce() -> String, ok: Result<bool>) {
        self.checks += 1;
        match ok {
            Ok(true) => {}
            Ok(false) => {
                self.worst = f64::INFINITY;
                self.failures.push(format!("{}: failed", label()));
            }
            Err(e) => {
                self.worst = f64::INFINITY;
                self.failures.push(format!("{}: {e}", label()));
            }
        }
    }

    fn finish(self, suite: Suite) -> SuiteReport {
        SuiteReport {
            suite,
            passed: self.failures.is_empty(),
            checks: self.checks,
            worst_ratio: self.worst,
            failures: self.failures,
        }
    }
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1.0)
}

fn closed_form() -> SuiteReport {
    let mut t = Tally::new();
    for i in 1..=200 {
        let x = 30.0 * i as f64 / 200.0;
        let c = (2.0 / (PI * x)).sqrt();
        let cases: [(&str, Result<f64>, f64); 4] = [
            ("H_-1/2", struve_h(-0.5, x).map(|r| r.value), c * x.sin()),
            ("H_1/2", struve_h(0.5, x).map(|r| r.value), c * (1.0 - x.cos())),
            ("K_1/2", struve_k(0.5, x, 1e-14).map(|r| r.value), c),
            ("L_-1/2", struve_l(-0.5, x).map(|r| r.value), c * x.sinh()),
        ];
        for (name, v, exact) in cases {
            t.result(|| format!("{name}({x})"), v.map(|v| rel(v, exact)), 1e-11);
        }
    }
    t.finish(Suite::ClosedForm)
}

fn cross() -> SuiteReport {
    let mut t = Tally::new();
    for nu in CROSS_ORDERS {
        for x in CROSS_POINTS {
            let s = struve_h_series(nu, x, 1e-15).map(|r| r.value);
            let i = struve_h_integral(nu, x, 1e-13).map(|r| r.value);
            let j = j_series_h(nu, x, 80).map(|r| r.partial);
            match (s, i, j) {
                (Ok(s), Ok(i), Ok(j)) => {
                    let r = |a: f64, b: f64| (a - b).abs() / b.abs();
                    t.check(|| format!("series/integral nu={nu} x={x}"), r(i, s), 1e-8);
                    t.check(|| format!("series/J-series nu={nu} x={x}"), r(j, s), 1e-8);
                }
                (s, i, j) => {
                    let e = s.err().or(i.err()).or(j.err()).map(|e| e.to_string());
                    t.checks += 1;
                    t.worst = f64::INFINITY;
                    t.failures.push(format!("nu={nu} x={x}: {}", e.unwrap_or_default()));
                }
            }
        }
    }
    t.finish(Suite::Cross)
}

fn ode() -> SuiteReport {
    let mut t = Tally::new();
    for nu in CROSS_ORDERS {
        for x in CROSS_POINTS {
            t.result(|| format!("ODE nu={nu} x={x}"), ode_residual(nu, x), 1e-8);
        }
    }
    t.finish(Suite::Ode)
}

fn recurrence() -> SuiteReport {
    let mut t = Tally::new();
    let cases = [
        (Recurrence::Rec2, "rec2", 1e-10),
        (Recurrence::Rec3, "rec3", 1e-10),
        (Recurrence::Rec4, "rec4", 1e-10),
        (Recurrence::Rec1K, "rec1K", 1e-7),
    ];
    for nu in CROSS_ORDERS {
        for x in CROSS_POINTS {
            for (which, name, tol) in cases {
                t.result(|| format!("{name} nu={nu} x={x}"), recurrence_residual(nu, x, which), tol);
            }
        }
    }
    t.finish(Suite::Recurrence)
}

fn rayleigh() -> SuiteReport {
    let mut t = Tally::new();
    for n in 1..=10 {
        let a = zero_table(-0.5, n).map(|z| (z.zeros[n - 1] - n as f64 * PI).abs());
        t.result(|| format!("h(-1/2,{n})"), a, 1e-10);
        let b = zero_table(0.5, n).map(|z| (z.zeros[n - 1] - 2.0 * n as f64 * PI).abs());
        t.result(|| format!("h(1/2,{n})"), b, 1e-10);
    }
    for nu in [-0.4, -0.2, 0.0, 0.2, 0.4] {
        let inter = (|| -> Result<bool> {
            let j = BesselZeroTable::new(nu, 11)?;
            let h = zero_table(nu, 10)?;
            Ok((0..10).all(|n| j.zeros[n] < h.zeros[n] && h.zeros[n] < j.zeros[n + 1]))
        })();
        t.flag(|| format!("interlacing nu={nu}"), inter);
        let s = zero_reciprocal_square_sum(nu, 200).map(|r| {
            let d = rayleigh_sum_h(nu) - r.partial;
            d >= -1e-14 && d <= r.tail_bound + 1e-14 && d <= 2e-3
        });
        t.flag(|| format!("Euler-Rayleigh sum nu={nu}"), s);
    }
    for nu in [0.0, 0.5, 1.0] {
        let r = (|| -> Result<bool> {
            let j = BesselZeroTable::new(nu, 200)?;
            let p: f64 = j.zeros.iter().map(|z| 1.0 / (z * z)).sum();
            let d = rayleigh_sum_j(nu)? - p;
            Ok(d >= 0.0 && d <= rayleigh_tail_bound(200) && j.zeros[0].powi(2) > 4.0 * (nu + 1.0))
        })();
        t.flag(|| format!("Bessel Rayleigh sum nu={nu}"), r);
    }
    t.finish(Suite::Rayleigh)
}

pub fn run_suite(s: Suite) -> SuiteReport {
    match s {
        Suite::ClosedForm => closed_form(),
        Suite::Cross => cross(),
        Suite::Ode => ode(),
        Suite::Recurrence => recurrence(),
        Suite::Rayleigh => rayleigh(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_round_trip() {
        for s in Suite::ALL {
            assert_eq!(s.as_str().parse::<Suite>().unwrap(), s);
        }
    }

    #[test]
    fn suites_pass() {
        for s in Suite::ALL {
            let r = run_suite(s);
            assert!(r.passed, "{}: {:?}", s.as_str(), r.failures);
            assert!(r.checks > 0);
        }
    }
}
