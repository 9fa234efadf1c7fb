//! Acceptance criteria 1 to 11. Each criterion prints one PASS or FAIL line
//! (written straight to stderr so it shows without `--nocapture`), then the
//! test fails if any criterion failed.

use std::f64::consts::PI;
use std::io::Write;
use std::process::Command;
use struve_core::bessel::{rayleigh_sum_j, rayleigh_tail_bound};
use struve_core::inequality::{check, GridSpec, Range, TheoremId};
use struve_core::zeros::rayleigh_sum_h;
use struve_core::*;

struct Outcome {
    ok: bool,
    detail: String,
}

impl Outcome {
    fn new() -> Self {
        Outcome { ok: true, detail: String::new() }
    }

    fn require(&mut self, cond: bool, what: impl FnOnce() -> String) {
        if !cond {
            if self.ok {
                self.detail = what();
            }
            self.ok = false;
        }
    }

    fn value<T>(&mut self, r: Result<T>, what: &str) -> Option<T> {
        match r {
            Ok(v) => Some(v),
            Err(e) => {
                self.require(false, || format!("{what}: {e}"));
                None
            }
        }
    }
}

fn line(n: u32, title: &str, o: &Outcome, extra: &str) {
    let status = if o.ok { "PASS" } else { "FAIL" };
    let detail = if o.ok { extra.to_string() } else { o.detail.clone() };
    let mut e = std::io::stderr().lock();
    writeln!(e, "criterion {n:>2} {status}: {title} ({detail})").unwrap();
}

fn grid(nu: &str, x: &str) -> GridSpec {
    GridSpec::new(nu.parse().unwrap(), x.parse().unwrap())
}

fn criterion_1() -> (Outcome, String) {
    let mut o = Outcome::new();
    let mut worst: f64 = 0.0;
    for i in 1..=200 {
        let x = 30.0 * i as f64 / 200.0;
        let c = (2.0 / (PI * x)).sqrt();
        let cases = [
            (struve_h(-0.5, x).map(|r| r.value), c * x.sin(), "H_-1/2"),
            (struve_h(0.5, x).map(|r| r.value), c * (1.0 - x.cos()), "H_1/2"),
            (struve_k(0.5, x, 1e-14).map(|r| r.value), c, "K_1/2"),
            (struve_l(-0.5, x).map(|r| r.value), c * x.sinh(), "L_-1/2"),
        ];
        for (v, exact, name) in cases {
            if let Some(v) = o.value(v, name) {
                let err = (v - exact).abs() / exact.abs().max(1.0);
                worst = worst.max(err);
                o.require(err <= 1e-11, || format!("{name}({x}) off by {err:e}"));
            }
        }
    }
    (o, format!("800 points, worst scaled error {worst:.2e}"))
}

const ORDERS: [f64; 5] = [-0.4, 0.0, 0.5, 1.0, 2.5];
const POINTS: [f64; 6] = [0.5, 1.0, 2.0, 5.0, 10.0, 15.0];

fn criterion_2() -> (Outcome, String) {
    let mut o = Outcome::new();
    let mut worst: f64 = 0.0;
    for nu in ORDERS {
        for x in POINTS {
            let s = o.value(struve_h_series(nu, x, 1e-15), "series");
            let i = o.value(struve_h_integral(nu, x, 1e-13), "integral");
            let j = o.value(j_series_h(nu, x, 80), "J-series");
            if let (Some(s), Some(i), Some(j)) = (s, i, j) {
                for (name, v) in [("integral", i.value), ("J-series", j.partial)] {
                    let e = (v - s.value).abs() / s.value.abs();
                    worst = worst.max(e);
                    o.require(e <= 1e-8, || format!("{name} vs series at nu={nu} x={x}: {e:e}"));
                }
            }
        }
    }
    (o, format!("30 points, worst relative difference {worst:.2e}"))
}

fn criterion_3() -> (Outcome, String) {
    let mut o = Outcome::new();
    let mut worst = [0.0f64; 5];
    let checks = [
        (None, 1e-8),
        (Some(Recurrence::Rec2), 1e-10),
        (Some(Recurrence::Rec3), 1e-10),
        (Some(Recurrence::Rec4), 1e-10),
        (Some(Recurrence::Rec1K), 1e-7),
    ];
    for nu in ORDERS {
        for x in POINTS {
            for (k, (which, tol)) in checks.iter().enumerate() {
                let r = match which {
                    None => ode_residual(nu, x),
                    Some(w) => recurrence_residual(nu, x, *w),
                };
                if let Some(r) = o.value(r, "residual") {
                    worst[k] = worst[k].max(r);
                    o.require(r <= *tol, || format!("{which:?} at nu={nu} x={x}: {r:e} > {tol:e}"));
                }
            }
        }
    }
    let d = format!(
        "worst ode {:.1e}, rec2 {:.1e}, rec3 {:.1e}, rec4 {:.1e}, rec1K {:.1e}",
        worst[0], worst[1], worst[2], worst[3], worst[4]
    );
    (o, d)
}

fn criterion_4() -> (Outcome, String) {
    let mut o = Outcome::new();
    for n in 1..=10 {
        if let Some(z) = o.value(struve_h_zero(-0.5, n), "zero") {
            o.require((z - n as f64 * PI).abs() <= 1e-10, || format!("h(-1/2,{n}) = {z}"));
        }
        if let Some(z) = o.value(struve_h_zero(0.5, n), "zero") {
            o.require((z - 2.0 * n as f64 * PI).abs() <= 1e-10, || format!("h(1/2,{n}) = {z}"));
        }
    }
    let mut worst: f64 = 0.0;
    for nu in [-0.4, -0.2, 0.0, 0.2, 0.4] {
        for n in 1..=10 {
            let j = o.value(bessel_j_zero(nu, n), "j zero");
            let j1 = o.value(bessel_j_zero(nu, n + 1), "j zero");
            let h = o.value(struve_h_zero(nu, n), "h zero");
            if let (Some(j), Some(j1), Some(h)) = (j, j1, h) {
                o.require(j < h && h < j1, || format!("interlacing fails at nu={nu} n={n}"));
            }
        }
        if let Some(r) = o.value(zero_reciprocal_square_sum(nu, 200), "sum") {
            let d = rayleigh_sum_h(nu) - r.partial;
            worst = worst.max(d.abs());
            o.require(d.abs() <= 2e-3 && d >= -1e-14 && d <= r.tail_bound, || {
                format!("Euler-Rayleigh sum at nu={nu}: gap {d:e}, tail bound {:e}", r.tail_bound)
            });
        }
    }
    (o, format!("largest Euler-Rayleigh gap {worst:.2e}"))
}

fn criterion_5() -> (Outcome, String) {
    let mut o = Outcome::new();
    let n = 500;
    for nu in [0.0, 0.5, 1.0] {
        if let Some(t) = o.value(BesselZeroTable::new(nu, n), "bessel zeros") {
            let p: f64 = t.zeros.iter().map(|z| 1.0 / (z * z)).sum();
            let exact = rayleigh_sum_j(nu).unwrap();
            let d = exact - p;
            o.require(d >= 0.0 && d <= rayleigh_tail_bound(n), || {
                format!("Rayleigh sum at nu={nu}: gap {d:e}")
            });
        }
    }
    for i in 0..=40 {
        let nu = -0.5 + 0.1 * i as f64;
        if let Some(j) = o.value(bessel_j_zero(nu, 1), "j1") {
            o.require(j * j > 4.0 * (nu + 1.0), || format!("j1^2 <= 4(nu+1) at nu={nu}"));
        }
    }
    (o, "nu in {0, 0.5, 1} with 500 zeros; j1^2 > 4(nu+1) on nu in [-0.5, 3.5]".into())
}

fn criterion_6() -> (Outcome, String) {
    let mut o = Outcome::new();
    let mut worst_excess: f64 = f64::NEG_INFINITY;
    for nu in [-0.5, -0.25, 0.0, 0.25, 0.5] {
        for i in -40..=40 {
            let x = 0.25 * i as f64;
            let p = o.value(hadamard_product_eval(nu, x, 200), "product");
            let f = o.value(normalized(NormalizedId::new(NormalizedKind::CalH, nu), x), "calH");
            if let (Some(p), Some(f)) = (p, f) {
                let d = (p.partial - f.value).abs();
                worst_excess = worst_excess.max(d - p.tail_bound);
                o.require(d <= p.tail_bound + 1e-9, || {
                    format!("product at nu={nu} x={x}: diff {d:e}, certificate {:e}", p.tail_bound)
                });
            }
        }
    }
    let mut worst_ml: f64 = 0.0;
    for i in 1..200 {
        let x = 0.05 * i as f64;
        if (x / PI - (x / PI).round()).abs() * PI < 1e-3 {
            continue;
        }
        let exact = 1.0 / x.tan() - 1.0 / x;
        if let Some(r) = o.value(mittag_leffler_ratio(-0.5, x, 1000), "ratio") {
            let e = (r.partial - exact).abs() / exact.abs().max(1.0);
            worst_ml = worst_ml.max(e);
            o.require(e <= 1e-8, || format!("ratio at x={x}: {e:e}"));
        }
        let exact = 1.0 / x.tanh() - 1.0 / x;
        if let Some(r) = o.value(mittag_leffler_ratio_modified(-0.5, x, 1000), "modified ratio") {
            let e = (r.partial - exact).abs() / exact.abs().max(1.0);
            worst_ml = worst_ml.max(e);
            o.require(e <= 1e-8, || format!("modified ratio at x={x}: {e:e}"));
        }
    }
    (o, format!("product within certificate (max excess {worst_excess:.1e}); ratios worst {worst_ml:.1e}"))
}

fn run_checks(o: &mut Outcome, cases: &[(TheoremId, GridSpec)]) -> String {
    let mut points = 0;
    let mut lowest = f64::INFINITY;
    let mut failures = Vec::new();
    for (id, g) in cases {
        let r = match check(*id, g, id.default_tolerance()) {
            Ok(r) => r,
            Err(e) => {
                failures.push(format!("{id}: {e}"));
                continue;
            }
        };
        points += r.points.len();
        if let Some(m) = r.min_margin {
            lowest = lowest.min(m);
        }
        if !r.holds() {
            let worst = r.argmin.clone().unwrap_or_default();
            failures.push(format!(
                "{id}: {} violations and {} errors in {} points, min margin {:.3e} at {:?}",
                r.violations.len(),
                r.n_errors,
                r.points.len(),
                r.min_margin.unwrap_or(f64::NAN),
                worst
            ));
        }
    }
    if !failures.is_empty() {
        let msg = failures.join("; ");
        o.require(false, || msg);
    }
    format!("{points} grid points, lowest normalized margin {lowest:.2e}")
}

fn criterion_7() -> (Outcome, String) {
    use TheoremId::*;
    let mut o = Outcome::new();
    let cases = [
        (T1a, grid("-1.5:-0.5:0.1", "0.05:10:0.05")),
        (T1b, grid("-0.5:0.5:0.1", "0.05:5:0.05")),
        (T1cLag, grid("-1.5:-0.5:0.1", "0.05:10:0.05")),
        (T1cNew, grid("-1.5:-0.5:0.1", "0.05:5:0.05")),
        (T1d, grid("1.5:4:0.25", "0.01:3.14159265358979:0.01")),
        (T1e, grid("1.5:4:0.25", "0.01:3.14:0.01")),
    ];
    let mut d = run_checks(&mut o, &cases);
    for nu in [-1.0, -0.5, 0.0, 1.0, 2.0] {
        if let Some(p) = o.value(asymptotic_constant_probe(nu, ProbeSide::Zero), "zero probe") {
            let e = (p - 1.0 / (nu + 1.5)).abs();
            o.require(e <= 1e-3, || format!("zero-side probe at nu={nu}: {p}"));
        }
    }
    for nu in [2.0, 2.5, 3.0] {
        if let Some(p) = o.value(asymptotic_constant_probe(nu, ProbeSide::Infinity), "infinity probe") {
            let e = (p - 1.0 / (nu + 0.5)).abs();
            o.require(e <= 2e-2, || format!("infinity-side probe at nu={nu}: {p}"));
        }
    }
    d.push_str("; asymptotic probes within tolerance");
    (o, d)
}

fn criterion_8() -> (Outcome, String) {
    use TheoremId::*;
    let mut o = Outcome::new();
    let r2 = |nu: &str| {
        let x: Range = "0.5:10:0.5".parse().unwrap();
        GridSpec::new(nu.parse().unwrap(), x).with_y(x)
    };
    let cases = [
        (T2aCm, grid("-0.4:2:0.3", "0.2:10:0.2")),
        (T2aE1, grid("-0.45:3:0.25", "0.1:20:0.1")),
        (T2bCm, grid("-0.4:2:0.3", "0.2:10:0.2")),
        (T2bT1, grid("0.5:3:0.25", "0.05:10:0.05")),
        (T2cCm, grid("-0.45:0:0.05", "0.2:10:0.2")),
        (T2dMono, grid("0.6:3:0.2", "0.2:10:0.1")),
        (T2dTuranK, grid("-0.45:3:0.25", "0.1:20:0.1")),
        (T2eR1, grid("-0.45:-0.05:0.05", "0.1:20:0.1")),
        (T2fR2, r2("-0.4")),
        (T2fR2, r2("-0.25")),
        (T2fR2, r2("-0.1")),
        (T2gR3, grid("1.6:4:0.2", "0.1:10:0.1")),
        (T2gR3Rev, grid("0.6:1.4:0.1", "0.1:10:0.1")),
    ];
    let d = run_checks(&mut o, &cases);
    (o, d)
}

fn criterion_9() -> (Outcome, String) {
    let mut o = Outcome::new();
    let mut d = String::new();
    for m in 1..=3 {
        let id = TheoremId::Lag(Some(m));
        d = run_checks(&mut o, &[(id, grid("-0.5:0.5:0.25", "-20:20:0.1"))]);
    }
    for nu in [-0.5, -0.25, 0.0, 0.25, 0.5] {
        if let Some(v) = o.value(laguerre_margin(nu, 1, 0.0), "x = 0") {
            let exact = 2.0 / (3.0 * (2.0 * nu + 3.0));
            o.require((v.value - exact).abs() <= 1e-10, || format!("value at 0 for nu={nu}: {}", v.value));
        }
    }
    (o, format!("m = 1, 2, 3; last grid: {d}"))
}

fn criterion_10() -> (Outcome, String) {
    let mut o = Outcome::new();
    let d = run_checks(&mut o, &[(TheoremId::TuranL, grid("-1.5:-0.5:0.1", "0.05:20:0.05"))]);
    (o, d)
}

fn criterion_11() -> (Outcome, String) {
    let mut o = Outcome::new();
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_struve"))
            .args([
                "verify",
                "--theorem",
                "T2b_T1",
                "--nu-grid",
                "0.75:2:0.25",
                "--x-grid",
                "0.1:5:0.1",
                "--out",
                "json",
            ])
            .output()
            .expect("run struve")
    };
    let a = run();
    let b = run();
    o.require(a.status.code() == Some(0), || format!("exit status {:?}", a.status));
    o.require(a.stdout == b.stdout && a.stderr == b.stderr, || "outputs differ".into());
    o.require(!a.stdout.is_empty(), || "empty output".into());
    (o, format!("{} bytes identical across two runs", a.stdout.len()))
}

#[test]
fn acceptance() {
    let criteria: [(&str, fn() -> (Outcome, String)); 11] = [
        ("closed-form anchors", criterion_1),
        ("cross-representation agreement", criterion_2),
        ("ODE and recurrence residuals", criterion_3),
        ("zeros, interlacing, Euler-Rayleigh sum", criterion_4),
        ("Bessel Rayleigh identity", criterion_5),
        ("product and partial-fraction expansions", criterion_6),
        ("first theorem margins and asymptotic probes", criterion_7),
        ("second theorem margins", criterion_8),
        ("Laguerre inequalities", criterion_9),
        ("modified Struve Turán inequality", criterion_10),
        ("CLI determinism", criterion_11),
    ];
    let mut failed = Vec::new();
    for (i, (title, f)) in criteria.iter().enumerate() {
        let start = std::time::Instant::now();
        let (o, extra) = f();
        let extra = format!("{extra}; {:.1}s", start.elapsed().as_secs_f64());
        line(i as u32 + 1, title, &o, &extra);
        if !o.ok {
            failed.push(i + 1);
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
