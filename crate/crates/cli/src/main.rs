mod output;

use clap::{Args, Parser, Subcommand, ValueEnum};
use output::{num, Field, Format, Table};
use std::io::{self, Write};
use std::process::ExitCode;
use struve_core::inequality::{check, scan_region, GridSpec, InequalityReport, PointStatus, Range, TheoremId};
use struve_core::selftest::{run_suite, Suite};
use struve_core::{
    bessel_j, bessel_y, hadamard_product_eval, j_series_h, normalized, struve_h, struve_h_integral,
    struve_h_series, struve_k, struve_l, BesselZeroTable, EvalMethod, EvalResult, FunctionId,
    NormalizedId, NormalizedKind, StruveError,
};

const EXIT_VIOLATION: u8 = 1;
const EXIT_NUMERIC: u8 = 3;
const MAX_ZEROS: usize = 10_000;

#[derive(Parser)]
#[command(name = "struve", version, about = "Struve and Bessel functions, zeros, and inequality checks")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Evaluate one function at one point.
    Eval(EvalArgs),
    /// Tabulate positive zeros of H_nu or J_nu.
    Zeros(ZerosArgs),
    /// Check an inequality on a grid inside its stated region.
    Verify(GridArgs),
    /// Evaluate inequality margins on any grid without region checks.
    Scan(GridArgs),
    /// Run the built-in consistency suites.
    Selftest(SelftestArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Auto,
    Series,
    Integral,
    Product,
    Jseries,
}

#[derive(Args)]
struct EvalArgs {
    #[arg(long = "fn", value_parser = parse_fn)]
    function: FunctionId,
    #[arg(long, allow_hyphen_values = true)]
    nu: f64,
    #[arg(long, allow_hyphen_values = true)]
    x: f64,
    #[arg(long, value_enum, default_value = "auto")]
    method: Method,
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
    #[arg(long, value_enum, default_value = "csv")]
    out: Format,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ZeroFn {
    #[value(name = "H")]
    H,
    #[value(name = "J")]
    J,
}

#[derive(Args)]
struct ZerosArgs {
    #[arg(long = "fn", value_enum)]
    function: ZeroFn,
    #[arg(long, allow_hyphen_values = true)]
    nu: f64,
    #[arg(long)]
    count: usize,
    #[arg(long, value_enum, default_value = "csv")]
    out: Format,
}

#[derive(Args)]
struct GridArgs {
    #[arg(long, value_parser = parse_theorem)]
    theorem: TheoremId,
    #[arg(long = "nu-grid", allow_hyphen_values = true, value_parser = parse_range)]
    nu_grid: Range,
    #[arg(long = "x-grid", allow_hyphen_values = true, value_parser = parse_range)]
    x_grid: Range,
    #[arg(long = "y-grid", allow_hyphen_values = true, value_parser = parse_range)]
    y_grid: Option<Range>,
    #[arg(long, value_enum, default_value = "csv")]
    out: Format,
    /// Defaults to the theorem's own tolerance (1e-9 for most parts).
    #[arg(long)]
    tolerance: Option<f64>,
    #[arg(long, default_value_t = struve_core::inequality::DEFAULT_EXCLUSION)]
    exclusion: f64,
}

#[derive(Args)]
struct SelftestArgs {
    #[arg(long, value_parser = parse_suite)]
    suite: Option<Suite>,
}

fn parse_fn(s: &str) -> Result<FunctionId, String> {
    s.parse()
}

fn parse_theorem(s: &str) -> Result<TheoremId, String> {
    s.parse()
}

fn parse_range(s: &str) -> Result<Range, String> {
    s.parse()
}

fn parse_suite(s: &str) -> Result<Suite, String> {
    s.parse()
}

fn fail(e: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {e}");
    ExitCode::from(EXIT_NUMERIC)
}

fn usage(msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("usage error: {msg}");
    ExitCode::from(2)
}

fn emit(t: &Table, f: Format) -> ExitCode {
    let stdout = io::stdout();
    let mut lock = stdout.lock();
    match t.write(f, &mut lock).and_then(|_| lock.flush()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => fail(e),
    }
}

fn h_prefactor(nu: f64, x: f64) -> struve_core::Result<f64> {
    let ln = (nu + 1.0) * x.ln() - nu * std::f64::consts::LN_2 - 0.5 * std::f64::consts::PI.ln()
        - struve_core::ln_gamma(nu + 1.5)?;
    Ok(ln.exp())
}

/// Product over zeros, growing the number of factors until the tail bound
/// meets the tolerance or 3200 factors are used.
fn eval_product(nu: f64, x: f64, tol: f64) -> struve_core::Result<EvalResult> {
    let mut n = 50;
    loop {
        let p = hadamard_product_eval(nu, x, n)?;
        if p.tail_bound <= tol * p.partial.abs() || n >= 3200 {
            return Ok(EvalResult::new(p.partial, EvalMethod::Product, p.tail_bound, n));
        }
        n *= 2;
    }
}

fn eval_jseries(nu: f64, x: f64, tol: f64) -> struve_core::Result<EvalResult> {
    let mut n = 10;
    loop {
        let p = j_series_h(nu, x, n)?;
        if p.tail_bound <= tol * p.partial.abs() || n >= 400 {
            return Ok(EvalResult::new(p.partial, EvalMethod::JSeries, p.tail_bound, n));
        }
        n += 10;
    }
}

fn evaluate(a: &EvalArgs) -> Result<struve_core::Result<EvalResult>, String> {
    let (nu, x, tol) = (a.nu, a.x, a.tol);
    if !(tol > 0.0) {
        return Err(format!("--tol must be positive, got {tol}"));
    }
    use FunctionId as F;
    let norm = |k| normalized(NormalizedId::new(k, nu), x);
    Ok(match (a.function, a.method) {
        (F::H, Method::Auto) => struve_h(nu, x),
        (F::H, Method::Series) => struve_h_series(nu, x, tol),
        (F::H, Method::Integral) => struve_h_integral(nu, x, tol),
        (F::H, Method::Jseries) => eval_jseries(nu, x, tol),
        (F::H, Method::Product) => {
            if x < 0.0 {
                Err(StruveError::Domain(format!("H_nu(x) requires x >= 0, got {x}")))
            } else if x == 0.0 {
                Ok(EvalResult::new(0.0, EvalMethod::Product, 0.0, 0))
            } else {
                h_prefactor(nu, x).and_then(|c| Ok(eval_product(nu, x, tol)?.scaled(c)))
            }
        }
        (F::CalH, Method::Product) => eval_product(nu, x, tol),
        (F::L, Method::Auto) => struve_l(nu, x),
        (F::K, Method::Auto) => {
            if nu > -0.5 {
                struve_k(nu, x, tol)
            } else {
                struve_core::struve::struve_k_via_h_minus_y(nu, x)
            }
        }
        (F::J, Method::Auto) => bessel_j(nu, x),
        (F::Y, Method::Auto) => bessel_y(nu, x),
        (F::CalH, Method::Auto) => norm(NormalizedKind::CalH),
        (F::BbH, Method::Auto) => norm(NormalizedKind::BbH),
        (F::CalK, Method::Auto) => norm(NormalizedKind::CalK),
        (f, _) => return Err(format!("method not available for {f:?}; use --method auto")),
    })
}

fn fn_name(f: FunctionId) -> &'static str {
    match f {
        FunctionId::H => "H",
        FunctionId::L => "L",
        FunctionId::K => "K",
        FunctionId::J => "J",
        FunctionId::Y => "Y",
        FunctionId::CalH => "calH",
        FunctionId::BbH => "bbH",
        FunctionId::CalK => "calK",
    }
}

fn cmd_eval(a: EvalArgs) -> ExitCode {
    let r = match evaluate(&a) {
        Err(msg) => return usage(msg),
        Ok(Err(e)) => return fail(e),
        Ok(Ok(r)) => r,
    };
    let mut t = Table::new(vec!["fn", "nu", "x", "value", "method", "est_error"]);
    t.push(vec![
        fn_name(a.function).into(),
        a.nu.into(),
        a.x.into(),
        r.value.into(),
        r.method.as_str().into(),
        r.est_error.into(),
    ]);
    emit(&t, a.out)
}

fn cmd_zeros(a: ZerosArgs) -> ExitCode {
    if a.count == 0 || a.count > MAX_ZEROS {
        return usage(format!("--count must be between 1 and {MAX_ZEROS}"));
    }
    let mut t = Table::new(vec!["n", "zero", "multiplicity", "bracket_lo", "bracket_hi", "certificate"]);
    match a.function {
        ZeroFn::H => {
            let z = match struve_core::zeros::zero_table(a.nu, a.count) {
                Ok(z) => z,
                Err(e) => return fail(e),
            };
            for i in 0..a.count {
                let cert = match z.certificate[i] {
                    struve_core::ZeroCertificate::SignChange { .. } => "sign_change",
                    struve_core::ZeroCertificate::LocalMinimum { .. } => "local_minimum",
                    struve_core::ZeroCertificate::ClosedForm => "closed_form",
                };
                t.push(vec![
                    Field::Int(i as u64 + 1),
                    z.zeros[i].into(),
                    Field::Int(z.multiplicity[i] as u64),
                    z.bracket[i].0.into(),
                    z.bracket[i].1.into(),
                    cert.into(),
                ]);
            }
        }
        ZeroFn::J => {
            // zeros of J_nu interlace with those of J_{nu+1}
            let tables = BesselZeroTable::new(a.nu, a.count)
                .and_then(|j| Ok((j, BesselZeroTable::new(a.nu + 1.0, a.count)?)));
            let (j, upper) = match tables {
                Ok(t) => t,
                Err(e) => return fail(e),
            };
            for i in 0..a.count {
                let lo = if i == 0 { 0.0 } else { upper.zeros[i - 1] };
                t.push(vec![
                    Field::Int(i as u64 + 1),
                    j.zeros[i].into(),
                    Field::Int(1),
                    lo.into(),
                    upper.zeros[i].into(),
                    "sign_change".into(),
                ]);
            }
        }
    }
    emit(&t, a.out)
}

fn report_table(r: &InequalityReport) -> Table {
    let with_y = r.theorem_id.uses_y();
    let mut header = vec!["nu", "x"];
    if with_y {
        header.push("y");
    }
    header.extend(["lhs", "rhs", "margin", "status", "method", "est_error", "note"]);
    let mut t = Table::new(header);
    for p in &r.points {
        let mut row: Vec<Field> = vec![p.nu.into(), p.x.into()];
        if with_y {
            row.push(Field::opt(p.y));
        }
        row.extend([
            Field::opt(p.lhs),
            Field::opt(p.rhs),
            Field::opt(p.margin),
            p.status.as_str().into(),
            p.method.clone().map_or(Field::Null, Field::Str),
            Field::opt(p.est_error),
            p.note.clone().map_or(Field::Null, Field::Str),
        ]);
        t.push(row);
    }
    t
}

fn summary(r: &InequalityReport) -> String {
    let argmin = r.argmin.as_ref().map_or("none".to_string(), |a| {
        format!("({})", a.iter().map(|v| num(*v)).collect::<Vec<_>>().join(", "))
    });
    format!(
        "summary: theorem={} points={} min_margin={} argmin={} n_violations={} n_excluded={} n_errors={} tolerance={} eval_budget={}",
        r.theorem_id,
        r.points.len(),
        r.min_margin.map_or("none".to_string(), num),
        argmin,
        r.violations.len(),
        r.n_excluded,
        r.n_errors,
        num(r.tolerance),
        r.eval_budget
    )
}

fn cmd_grid(a: GridArgs, scan: bool) -> ExitCode {
    let mut grid = GridSpec::new(a.nu_grid, a.x_grid).with_exclusion(a.exclusion);
    if let Some(y) = a.y_grid {
        grid = grid.with_y(y);
    }
    let tol = a.tolerance.unwrap_or(a.theorem.default_tolerance());
    let r = if scan {
        scan_region(a.theorem, &grid, tol)
    } else {
        check(a.theorem, &grid, tol)
    };
    let r = match r {
        Ok(r) => r,
        Err(e) if scan => return usage(e),
        Err(e) => return fail(e),
    };
    let code = emit(&report_table(&r), a.out);
    if code != ExitCode::SUCCESS {
        return code;
    }
    eprintln!("{}", summary(&r));
    if scan {
        ExitCode::SUCCESS
    } else if r.n_errors > 0 {
        for p in r.points.iter().filter(|p| p.status == PointStatus::Error) {
            eprintln!("error at nu={} x={}: {}", num(p.nu), num(p.x), p.note.as_deref().unwrap_or(""));
        }
        ExitCode::from(EXIT_NUMERIC)
    } else if !r.violations.is_empty() {
        ExitCode::from(EXIT_VIOLATION)
    } else {
        ExitCode::SUCCESS
    }
}

fn cmd_selftest(a: SelftestArgs) -> ExitCode {
    let suites: Vec<Suite> = match a.suite {
        Some(s) => vec![s],
        None => Suite::ALL.to_vec(),
    };
    let mut ok = true;
    for s in suites {
        let r = run_suite(s);
        println!(
            "{}: {} ({} checks, worst error/tolerance {})",
            s.as_str(),
            if r.passed { "pass" } else { "fail" },
            r.checks,
            num(r.worst_ratio)
        );
        for f in &r.failures {
            println!("  {f}");
        }
        ok &= r.passed;
    }
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_VIOLATION)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.cmd {
        Cmd::Eval(a) => cmd_eval(a),
        Cmd::Zeros(a) => cmd_zeros(a),
        Cmd::Verify(a) => cmd_grid(a, false),
        Cmd::Scan(a) => cmd_grid(a, true),
        Cmd::Selftest(a) => cmd_selftest(a),
    }
}
