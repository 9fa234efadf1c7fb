//! Grid certification of the Turán, Laguerre and bound inequalities.
//!
//! A margin is `(lhs - rhs) / scale`, arranged so that a nonnegative value
//! means the inequality holds at that point. A point is a violation when its
//! margin is below `-tolerance`.

mod margins;
pub mod quantities;

pub use quantities::{
    asymptotic_constant_probe, laguerre_margin, turan_delta_h, turan_delta_k, turan_delta_l,
    Est, ProbeSide,
};

use crate::error::{domain, ensure_finite, Result};
use rayon::prelude::*;
use serde::{Serialize, Serializer};
use std::fmt;

/// Step of the forward differences for the monotonicity check.
pub const MONO_STEP: f64 = 0.1;
/// Default radius excluded around `x = 0` and around zeros of `H`.
pub const DEFAULT_EXCLUSION: f64 = 1e-4;
const MAX_POINTS: usize = 5_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TheoremId {
    T1a,
    T1b,
    T1cLag,
    T1cNew,
    T1d,
    T1e,
    T2aCm,
    T2aE1,
    T2bCm,
    T2bT1,
    T2cCm,
    T2dMono,
    T2dTuranK,
    T2eR1,
    T2fR2,
    T2gR3,
    T2gR3Rev,
    /// Laguerre inequality of one order, or orders 1 to 3 when `None`.
    Lag(Option<u32>),
    TuranL,
    BoundSandwich,
    BoundQuotient,
}

impl TheoremId {
    pub const ALL: [TheoremId; 21] = [
        TheoremId::T1a,
        TheoremId::T1b,
        TheoremId::T1cLag,
        TheoremId::T1cNew,
        TheoremId::T1d,
        TheoremId::T1e,
        TheoremId::T2aCm,
        TheoremId::T2aE1,
        TheoremId::T2bCm,
        TheoremId::T2bT1,
        TheoremId::T2cCm,
        TheoremId::T2dMono,
        TheoremId::T2dTuranK,
        TheoremId::T2eR1,
        TheoremId::T2fR2,
        TheoremId::T2gR3,
        TheoremId::T2gR3Rev,
        TheoremId::Lag(None),
        TheoremId::TuranL,
        TheoremId::BoundSandwich,
        TheoremId::BoundQuotient,
    ];

    /// Default tolerance on the normalized margin.
    pub fn default_tolerance(self) -> f64 {
        match self {
            TheoremId::Lag(_) => 1e-10,
            TheoremId::TuranL => 1e-12,
            _ => 1e-9,
        }
    }

    pub fn uses_y(self) -> bool {
        self == TheoremId::T2fR2
    }

    fn region(self) -> Region {
        use TheoremId::*;
        let r = |lo, lo_open, hi, hi_open| Region {
            nu: (lo, lo_open, hi, hi_open),
            x_max: None,
            x_max_open: false,
            x_min: 0.0,
        };
        let inf = f64::INFINITY;
        match self {
            T1a | T1cLag | TuranL => r(-1.5, false, -0.5, false),
            T1b => r(-0.5, false, 0.5, false),
            T1cNew => Region { x_max_open: true, ..r(-1.5, true, -0.5, false) },
            T1d => Region { x_max: Some(std::f64::consts::PI), ..r(1.5, false, inf, true) },
            T1e => Region {
                x_max: Some(std::f64::consts::PI),
                x_max_open: true,
                ..r(1.5, true, inf, true)
            },
            T2aCm | T2aE1 | T2bCm | T2dTuranK => r(-0.5, true, inf, true),
            T2bT1 | T2dMono => r(0.5, true, inf, true),
            T2cCm => r(-0.5, true, 0.0, false),
            T2eR1 | T2fR2 => r(-0.5, true, 0.0, true),
            T2gR3 => r(1.5, true, inf, true),
            T2gR3Rev => r(0.5, true, 1.5, true),
            Lag(_) => Region { x_max: Some(20.0), x_min: -20.0, ..r(-0.5, false, 0.5, false) },
            BoundSandwich => Region { x_max_open: true, ..r(-0.5, true, 0.5, true) },
            BoundQuotient => Region { x_max_open: true, ..r(-0.5, false, 0.5, false) },
        }
    }
}

impl fmt::Display for TheoremId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use TheoremId::*;
        let s = match self {
            T1a => "T1a",
            T1b => "T1b",
            T1cLag => "T1c_lag",
            T1cNew => "T1c_new",
            T1d => "T1d",
            T1e => "T1e",
            T2aCm => "T2a_cm",
            T2aE1 => "T2a_E1",
            T2bCm => "T2b_cm",
            T2bT1 => "T2b_T1",
            T2cCm => "T2c_cm",
            T2dMono => "T2d_mono",
            T2dTuranK => "T2d_turanK",
            T2eR1 => "T2e_R1",
            T2fR2 => "T2f_R2",
            T2gR3 => "T2g_R3",
            T2gR3Rev => "T2g_R3_rev",
            Lag(None) => "LAG_m",
            Lag(Some(m)) => return write!(f, "LAG_{m}"),
            TuranL => "TURAN_L",
            BoundSandwich => "BOUND_sandwich",
            BoundQuotient => "BOUND_quotient",
        };
        f.write_str(s)
    }
}

impl std::str::FromStr for TheoremId {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        if let Some(m) = s.strip_prefix("LAG_") {
            if m == "m" {
                return Ok(TheoremId::Lag(None));
            }
            return match m.parse::<u32>() {
                Ok(m) if (1..=6).contains(&m) => Ok(TheoremId::Lag(Some(m))),
                _ => Err(format!("Laguerre order must be 1..6 in '{s}'")),
            };
        }
        TheoremId::ALL
            .iter()
            .copied()
            .find(|t| t.to_string() == s)
            .ok_or_else(|| format!("unknown theorem id '{s}'"))
    }
}

impl Serialize for TheoremId {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Theorem1Part {
    A,
    B,
    CLag,
    CNew,
    D,
    E,
}

impl From<Theorem1Part> for TheoremId {
    fn from(p: Theorem1Part) -> Self {
        match p {
            Theorem1Part::A => TheoremId::T1a,
            Theorem1Part::B => TheoremId::T1b,
            Theorem1Part::CLag => TheoremId::T1cLag,
            Theorem1Part::CNew => TheoremId::T1cNew,
            Theorem1Part::D => TheoremId::T1d,
            Theorem1Part::E => TheoremId::T1e,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Theorem2Part {
    ACm,
    AE1,
    BCm,
    BT1,
    CCm,
    DMono,
    DTuranK,
    ER1,
    FR2,
    GR3,
    GR3Rev,
}

impl From<Theorem2Part> for TheoremId {
    fn from(p: Theorem2Part) -> Self {
        match p {
            Theorem2Part::ACm => TheoremId::T2aCm,
            Theorem2Part::AE1 => TheoremId::T2aE1,
            Theorem2Part::BCm => TheoremId::T2bCm,
            Theorem2Part::BT1 => TheoremId::T2bT1,
            Theorem2Part::CCm => TheoremId::T2cCm,
            Theorem2Part::DMono => TheoremId::T2dMono,
            Theorem2Part::DTuranK => TheoremId::T2dTuranK,
            Theorem2Part::ER1 => TheoremId::T2eR1,
            Theorem2Part::FR2 => TheoremId::T2fR2,
            Theorem2Part::GR3 => TheoremId::T2gR3,
            Theorem2Part::GR3Rev => TheoremId::T2gR3Rev,
        }
    }
}

struct Region {
    /// `(lo, lo_open, hi, hi_open)`
    nu: (f64, bool, f64, bool),
    x_max: Option<f64>,
    x_max_open: bool,
    x_min: f64,
}

/// `lo:hi:step`, inclusive of `lo` and of `hi` when `(hi - lo)/step` is an
/// integer to within `1e-12`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Range {
    pub lo: f64,
    pub hi: f64,
    pub step: f64,
}

impl Range {
    pub fn new(lo: f64, hi: f64, step: f64) -> Result<Self> {
        ensure_finite("grid lo", lo)?;
        ensure_finite("grid hi", hi)?;
        ensure_finite("grid step", step)?;
        if step <= 0.0 {
            return domain(format!("grid step must be positive, got {step}"));
        }
        if hi < lo {
            return domain(format!("empty grid range {lo}:{hi}"));
        }
        Ok(Range { lo, hi, step })
    }

    pub fn single(v: f64) -> Self {
        Range { lo: v, hi: v, step: 1.0 }
    }

    pub fn points(&self) -> Vec<f64> {
        let r = (self.hi - self.lo) / self.step;
        let (n, exact) = if r - r.floor() <= 1e-12 {
            (r.floor() as usize, true)
        } else if r.ceil() - r <= 1e-12 {
            (r.ceil() as usize, true)
        } else {
            (r.floor() as usize, false)
        };
        (0..=n)
            .map(|i| if exact && i == n && n > 0 { self.hi } else { self.lo + i as f64 * self.step })
            .collect()
    }
}

impl std::str::FromStr for Range {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let parts: Vec<&str> = s.split(':').collect();
        let num = |t: &str| t.trim().parse::<f64>().map_err(|e| format!("bad number '{t}' in grid '{s}': {e}"));
        match parts.as_slice() {
            [v] => Ok(Range::single(num(v)?)),
            [lo, hi, step] => Range::new(num(lo)?, num(hi)?, num(step)?).map_err(|e| e.to_string()),
            _ => Err(format!("grid '{s}' is not lo:hi:step")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GridSpec {
    pub nu_range: Range,
    pub x_range: Range,
    pub exclusion_radius: f64,
    pub y_range: Option<Range>,
}

impl GridSpec {
    pub fn new(nu_range: Range, x_range: Range) -> Self {
        GridSpec { nu_range, x_range, exclusion_radius: DEFAULT_EXCLUSION, y_range: None }
    }

    pub fn with_y(mut self, y: Range) -> Self {
        self.y_range = Some(y);
        self
    }

    pub fn with_exclusion(mut self, r: f64) -> Self {
        self.exclusion_radius = r;
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PointStatus {
    Ok,
    Violation,
    Excluded,
    Error,
}

impl PointStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            PointStatus::Ok => "ok",
            PointStatus::Violation => "violation",
            PointStatus::Excluded => "excluded",
            PointStatus::Error => "error",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MarginPoint {
    pub nu: f64,
    pub x: f64,
    pub y: Option<f64>,
    pub lhs: Option<f64>,
    pub rhs: Option<f64>,
    /// Normalized margin `(lhs - rhs) / scale`.
    pub margin: Option<f64>,
    pub scale: Option<f64>,
    pub status: PointStatus,
    pub method: Option<String>,
    pub est_error: Option<f64>,
    pub note: Option<String>,
}

impl MarginPoint {
    fn bare(nu: f64, x: f64, y: Option<f64>, status: PointStatus, note: impl Into<String>) -> Self {
        MarginPoint {
            nu,
            x,
            y,
            lhs: None,
            rhs: None,
            margin: None,
            scale: None,
            status,
            method: None,
            est_error: None,
            note: Some(note.into()),
        }
    }

    pub fn coords(&self) -> Vec<f64> {
        match self.y {
            Some(y) => vec![self.nu, self.x, y],
            None => vec![self.nu, self.x],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InequalityReport {
    pub theorem_id: TheoremId,
    pub grid: GridSpec,
    pub tolerance: f64,
    /// Smallest normalized margin over evaluated points.
    pub min_margin: Option<f64>,
    pub argmin: Option<Vec<f64>>,
    pub violations: Vec<MarginPoint>,
    pub points: Vec<MarginPoint>,
    pub n_excluded: usize,
    pub n_errors: usize,
    pub eval_budget: usize,
}

impl InequalityReport {
    pub fn holds(&self) -> bool {
        self.violations.is_empty() && self.n_errors == 0
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Mode {
    Check,
    Scan,
}

struct Task {
    nu: f64,
    x: f64,
    y: Option<f64>,
    excluded: Option<String>,
}

fn contains(iv: (f64, bool, f64, bool), v: f64) -> (bool, bool) {
    let (lo, lo_open, hi, hi_open) = iv;
    let closed = v >= lo && v <= hi;
    let open_edge = (lo_open && v == lo) || (hi_open && v == hi);
    (closed, open_edge)
}

fn fmt_interval(iv: (f64, bool, f64, bool)) -> String {
    let (lo, lo_open, hi, hi_open) = iv;
    format!(
        "{}{lo}, {hi}{}",
        if lo_open { '(' } else { '[' },
        if hi_open { ')' } else { ']' }
    )
}

fn tasks(id: TheoremId, grid: &GridSpec, mode: Mode) -> Result<Vec<Task>> {
    let region = id.region();
    let nus = grid.nu_range.points();
    let xs = grid.x_range.points();
    let ys = if id.uses_y() {
        Some(grid.y_range.unwrap_or(grid.x_range).points())
    } else {
        None
    };
    let total = nus.len() * xs.len() * ys.as_ref().map_or(1, Vec::len);
    if total > MAX_POINTS {
        return domain(format!("grid has {total} points, the limit is {MAX_POINTS}"));
    }
    let mut out = Vec::with_capacity(total + nus.len());
    let rad = grid.exclusion_radius;
    for &nu in &nus {
        let (inside, open_edge) = contains(region.nu, nu);
        if mode == Mode::Check && !inside {
            return domain(format!(
                "{id} requires nu in {}, grid has nu = {nu}",
                fmt_interval(region.nu)
            ));
        }
        let nu_note = (mode == Mode::Check && open_edge).then(|| "nu on open boundary".to_string());
        let limit = if mode == Mode::Check && nu_note.is_none() {
            margins::zero_limit(id, nu)?.or(region.x_max)
        } else {
            None
        };
        let zeros = if id == TheoremId::BoundQuotient && nu.abs() <= 0.5 {
            crate::zeros::zero_table(nu, 1)
                .map(|t| t.zeros.clone())
                .unwrap_or_default()
        } else {
            Vec::new()
        };
        for &x in &xs {
            let mut note = nu_note.clone();
            if note.is_none() && mode == Mode::Check {
                if x < region.x_min || (region.x_min == 0.0 && x <= 0.0) {
                    note = Some("x outside region".into());
                } else if let Some(m) = limit {
                    let over = if region.x_max_open { x.abs() >= m } else { x.abs() > m };
                    if over {
                        note = Some(format!("x beyond {m}"));
                    }
                }
            }
            if note.is_none() && !matches!(id, TheoremId::Lag(_)) && x.abs() < rad {
                note = Some("within exclusion radius of 0".into());
            }
            if note.is_none() && zeros.iter().any(|z| (x - z).abs() < rad) {
                note = Some("within exclusion radius of a zero".into());
            }
            match &ys {
                Some(ys) => {
                    for &y in ys {
                        let mut n = note.clone();
                        if n.is_none() && (y <= 0.0 || y < rad) {
                            n = Some("y outside region".into());
                        }
                        out.push(Task { nu, x, y: Some(y), excluded: n });
                    }
                }
                None => out.push(Task { nu, x, y: None, excluded: note }),
            }
        }
        if id == TheoremId::T1b && mode == Mode::Check && nu_note.is_none() {
            if let Some(h1) = limit {
                out.push(Task { nu, x: h1, y: None, excluded: None });
            }
        }
    }
    if mode == Mode::Check && out.iter().all(|t| t.excluded.is_some()) {
        return domain(format!("no grid point of {id} lies inside its region"));
    }
    Ok(out)
}

fn evaluate(id: TheoremId, t: &Task, tol: f64) -> (MarginPoint, usize) {
    if let Some(n) = &t.excluded {
        return (MarginPoint::bare(t.nu, t.x, t.y, PointStatus::Excluded, n.clone()), 0);
    }
    match margins::point(id, t.nu, t.x, t.y) {
        Ok(p) => {
            let m = p.margin();
            let status = if m.is_nan() {
                PointStatus::Error
            } else if m < -tol {
                PointStatus::Violation
            } else {
                PointStatus::Ok
            };
            (
                MarginPoint {
                    nu: t.nu,
                    x: t.x,
                    y: t.y,
                    lhs: Some(p.lhs),
                    rhs: Some(p.rhs),
                    margin: Some(m),
                    scale: Some(p.scale),
                    status,
                    method: Some(p.method.as_str().to_string()),
                    est_error: Some(p.est_error / p.scale),
                    note: (status == PointStatus::Error).then(|| "margin is NaN".to_string()),
                },
                p.work,
            )
        }
        Err(e) => (MarginPoint::bare(t.nu, t.x, t.y, PointStatus::Error, e.to_string()), 0),
    }
}

fn run(id: TheoremId, grid: &GridSpec, tol: f64, mode: Mode) -> Result<InequalityReport> {
    if !(tol >= 0.0) {
        return domain(format!("tolerance must be nonnegative, got {tol}"));
    }
    if !(grid.exclusion_radius >= 0.0) {
        return domain("exclusion radius must be nonnegative");
    }
    let tasks = tasks(id, grid, mode)?;
    let evaluated: Vec<(MarginPoint, usize)> = tasks.par_iter().map(|t| evaluate(id, t, tol)).collect();
    let mut min_margin: Option<f64> = None;
    let mut argmin = None;
    let mut violations = Vec::new();
    let mut n_excluded = 0;
    let mut n_errors = 0;
    let mut budget = 0;
    let mut points = Vec::with_capacity(evaluated.len());
    for (p, w) in evaluated {
        budget += w;
        match p.status {
            PointStatus::Excluded => n_excluded += 1,
            PointStatus::Error => n_errors += 1,
            PointStatus::Violation => violations.push(p.clone()),
            PointStatus::Ok => {}
        }
        if let Some(m) = p.margin.filter(|m| !m.is_nan()) {
            if min_margin.is_none_or(|cur| m < cur) {
                min_margin = Some(m);
                argmin = Some(p.coords());
            }
        }
        points.push(p);
    }
    Ok(InequalityReport {
        theorem_id: id,
        grid: *grid,
        tolerance: tol,
        min_margin,
        argmin,
        violations,
        points,
        n_excluded,
        n_errors,
        eval_budget: budget,
    })
}

/// Certifies `id` on a grid inside its stated region. Points outside the
/// `x` region are kept as excluded rows; an order outside the region is an
/// error.
pub fn check(id: TheoremId, grid: &GridSpec, tolerance: f64) -> Result<InequalityReport> {
    run(id, grid, tolerance, Mode::Check)
}

pub fn check_theorem1(part: Theorem1Part, grid: &GridSpec) -> Result<InequalityReport> {
    let id = TheoremId::from(part);
    check(id, grid, id.default_tolerance())
}

pub fn check_theorem2(part: Theorem2Part, grid: &GridSpec) -> Result<InequalityReport> {
    let id = TheoremId::from(part);
    check(id, grid, id.default_tolerance())
}

/// Evaluates margins over the whole grid without region checks. Failures
/// are recorded per point.
pub fn scan_region(id: TheoremId, grid: &GridSpec, tolerance: f64) -> Result<InequalityReport> {
    run(id, grid, tolerance, Mode::Scan)
}
