//! Globally adaptive 21-point Gauss-Kronrod quadrature.

use super::sum::CompensatedSum;

const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];

const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_958_109_831_074,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

const MAX_PANELS: usize = 2000;

/// Outcome of an adaptive integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quadrature {
    pub value: f64,
    pub error: f64,
    pub evals: usize,
    /// False when the panel limit was hit before the tolerance was met.
    pub converged: bool,
}

#[derive(Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
    roundoff: f64,
}

fn qk21<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Panel {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut resg = 0.0;
    let mut resk = WGK[10] * fc;
    let mut resabs = resk.abs();
    let mut fv1 = [0.0; 10];
    let mut fv2 = [0.0; 10];
    for j in 0..10 {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        fv1[j] = f1;
        fv2[j] = f2;
        resk += WGK[j] * (f1 + f2);
        resabs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            resg += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = 0.5 * resk;
    let mut resasc = WGK[10] * (fc - mean).abs();
    for j in 0..10 {
        resasc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }
    let value = resk * half;
    let resabs = resabs * half.abs();
    let resasc = resasc * half.abs();
    let mut error = ((resk - resg) * half).abs();
    if resasc != 0.0 && error != 0.0 {
        error = resasc * (200.0 * error / resasc).powf(1.5).min(1.0);
    }
    let roundoff = 50.0 * f64::EPSILON * resabs;
    if resabs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        error = error.max(roundoff);
    }
    Panel {
        a,
        b,
        value,
        error,
        roundoff,
    }
}

/// Integrates `f` over `[a, b]`, starting from `n_init` equal panels and
/// bisecting the worst panel until `error <= max(abs_tol, rel_tol * |value|)`.
///
/// A tolerance below the accumulated rounding floor is treated as met once
/// only rounding error remains.
pub fn integrate<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    n_init: usize,
    abs_tol: f64,
    rel_tol: f64,
) -> Quadrature {
    let n_init = n_init.max(1);
    let mut panels: Vec<Panel> = (0..n_init)
        .map(|i| {
            let lo = a + (b - a) * i as f64 / n_init as f64;
            let hi = if i + 1 == n_init {
                b
            } else {
                a + (b - a) * (i + 1) as f64 / n_init as f64
            };
            qk21(&f, lo, hi)
        })
        .collect();
    let mut evals = 21 * n_init;
    loop {
        let value = panels.iter().map(|p| p.value).sum::<CompensatedSum>().value();
        let error = panels.iter().map(|p| p.error).sum::<CompensatedSum>().value();
        let roundoff = panels.iter().map(|p| p.roundoff).sum::<CompensatedSum>().value();
        let target = abs_tol.max(rel_tol * value.abs()).max(1.01 * roundoff);
        if error <= target || panels.len() >= MAX_PANELS {
            return Quadrature {
                value,
                error,
                evals,
                converged: error <= target,
            };
        }
        let mut worst = 0;
        for (i, p) in panels.iter().enumerate() {
            if p.error > panels[worst].error {
                worst = i;
            }
        }
        let p = panels[worst];
        let mid = 0.5 * (p.a + p.b);
        if mid <= p.a || mid >= p.b {
            return Quadrature {
                value,
                error,
                evals,
                converged: false,
            };
        }
        panels[worst] = qk21(&f, p.a, mid);
        panels.insert(worst + 1, qk21(&f, mid, p.b));
        evals += 42;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_is_exact() {
        let q = integrate(|x| x.powi(5) - 3.0 * x * x, 0.0, 2.0, 1, 1e-15, 1e-15);
        assert!((q.value - (64.0 / 6.0 - 8.0)).abs() < 1e-13);
        assert!(q.converged);
    }

    #[test]
    fn oscillatory_integrand() {
        let q = integrate(|x| (50.0 * x).sin(), 0.0, 1.0, 4, 1e-14, 1e-14);
        let exact = (1.0 - 50f64.cos()) / 50.0;
        assert!((q.value - exact).abs() < 1e-13, "{}", q.value - exact);
    }

    #[test]
    fn sqrt_endpoint_singularity() {
        let q = integrate(|x| 1.0 / x.sqrt(), 0.0, 1.0, 1, 1e-12, 1e-12);
        assert!((q.value - 2.0).abs() < 1e-10);
    }
}
