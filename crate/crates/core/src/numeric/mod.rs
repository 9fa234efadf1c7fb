//! Low-level numerical building blocks: double-double arithmetic,
//! compensated summation and adaptive Gauss-Kronrod quadrature.

pub mod dd;
pub mod quadrature;
pub mod sum;

pub use dd::DoubleDouble;
pub use quadrature::{integrate, Quadrature};
pub use sum::CompensatedSum;

/// `sin(pi * x)` with exact reduction of the argument.
pub fn sin_pi(x: f64) -> f64 {
    let n = x.round();
    let r = x - n;
    let s = (std::f64::consts::PI * r).sin();
    if (n as i64).rem_euclid(2) == 0 {
        s
    } else {
        -s
    }
}

/// `cos(pi * x)` with exact reduction of the argument.
pub fn cos_pi(x: f64) -> f64 {
    let n = x.round();
    let r = x - n;
    let c = (std::f64::consts::PI * r).cos();
    if (n as i64).rem_euclid(2) == 0 {
        c
    } else {
        -c
    }
}

/// True when `x` is an integer (as an exactly representable float).
pub fn is_integer(x: f64) -> bool {
    x.is_finite() && x == x.round()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sin_pi_is_exact_at_integers() {
        for n in -5..=5 {
            assert_eq!(sin_pi(n as f64), 0.0);
            assert_eq!(cos_pi(n as f64).abs(), 1.0);
        }
        assert!((sin_pi(0.5) - 1.0).abs() < 1e-16);
        assert!((cos_pi(1.5)).abs() < 1e-16);
        assert!((sin_pi(-0.25) + 0.5f64.sqrt()).abs() < 1e-15);
    }
}
