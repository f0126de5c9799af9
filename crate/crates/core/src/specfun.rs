//! Special functions: the Euler–Mascheroni constant and the digamma function.
//!
//! `digamma` uses upward recurrence ψ(x) = ψ(x + 1) − 1/x until the argument
//! reaches [`SHIFT_THRESHOLD`], then the asymptotic series
//!
//! ```text
//! ψ(y) = ln y − 1/(2y) − Σ_{n=1}^{7} B_{2n} / (2n y^{2n})
//! ```
//!
//! truncated after the y^{-14} term. The first omitted term is below 5e-17 at
//! y = 10.
//!
//! [`digamma_minus_log`] evaluates ψ(x) − ln x from the same series with the
//! logarithm removed analytically, so it never subtracts two large, nearly
//! equal numbers.

use std::fmt;

use crate::error::{Error, Result};

/// Euler–Mascheroni constant γ.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// Arguments below this are shifted upward before the asymptotic series is used.
pub const SHIFT_THRESHOLD: f64 = 10.0;

/// `B_{2n} / (2n)` for n = 1..=7, with the sign of the series term folded in.
const SERIES_COEFFS: [f64; 7] = [
    -1.0 / 12.0,
    1.0 / 120.0,
    -1.0 / 252.0,
    1.0 / 240.0,
    -1.0 / 132.0,
    691.0 / 32760.0,
    -1.0 / 12.0,
];

/// A strictly positive, finite real argument.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct RealPositive(f64);

impl RealPositive {
    pub fn new(value: f64) -> Result<Self> {
        if value.is_finite() && value > 0.0 {
            Ok(RealPositive(value))
        } else {
            Err(Error::domain(format!(
                "argument must be positive and finite, got {value}"
            )))
        }
    }

    #[inline]
    pub fn get(self) -> f64 {
        self.0
    }
}

impl TryFrom<f64> for RealPositive {
    type Error = Error;

    fn try_from(value: f64) -> Result<Self> {
        RealPositive::new(value)
    }
}

impl fmt::Display for RealPositive {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// The Euler–Mascheroni constant, `ψ(1) = −γ`.
#[inline]
pub fn euler_gamma() -> f64 {
    EULER_GAMMA
}

/// Digamma function ψ(x) for x > 0.
pub fn digamma(x: RealPositive) -> f64 {
    digamma_raw(x.get())
}

/// ψ(x) − ln x for x > 0, accurate in relative terms even when ψ(x) ≈ ln x.
pub fn digamma_minus_log(x: RealPositive) -> f64 {
    digamma_minus_log_raw(x.get())
}

/// Asymptotic tail ψ(y) − ln y for y ≥ [`SHIFT_THRESHOLD`].
fn asymptotic_tail(y: f64) -> f64 {
    let inv = y.recip();
    let inv2 = inv * inv;
    // Horner in 1/y² over the Bernoulli terms.
    let poly = SERIES_COEFFS
        .iter()
        .rev()
        .fold(0.0, |acc, &coef| acc * inv2 + coef);
    -0.5 * inv + poly * inv2
}

/// Shifts x up past the threshold. Returns the shifted argument and
/// Σ_{k<n} 1/(x + k), accumulated smallest term first.
fn shift_up(x: f64) -> (f64, f64) {
    let steps = (SHIFT_THRESHOLD - x).ceil().max(0.0) as usize;
    let correction = (0..steps).rev().map(|k| (x + k as f64).recip()).sum();
    (x + steps as f64, correction)
}

pub(crate) fn digamma_raw(x: f64) -> f64 {
    debug_assert!(x > 0.0 && x.is_finite());
    if x >= SHIFT_THRESHOLD {
        x.ln() + asymptotic_tail(x)
    } else {
        let (y, correction) = shift_up(x);
        y.ln() + asymptotic_tail(y) - correction
    }
}

pub(crate) fn digamma_minus_log_raw(x: f64) -> f64 {
    debug_assert!(x > 0.0 && x.is_finite());
    if x >= SHIFT_THRESHOLD {
        asymptotic_tail(x)
    } else {
        let (y, correction) = shift_up(x);
        asymptotic_tail(y) + (y / x).ln() - correction
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn rp(x: f64) -> RealPositive {
        RealPositive::new(x).unwrap()
    }

    /// ψ(n) = −γ + H_{n−1}, summed smallest term first.
    fn harmonic_digamma(n: u32) -> f64 {
        let h: f64 = (1..n).rev().map(|k| 1.0 / k as f64).sum();
        h - EULER_GAMMA
    }

    #[test]
    fn gamma_rederived_from_harmonic_numbers() {
        // H_n − ln n − 1/(2n) + 1/(12n²) − 1/(120n⁴) → γ with O(n⁻⁶) error.
        let n = 100_000u32;
        let nf = n as f64;
        let h: f64 = (1..=n).rev().map(|k| 1.0 / k as f64).sum();
        let gamma = h - nf.ln() - 0.5 / nf + 1.0 / (12.0 * nf * nf) - 1.0 / (120.0 * nf.powi(4));
        assert_abs_diff_eq!(gamma, euler_gamma(), epsilon = 1e-13);
        assert!(euler_gamma() > 0.5 && euler_gamma() < 0.6);
    }

    #[test]
    fn digamma_reference_values() {
        assert_abs_diff_eq!(digamma(rp(1.0)), -0.5772156649015329, epsilon = 1e-15);
        assert_abs_diff_eq!(digamma(rp(1.0)) + euler_gamma(), 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(digamma(rp(2.0)), 0.4227843350984671, epsilon = 1e-15);
        assert_abs_diff_eq!(digamma(rp(10.0)), 2.2517525890667215, epsilon = 1e-14);
        // ψ(1/2) = −γ − 2 ln 2, then one recurrence step.
        let half = -EULER_GAMMA - 2.0 * std::f64::consts::LN_2;
        assert_abs_diff_eq!(digamma(rp(0.5)), half, epsilon = 1e-14);
        assert_abs_diff_eq!(digamma(rp(1.5)), half + 2.0, epsilon = 1e-14);
        assert_abs_diff_eq!(digamma(rp(1.5)), 0.03648997397857652, epsilon = 1e-15);
    }

    #[test]
    fn digamma_matches_harmonic_sums() {
        for n in 1..=40 {
            assert_abs_diff_eq!(digamma(rp(n as f64)), harmonic_digamma(n), epsilon = 1e-13);
        }
    }

    #[test]
    fn digamma_far_ends_of_range() {
        // ψ(x) = −1/x − γ + (π²/6) x + O(x²) near zero.
        let x = 1e-3;
        let zeta2 = std::f64::consts::PI.powi(2) / 6.0;
        let zeta4 = std::f64::consts::PI.powi(4) / 90.0;
        let approx =
            -1.0 / x - EULER_GAMMA + zeta2 * x - 1.2020569031595942 * x * x + zeta4 * x.powi(3);
        assert_abs_diff_eq!(digamma(rp(x)), approx, epsilon = 1e-12);
        let big = 1e12;
        assert_abs_diff_eq!(digamma(rp(big)), big.ln() - 0.5 / big, epsilon = 1e-12);
    }

    #[test]
    fn rejects_bad_arguments() {
        for bad in [0.0, -1.0, f64::NAN, f64::INFINITY, f64::NEG_INFINITY] {
            assert!(matches!(RealPositive::new(bad), Err(Error::Domain(_))));
        }
    }

    #[test]
    fn digamma_minus_log_reference_values() {
        assert_abs_diff_eq!(digamma_minus_log(rp(1.0)), -EULER_GAMMA, epsilon = 1e-15);
        assert_abs_diff_eq!(
            digamma_minus_log(rp(2.0)),
            -0.27036284546147817,
            epsilon = 1e-15
        );
        // mpmath: ψ(1e8) − ln(1e8) = −5.0000000083333333e-9
        let v = digamma_minus_log(rp(1e8));
        assert_abs_diff_eq!(v, -5.0e-9, epsilon = 1e-16);
        assert!(((v - -5.000_000_008_333_333e-9) / v).abs() < 1e-10);
    }

    #[test]
    fn recurrence_on_log_grid() {
        let n = 400;
        let (lo, hi) = (1e-3f64.ln(), 1e6f64.ln());
        for i in 0..=n {
            let x = (lo + (hi - lo) * i as f64 / n as f64).exp();
            let residual = digamma_raw(x + 1.0) - digamma_raw(x) - 1.0 / x;
            assert!(residual.abs() <= 1e-11, "x = {x}: residual {residual:e}");
        }
    }

    #[test]
    fn minus_log_consistent_with_direct_difference() {
        let n = 200;
        for i in 0..=n {
            let x = 10f64.powf(4.0 * i as f64 / n as f64);
            let direct = digamma_raw(x) - x.ln();
            assert_abs_diff_eq!(digamma_minus_log_raw(x), direct, epsilon = 1e-10);
        }
    }

    #[test]
    fn minus_log_tends_to_zero_from_below() {
        let mut prev = f64::NEG_INFINITY;
        for k in 2..=8 {
            let x = 10f64.powi(k);
            let v = digamma_minus_log(rp(x));
            assert!(v < 0.0);
            // −1/(2x) − 1/(12x²) < ψ(x) − ln x < −1/(2x)
            assert!(v.abs() > 0.5 / x);
            assert!(v.abs() < 0.5 / x + 1.0 / (12.0 * x * x) + 1e-16);
            assert!(v > prev);
            prev = v;
        }
    }

    proptest! {
        #[test]
        fn digamma_strictly_increasing(a in 1e-3f64..1e6, step in 1e-6f64..10.0) {
            let b = a + step.max(a * 1e-9);
            prop_assert!(digamma_raw(b) > digamma_raw(a));
        }

        #[test]
        fn recurrence_holds(x in 1e-3f64..1e6) {
            let residual = digamma_raw(x + 1.0) - digamma_raw(x) - 1.0 / x;
            prop_assert!(residual.abs() <= 1e-11);
        }
    }
}
