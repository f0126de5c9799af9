//! Exponential, Erlang-2 and two-phase hypoexponential distributions.
//!
//! The hypoexponential density is evaluated as
//! `λhi·λlo·e^{−λlo y}·g(y)` with `g(y) = (1 − e^{−(λhi−λlo) y}) / (λhi − λlo)`,
//! computed through `expm1`. This is the textbook `c(e^{−λlo y} − e^{−λhi y})`
//! rearranged so that neither small `y` nor close rates lose digits.

use rand::{Rng, SeedableRng};
use rand_xoshiro::Xoshiro256PlusPlus;

use crate::error::{Error, Result};

/// Relative rate gap at or below which a hypoexponential is treated as Erlang-2.
pub const DEGENERACY_REL_TOL: f64 = 1e-12;

fn check_rate(name: &str, rate: f64) -> Result<f64> {
    if rate.is_finite() && rate > 0.0 {
        Ok(rate)
    } else {
        Err(Error::domain(format!(
            "{name} must be positive and finite, got {rate}"
        )))
    }
}

/// `(1 − e^{−δy}) / δ`, with the δ → 0 limit `y`.
#[inline]
fn phase_gap(delta: f64, y: f64) -> f64 {
    if delta == 0.0 {
        y
    } else {
        -(-delta * y).exp_m1() / delta
    }
}

/// Common surface for the three densities.
pub trait Density {
    fn pdf(&self, y: f64) -> f64;

    /// `ln f(y)`; `−∞` where the density vanishes.
    fn ln_pdf(&self, y: f64) -> f64;

    fn cdf(&self, y: f64) -> f64;

    fn mean(&self) -> f64;

    fn sample(&self, rng: &mut SeededGenerator) -> f64;
}

/// Two positive rates, stored with `hi ≥ lo`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RatePair {
    hi: f64,
    lo: f64,
}

impl RatePair {
    /// Validates both rates and orders them. The sum `W + X` does not care
    /// which rate belongs to which summand.
    pub fn new(a: f64, b: f64) -> Result<Self> {
        let a = check_rate("rate", a)?;
        let b = check_rate("rate", b)?;
        Ok(if a >= b {
            RatePair { hi: a, lo: b }
        } else {
            RatePair { hi: b, lo: a }
        })
    }

    #[inline]
    pub fn hi(&self) -> f64 {
        self.hi
    }

    #[inline]
    pub fn lo(&self) -> f64 {
        self.lo
    }

    /// True when the rates agree to within [`DEGENERACY_REL_TOL`].
    pub fn is_degenerate(&self) -> bool {
        self.hi - self.lo <= DEGENERACY_REL_TOL * self.hi
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Exponential {
    rate: f64,
}

impl Exponential {
    pub fn new(rate: f64) -> Result<Self> {
        Ok(Exponential {
            rate: check_rate("rate", rate)?,
        })
    }

    pub fn rate(&self) -> f64 {
        self.rate
    }
}

impl Density for Exponential {
    fn pdf(&self, y: f64) -> f64 {
        if y < 0.0 {
            0.0
        } else {
            self.rate * (-self.rate * y).exp()
        }
    }

    fn ln_pdf(&self, y: f64) -> f64 {
        if y < 0.0 {
            f64::NEG_INFINITY
        } else {
            self.rate.ln() - self.rate * y
        }
    }

    fn cdf(&self, y: f64) -> f64 {
        if y <= 0.0 {
            0.0
        } else {
            -(-self.rate * y).exp_m1()
        }
    }

    fn mean(&self) -> f64 {
        self.rate.recip()
    }

    fn sample(&self, rng: &mut SeededGenerator) -> f64 {
        rng.exponential(self.rate)
    }
}

/// Sum of two IID exponentials with a common rate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Erlang2 {
    rate: f64,
}

impl Erlang2 {
    pub fn new(rate: f64) -> Result<Self> {
        Ok(Erlang2 {
            rate: check_rate("rate", rate)?,
        })
    }

    pub fn rate(&self) -> f64 {
        self.rate
    }
}

impl Density for Erlang2 {
    fn pdf(&self, y: f64) -> f64 {
        if y < 0.0 {
            0.0
        } else {
            self.rate * self.rate * y * (-self.rate * y).exp()
        }
    }

    fn ln_pdf(&self, y: f64) -> f64 {
        if y <= 0.0 {
            f64::NEG_INFINITY
        } else {
            2.0 * self.rate.ln() + y.ln() - self.rate * y
        }
    }

    fn cdf(&self, y: f64) -> f64 {
        if y <= 0.0 {
            0.0
        } else {
            let ly = self.rate * y;
            // 1 − e^{−λy}(1 + λy)
            -(-ly).exp_m1() - ly * (-ly).exp()
        }
    }

    fn mean(&self) -> f64 {
        2.0 / self.rate
    }

    fn sample(&self, rng: &mut SeededGenerator) -> f64 {
        rng.exponential(self.rate) + rng.exponential(self.rate)
    }
}

/// Distribution of `W + X` for independent exponentials `W ~ Exp(λhi)`,
/// `X ~ Exp(λlo)`.
///
/// When the rates coincide to within [`DEGENERACY_REL_TOL`] the object uses
/// the Erlang-2 forms at the mean rate `(λhi + λlo)/2`, and
/// [`HypoexpTwo::norm_const`] is `None`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HypoexpTwo {
    rates: RatePair,
    norm_const: Option<f64>,
}

impl HypoexpTwo {
    pub fn new(rates: RatePair) -> Self {
        let norm_const = if rates.is_degenerate() {
            None
        } else {
            Some(rates.hi * rates.lo / (rates.hi - rates.lo))
        };
        HypoexpTwo { rates, norm_const }
    }

    /// Shorthand for `HypoexpTwo::new(RatePair::new(a, b)?)`.
    pub fn from_rates(a: f64, b: f64) -> Result<Self> {
        RatePair::new(a, b).map(HypoexpTwo::new)
    }

    pub fn rates(&self) -> RatePair {
        self.rates
    }

    /// `c = λhi·λlo / (λhi − λlo)`, or `None` in the Erlang-2 regime.
    pub fn norm_const(&self) -> Option<f64> {
        self.norm_const
    }

    /// The Erlang-2 stand-in used when the rates are degenerate.
    pub fn erlang_limit(&self) -> Option<Erlang2> {
        self.norm_const.is_none().then_some(Erlang2 {
            rate: 0.5 * (self.rates.hi + self.rates.lo),
        })
    }

    #[inline]
    fn gap(&self) -> f64 {
        self.rates.hi - self.rates.lo
    }

    pub fn sample_hypoexp(&self, rng: &mut SeededGenerator) -> Sample {
        let w = rng.exponential(self.rates.hi);
        let x = rng.exponential(self.rates.lo);
        Sample(w + x)
    }
}

impl Density for HypoexpTwo {
    fn pdf(&self, y: f64) -> f64 {
        if let Some(erl) = self.erlang_limit() {
            return erl.pdf(y);
        }
        if y < 0.0 {
            return 0.0;
        }
        let RatePair { hi, lo } = self.rates;
        hi * lo * (-lo * y).exp() * phase_gap(self.gap(), y)
    }

    fn ln_pdf(&self, y: f64) -> f64 {
        if let Some(erl) = self.erlang_limit() {
            return erl.ln_pdf(y);
        }
        if y <= 0.0 {
            return f64::NEG_INFINITY;
        }
        let RatePair { hi, lo } = self.rates;
        (hi * lo).ln() - lo * y + phase_gap(self.gap(), y).ln()
    }

    fn cdf(&self, y: f64) -> f64 {
        if let Some(erl) = self.erlang_limit() {
            return erl.cdf(y);
        }
        if y <= 0.0 {
            return 0.0;
        }
        let lo = self.rates.lo;
        // F = 1 − e^{−λlo y}(1 + λlo·g(y))
        -(-lo * y).exp_m1() - lo * phase_gap(self.gap(), y) * (-lo * y).exp()
    }

    fn mean(&self) -> f64 {
        self.rates.hi.recip() + self.rates.lo.recip()
    }

    fn sample(&self, rng: &mut SeededGenerator) -> f64 {
        self.sample_hypoexp(rng).value()
    }
}

/// One draw of `Y = W + X`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Sample(f64);

impl Sample {
    pub fn value(self) -> f64 {
        self.0
    }
}

/// Seeded xoshiro256++ stream (state expanded from the seed with splitmix64).
///
/// Streams are reproducible bit-for-bit within this crate for a given seed
/// and call sequence. One generator per thread.
#[derive(Debug, Clone)]
pub struct SeededGenerator {
    inner: Xoshiro256PlusPlus,
}

impl SeededGenerator {
    pub fn new(seed: u64) -> Self {
        SeededGenerator {
            inner: Xoshiro256PlusPlus::seed_from_u64(seed),
        }
    }

    /// Uniform on (0, 1].
    pub fn uniform_open_closed(&mut self) -> f64 {
        1.0 - self.inner.gen::<f64>()
    }

    /// Inverse-CDF exponential draw `−ln(U) / rate`.
    pub fn exponential(&mut self, rate: f64) -> f64 {
        -self.uniform_open_closed().ln() / rate
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::LN_2;

    fn h21() -> HypoexpTwo {
        HypoexpTwo::from_rates(2.0, 1.0).unwrap()
    }

    #[test]
    fn rate_pair_is_canonical() {
        let p = RatePair::new(1.0, 2.0).unwrap();
        assert_eq!((p.hi(), p.lo()), (2.0, 1.0));
        assert_eq!(p, RatePair::new(2.0, 1.0).unwrap());
        assert!(RatePair::new(0.0, 1.0).is_err());
        assert!(RatePair::new(1.0, f64::NAN).is_err());
        assert!(RatePair::new(-2.0, 1.0).is_err());
        assert!(RatePair::new(f64::INFINITY, 1.0).is_err());
    }

    #[test]
    fn norm_const_and_degeneracy() {
        assert_eq!(h21().norm_const(), Some(2.0));
        let d = HypoexpTwo::from_rates(1.0, 1.0 + 5e-13).unwrap();
        assert_eq!(d.norm_const(), None);
        assert_eq!(d.erlang_limit().unwrap().rate(), 0.5 * (2.0 + 5e-13));
        let nd = HypoexpTwo::from_rates(1.0, 1.0 + 1e-10).unwrap();
        assert!(nd.norm_const().unwrap() > 0.0);
    }

    #[test]
    fn pdf_examples() {
        let d = h21();
        assert_eq!(d.pdf(0.0), 0.0);
        assert_abs_diff_eq!(d.pdf(LN_2), 0.5, epsilon = 1e-15);
        assert_eq!(d.pdf(-1.0), 0.0);
        assert_eq!(d.ln_pdf(0.0), f64::NEG_INFINITY);
        assert_abs_diff_eq!(d.ln_pdf(LN_2), 0.5f64.ln(), epsilon = 1e-15);
    }

    #[test]
    fn pdf_matches_textbook_form() {
        let d = HypoexpTwo::from_rates(3.5, 0.7).unwrap();
        let c = d.norm_const().unwrap();
        for y in [0.01f64, 0.3, 1.0, 4.0, 12.0] {
            let textbook = c * ((-0.7 * y).exp() - (-3.5 * y).exp());
            assert_abs_diff_eq!(d.pdf(y), textbook, epsilon = 1e-14);
        }
    }

    #[test]
    fn degenerate_pdf_is_erlang() {
        let d = HypoexpTwo::from_rates(1.0, 1.0).unwrap();
        for y in [0.0, 0.5, 1.0, 3.0] {
            assert_abs_diff_eq!(d.pdf(y), y * (-y).exp(), epsilon = 1e-16);
        }
    }

    #[test]
    fn cdf_examples() {
        let d = h21();
        assert_eq!(d.cdf(0.0), 0.0);
        assert_eq!(d.cdf(-3.0), 0.0);
        assert_abs_diff_eq!(d.cdf(100.0), 1.0, epsilon = 1e-12);
        // 2(1 − e⁻¹) − (1 − e⁻²); cross-checked by mpmath quadrature of the pdf.
        assert_abs_diff_eq!(d.cdf(1.0), 0.39957640089372805, epsilon = 1e-15);
    }

    #[test]
    fn cdf_stable_for_close_rates() {
        // For δ → 0 the cdf must approach the Erlang-2 cdf.
        let erl = Erlang2::new(1.0).unwrap();
        let d = HypoexpTwo::from_rates(1.0 + 1e-9, 1.0).unwrap();
        for y in [0.1, 1.0, 5.0] {
            assert_abs_diff_eq!(d.cdf(y), erl.cdf(y), epsilon = 1e-8);
        }
    }

    #[test]
    fn cdf_derivative_matches_pdf() {
        let d = h21();
        let h = 1e-5;
        for y in [0.1, 0.5, 1.0, 2.0, 5.0] {
            let fd = (d.cdf(y + h) - d.cdf(y - h)) / (2.0 * h);
            assert_abs_diff_eq!(fd, d.pdf(y), epsilon = 1e-6);
        }
    }

    #[test]
    fn means() {
        assert_abs_diff_eq!(HypoexpTwo::from_rates(2.0, 2.0).unwrap().mean(), 1.0);
        assert_abs_diff_eq!(
            HypoexpTwo::from_rates(5.0, 1.25).unwrap().mean(),
            1.0,
            epsilon = 1e-15
        );
        assert_abs_diff_eq!(HypoexpTwo::from_rates(1.0, 1.0).unwrap().mean(), 2.0);
        assert_eq!(Exponential::new(4.0).unwrap().mean(), 0.25);
        assert_eq!(Erlang2::new(4.0).unwrap().mean(), 0.5);
    }

    #[test]
    fn sampling_is_deterministic_and_nonnegative() {
        let d = h21();
        let mut a = SeededGenerator::new(7);
        let mut b = SeededGenerator::new(7);
        for _ in 0..1000 {
            let (x, y) = (d.sample_hypoexp(&mut a), d.sample_hypoexp(&mut b));
            assert_eq!(x.value().to_bits(), y.value().to_bits());
            assert!(x.value() >= 0.0);
        }
        let mut c = SeededGenerator::new(8);
        assert_ne!(d.sample(&mut SeededGenerator::new(7)), d.sample(&mut c));
    }

    #[test]
    fn uniform_never_zero() {
        let mut rng = SeededGenerator::new(0);
        for _ in 0..10_000 {
            let u = rng.uniform_open_closed();
            assert!(u > 0.0 && u <= 1.0);
        }
    }

    #[test]
    fn order_does_not_matter() {
        let a = HypoexpTwo::from_rates(0.3, 10.0).unwrap();
        let b = HypoexpTwo::from_rates(10.0, 0.3).unwrap();
        assert_eq!(a, b);
        for y in [0.0, 0.2, 1.0, 7.0] {
            assert_eq!(a.pdf(y), b.pdf(y));
            assert_eq!(a.cdf(y), b.cdf(y));
        }
        assert_eq!(a.mean(), b.mean());
        assert_eq!(
            a.sample(&mut SeededGenerator::new(3)),
            b.sample(&mut SeededGenerator::new(3))
        );
    }
}
