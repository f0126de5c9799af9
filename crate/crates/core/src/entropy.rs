//! Closed-form differential entropies (nats) and the quantities built on them.
//!
//! For rates `λhi > λlo` the entropy of `Y = W + X` is
//!
//! ```text
//! h(Y) = 1 + γ + ln((λhi − λlo)/(λhi·λlo)) + ψ(λhi/(λhi − λlo))
//! ```
//!
//! With `r = λhi/(λhi − λlo)` the log term equals `−ln λlo − ln r`, so
//!
//! ```text
//! h(Y) = 1 + γ − ln λlo + (ψ(r) − ln r)
//! ```
//!
//! As the rates merge, `r → ∞` and both `ψ(r)` and `ln r` diverge while their
//! difference vanishes. The second form evaluates that difference directly via
//! [`digamma_minus_log`](crate::specfun::digamma_minus_log), which is what
//! keeps the result continuous into the Erlang-2 limit `1 + γ − ln λ`.

use std::fmt;

use serde::Serialize;

use crate::dist::RatePair;
use crate::error::{Error, Result};
use crate::specfun::{digamma_minus_log_raw, EULER_GAMMA};

/// A differential entropy in nats. May be negative.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize)]
#[serde(transparent)]
pub struct EntropyNats(f64);

impl EntropyNats {
    pub fn new(value: f64) -> Self {
        EntropyNats(value)
    }

    #[inline]
    pub fn value(self) -> f64 {
        self.0
    }
}

impl From<EntropyNats> for f64 {
    fn from(h: EntropyNats) -> f64 {
        h.0
    }
}

impl fmt::Display for EntropyNats {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} nats", self.0)
    }
}

fn check_rate(name: &str, rate: f64) -> Result<f64> {
    if rate.is_finite() && rate > 0.0 {
        Ok(rate)
    } else {
        Err(Error::domain(format!(
            "{name} must be positive and finite, got {rate}"
        )))
    }
}

/// Entropy of an exponential with the given rate: `1 − ln λ`.
pub fn exp_entropy(lambda: f64) -> Result<EntropyNats> {
    let lambda = check_rate("lambda", lambda)?;
    Ok(EntropyNats(1.0 - lambda.ln()))
}

/// Entropy of the sum of two IID exponentials: `2 − ψ(2) − ln λ = 1 + γ − ln λ`.
pub fn erlang2_entropy(lambda: f64) -> Result<EntropyNats> {
    let lambda = check_rate("lambda", lambda)?;
    Ok(EntropyNats(erlang2_unchecked(lambda)))
}

#[inline]
fn erlang2_unchecked(lambda: f64) -> f64 {
    1.0 + EULER_GAMMA - lambda.ln()
}

/// Entropy of the sum of independent exponentials with the given rates.
///
/// Rates that agree to within the degeneracy tolerance fall back to the
/// Erlang-2 entropy at their mean.
pub fn hypoexp_entropy(rates: RatePair) -> EntropyNats {
    let (hi, lo) = (rates.hi(), rates.lo());
    if rates.is_degenerate() {
        return EntropyNats(erlang2_unchecked(0.5 * (hi + lo)));
    }
    let ratio = hi / (hi - lo);
    EntropyNats(1.0 + EULER_GAMMA - lo.ln() + digamma_minus_log_raw(ratio))
}

/// Mutual information `I(X; Y)` of the additive exponential noise channel
/// `Y = X + W`, with exponential input `X` and exponential noise `W`.
///
/// Defined as `h(Y) − h(W)`, which holds for any ordering of the two rates.
/// The leading `1` of both entropies is cancelled analytically, leaving
/// `γ + ln(λ_W/λlo) + (ψ(r) − ln r)`.
pub fn mutual_info_aen(signal_rate: f64, noise_rate: f64) -> Result<EntropyNats> {
    let signal_rate = check_rate("signal rate", signal_rate)?;
    let noise_rate = check_rate("noise rate", noise_rate)?;
    let rates = RatePair::new(signal_rate, noise_rate)?;
    let (hi, lo) = (rates.hi(), rates.lo());
    let mi = if rates.is_degenerate() {
        EULER_GAMMA + (noise_rate / (0.5 * (hi + lo))).ln()
    } else {
        EULER_GAMMA + (noise_rate / lo).ln() + digamma_minus_log_raw(hi / (hi - lo))
    };
    Ok(EntropyNats(mi))
}

/// Three-state light-gated chain: the closed→open rate depends on whether the
/// light is on.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LightGatedModel {
    lambda_x: f64,
    lambda_w_on: f64,
    lambda_w_off: f64,
    p_on: f64,
}

impl LightGatedModel {
    pub fn new(lambda_x: f64, lambda_w_on: f64, lambda_w_off: f64, p_on: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p_on) {
            return Err(Error::domain(format!(
                "p_on must lie in [0, 1], got {p_on}"
            )));
        }
        Ok(LightGatedModel {
            lambda_x: check_rate("lambda_x", lambda_x)?,
            lambda_w_on: check_rate("lambda_w_on", lambda_w_on)?,
            lambda_w_off: check_rate("lambda_w_off", lambda_w_off)?,
            p_on,
        })
    }

    pub fn lambda_x(&self) -> f64 {
        self.lambda_x
    }

    pub fn lambda_w_on(&self) -> f64 {
        self.lambda_w_on
    }

    pub fn lambda_w_off(&self) -> f64 {
        self.lambda_w_off
    }

    pub fn p_on(&self) -> f64 {
        self.p_on
    }

    pub fn p_off(&self) -> f64 {
        1.0 - self.p_on
    }

    /// `h(Y | L = on)`.
    pub fn entropy_on(&self) -> EntropyNats {
        hypoexp_entropy(RatePair::new(self.lambda_x, self.lambda_w_on).expect("validated rates"))
    }

    /// `h(Y | L = off)`.
    pub fn entropy_off(&self) -> EntropyNats {
        hypoexp_entropy(RatePair::new(self.lambda_x, self.lambda_w_off).expect("validated rates"))
    }
}

/// `h(Y | L) = p(off)·h(Y | off) + p(on)·h(Y | on)`.
pub fn cond_entropy_light(model: &LightGatedModel) -> EntropyNats {
    EntropyNats(
        model.p_off() * model.entropy_off().value() + model.p_on() * model.entropy_on().value(),
    )
}

/// Rates `{λ, λ/(λ − 1)}` whose hypoexponential sum has unit mean.
pub fn mean_constrained_rates(lambda: f64) -> Result<RatePair> {
    if !(lambda.is_finite() && lambda > 1.0) {
        return Err(Error::domain(format!(
            "lambda must be finite and greater than 1, got {lambda}"
        )));
    }
    RatePair::new(lambda, lambda / (lambda - 1.0))
}
