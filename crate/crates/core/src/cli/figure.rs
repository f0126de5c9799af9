//! Data behind the two entropy figures, as long-format rows.

use serde::Serialize;

use super::format::{log_space, sig17};
use crate::dist::RatePair;
use crate::entropy::{erlang2_entropy, exp_entropy, hypoexp_entropy, mean_constrained_rates};
use crate::error::Result;

/// Lower end of the λ_X axis in figure 1.
pub const FIG1_LAMBDA_X_MIN: f64 = 0.01;
/// λ_X stops at λ_W·(1 − 10⁻³) so every hypoexp curve keeps λ_W > λ_X.
pub const FIG1_GAP: f64 = 1e-3;
pub const FIG2_LAMBDA_MIN: f64 = 1.01;
pub const FIG2_LAMBDA_MAX: f64 = 100.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum FigureId {
    Fig1,
    Fig2,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Curve {
    Hypoexp,
    Erlang2,
    Single,
}

impl Curve {
    fn as_str(self) -> &'static str {
        match self {
            Curve::Hypoexp => "hypoexp",
            Curve::Erlang2 => "erlang2",
            Curve::Single => "single",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Fig1Row {
    pub curve: Curve,
    /// Absent for the single-exponential curve.
    pub lambda_w: Option<f64>,
    pub lambda_x: f64,
    pub entropy_nats: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Fig2Row {
    pub lambda: f64,
    pub lambda_x: f64,
    pub lambda_w: f64,
    pub entropy_nats: f64,
    pub reference_exp: f64,
    pub reference_erlang2: f64,
}

pub const FIG1_HEADER: [&str; 4] = ["curve", "lambda_w", "lambda_x", "entropy_nats"];
pub const FIG2_HEADER: [&str; 6] = [
    "lambda",
    "lambda_x",
    "lambda_w",
    "entropy_nats",
    "reference_exp",
    "reference_erlang2",
];

/// λ_W ∈ {0.2, 0.4, …, 2.0}.
pub fn fig1_noise_rates() -> Vec<f64> {
    (1..=10).map(|k| k as f64 / 5.0).collect()
}

pub fn fig1_rows(grid_points: usize) -> Result<Vec<Fig1Row>> {
    let noise_rates = fig1_noise_rates();
    let mut rows = Vec::with_capacity(grid_points * (noise_rates.len() + 2));

    for &lambda_w in &noise_rates {
        for lambda_x in log_space(FIG1_LAMBDA_X_MIN, lambda_w * (1.0 - FIG1_GAP), grid_points) {
            rows.push(Fig1Row {
                curve: Curve::Hypoexp,
                lambda_w: Some(lambda_w),
                lambda_x,
                entropy_nats: hypoexp_entropy(RatePair::new(lambda_w, lambda_x)?).value(),
            });
        }
    }

    let top = *noise_rates.last().expect("ten noise rates");
    let shared_axis = log_space(FIG1_LAMBDA_X_MIN, top, grid_points);
    for &lambda in &shared_axis {
        rows.push(Fig1Row {
            curve: Curve::Erlang2,
            lambda_w: Some(lambda),
            lambda_x: lambda,
            entropy_nats: erlang2_entropy(lambda)?.value(),
        });
    }
    for &lambda_x in &shared_axis {
        rows.push(Fig1Row {
            curve: Curve::Single,
            lambda_w: None,
            lambda_x,
            entropy_nats: exp_entropy(lambda_x)?.value(),
        });
    }
    Ok(rows)
}

/// Log-spaced λ over [1.01, 100] with λ = 2 (the Erlang point) merged in.
pub fn fig2_lambdas(grid_points: usize) -> Vec<f64> {
    let mut lambdas = log_space(FIG2_LAMBDA_MIN, FIG2_LAMBDA_MAX, grid_points);
    lambdas.push(2.0);
    lambdas.sort_by(f64::total_cmp);
    lambdas.dedup();
    lambdas
}

pub fn fig2_rows(grid_points: usize) -> Result<Vec<Fig2Row>> {
    let reference_exp = exp_entropy(1.0)?.value();
    let reference_erlang2 = erlang2_entropy(2.0)?.value();
    fig2_lambdas(grid_points)
        .into_iter()
        .map(|lambda| {
            let rates = mean_constrained_rates(lambda)?;
            Ok(Fig2Row {
                lambda,
                lambda_x: rates.lo(),
                lambda_w: rates.hi(),
                entropy_nats: hypoexp_entropy(rates).value(),
                reference_exp,
                reference_erlang2,
            })
        })
        .collect()
}

impl Fig1Row {
    pub fn csv_fields(&self) -> [String; 4] {
        [
            self.curve.as_str().to_owned(),
            self.lambda_w.map(sig17).unwrap_or_default(),
            sig17(self.lambda_x),
            sig17(self.entropy_nats),
        ]
    }
}

impl Fig2Row {
    pub fn csv_fields(&self) -> [String; 6] {
        [
            self.lambda,
            self.lambda_x,
            self.lambda_w,
            self.entropy_nats,
            self.reference_exp,
            self.reference_erlang2,
        ]
        .map(sig17)
    }
}
