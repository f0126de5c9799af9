//! Oracle agreement suite behind `hypoent verify`.

use std::fmt::Write as _;

use super::format::log_space;
use crate::dist::{HypoexpTwo, RatePair};
use crate::entropy::hypoexp_entropy;
use crate::error::Result;
use crate::oracle::{
    entropy_monte_carlo, entropy_quadrature, gr_closed_form, gr_log_integral, mass_quadrature,
    QuadratureConfig,
};

pub const CLOSED_VS_QUAD_TOL: f64 = 1e-8;
pub const NORMALIZATION_TOL: f64 = 1e-10;
pub const GR_IDENTITY_TOL: f64 = 1e-8;
/// Closed form must fall within this many standard errors of each estimate.
pub const MC_Z_LIMIT: f64 = 5.0;
pub const MC_SEEDS: u64 = 5;
pub const MC_RATE_PAIRS: [(f64, f64); 3] = [(2.0, 1.0), (10.0, 0.3), (1.01, 1.0)];
pub const GR_ARGS: [f64; 4] = [0.5, 1.0, 2.0, 5.0];

/// Rate pairs `(a, b)` with `a ≠ b` from a 7×7 log grid over [0.1, 10]².
pub fn rate_grid() -> Vec<(f64, f64)> {
    let axis = log_space(0.1, 10.0, 7);
    let mut pairs = Vec::with_capacity(42);
    for &a in &axis {
        for &b in &axis {
            if a != b {
                pairs.push((a, b));
            }
        }
    }
    pairs
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckResult {
    pub name: &'static str,
    /// Worst observed deviation (a z-score for the Monte-Carlo check).
    pub worst: f64,
    pub limit: f64,
    pub cases: usize,
    /// Set when a numerical routine failed outright.
    pub failure: Option<String>,
}

impl CheckResult {
    pub fn passed(&self) -> bool {
        self.failure.is_none() && self.worst <= self.limit
    }
}

fn check<F>(name: &'static str, limit: f64, cases: usize, mut deviations: F) -> CheckResult
where
    F: FnMut() -> Result<f64>,
{
    match deviations() {
        Ok(worst) => CheckResult {
            name,
            worst,
            limit,
            cases,
            failure: None,
        },
        Err(e) => CheckResult {
            name,
            worst: f64::INFINITY,
            limit,
            cases,
            failure: Some(e.to_string()),
        },
    }
}

/// Runs every check. `closed_offset` is added to each closed-form entropy
/// before comparison; it is zero except when testing the suite itself.
pub fn run_suite(
    seed: u64,
    samples: usize,
    cfg: &QuadratureConfig,
    closed_offset: f64,
) -> Vec<CheckResult> {
    let closed = |rates: RatePair| hypoexp_entropy(rates).value() + closed_offset;
    let grid = rate_grid();

    let closed_vs_quad = check(
        "closed form vs quadrature",
        CLOSED_VS_QUAD_TOL,
        grid.len(),
        || {
            let mut worst = 0.0f64;
            for &(a, b) in &grid {
                let rates = RatePair::new(a, b)?;
                let quad = entropy_quadrature(&HypoexpTwo::new(rates), cfg)?.value();
                worst = worst.max((closed(rates) - quad).abs());
            }
            Ok(worst)
        },
    );

    let normalization = check(
        "density normalization",
        NORMALIZATION_TOL,
        grid.len(),
        || {
            let mut worst = 0.0f64;
            for &(a, b) in &grid {
                let mass = mass_quadrature(&HypoexpTwo::from_rates(a, b)?, cfg)?;
                worst = worst.max((mass - 1.0).abs());
            }
            Ok(worst)
        },
    );

    let gr_identity = check(
        "log-integral identity",
        GR_IDENTITY_TOL,
        GR_ARGS.len().pow(2),
        || {
            let mut worst = 0.0f64;
            for &u in &GR_ARGS {
                for &v in &GR_ARGS {
                    let numeric = gr_log_integral(u, v, cfg)?;
                    worst = worst.max((numeric - gr_closed_form(u, v)).abs());
                }
            }
            Ok(worst)
        },
    );

    let monte_carlo = check(
        "Monte-Carlo z-score",
        MC_Z_LIMIT,
        MC_RATE_PAIRS.len() * MC_SEEDS as usize,
        || {
            let mut worst = 0.0f64;
            for &(a, b) in &MC_RATE_PAIRS {
                let rates = RatePair::new(a, b)?;
                let d = HypoexpTwo::new(rates);
                for k in 0..MC_SEEDS {
                    let est = entropy_monte_carlo(&d, samples, seed.wrapping_add(k))?;
                    worst = worst.max((closed(rates) - est.estimate).abs() / est.std_error);
                }
            }
            Ok(worst)
        },
    );

    vec![closed_vs_quad, normalization, gr_identity, monte_carlo]
}

/// Fixed-width pass/fail table.
pub fn render_report(results: &[CheckResult]) -> String {
    let mut out = String::new();
    writeln!(
        out,
        "{:<28} {:>6} {:>12} {:>12}  status",
        "check", "cases", "worst", "limit"
    )
    .unwrap();
    for r in results {
        writeln!(
            out,
            "{:<28} {:>6} {:>12.3e} {:>12.3e}  {}",
            r.name,
            r.cases,
            r.worst,
            r.limit,
            if r.passed() { "PASS" } else { "FAIL" }
        )
        .unwrap();
        if let Some(msg) = &r.failure {
            writeln!(out, "  error: {msg}").unwrap();
        }
    }
    let passed = results.iter().filter(|r| r.passed()).count();
    writeln!(out, "{passed}/{} checks passed", results.len()).unwrap();
    out
}
