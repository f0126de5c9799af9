//! Numerical ground truth for the closed forms.
//!
//! * [`entropy_quadrature`]: `−∫ f ln f` by adaptive Gauss–Kronrod quadrature on
//!   `[0, U]`, where `U` is pushed out until a rigorous tail bound is below a
//!   tenth of the tolerance.
//! * [`entropy_monte_carlo`]: resubstitution estimate `−(1/n) Σ ln f(Yᵢ)`.
//! * [`gr_log_integral`]: `∫₀^∞ e^{−ux} ln(1 − e^{−vx}) dx` computed after the
//!   substitution `ξ = e^{−vx}`, for comparison against
//!   `−(γ + ψ(u/v + 1))/u`.
//!
//! None of these call into [`crate::entropy`].

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use serde::Serialize;

use crate::dist::{Density, Erlang2, Exponential, HypoexpTwo, SeededGenerator};
use crate::entropy::EntropyNats;
use crate::error::{Error, Result};
use crate::specfun::{digamma_raw, EULER_GAMMA};

/// Tolerances for the adaptive integrator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureConfig {
    pub abs_tol: f64,
    pub max_subdivisions: usize,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        QuadratureConfig {
            abs_tol: 1e-10,
            max_subdivisions: 2000,
        }
    }
}

impl QuadratureConfig {
    pub fn new(abs_tol: f64, max_subdivisions: usize) -> Result<Self> {
        if !(abs_tol.is_finite() && abs_tol > 0.0) {
            return Err(Error::domain(format!(
                "abs_tol must be positive, got {abs_tol}"
            )));
        }
        if max_subdivisions < 1 {
            return Err(Error::domain("max_subdivisions must be at least 1"));
        }
        Ok(QuadratureConfig {
            abs_tol,
            max_subdivisions,
        })
    }
}

/// Monte-Carlo estimate with its standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EstimateWithError {
    pub estimate: f64,
    pub std_error: f64,
    pub n_samples: usize,
}

impl EstimateWithError {
    /// Whether `value` lies inside `estimate ± k·std_error`.
    pub fn covers(&self, value: f64, k: f64) -> bool {
        (value - self.estimate).abs() <= k * self.std_error
    }
}

// ---------------------------------------------------------------------------
// Gauss–Kronrod 10/21

/// Kronrod abscissae on [0, 1]; odd indices are the 10-point Gauss nodes.
#[allow(clippy::excessive_precision)]
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

#[allow(clippy::excessive_precision)]
const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_208_745_067_469,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

#[allow(clippy::excessive_precision)]
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Panel {}

impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error
            .total_cmp(&other.error)
            .then_with(|| other.a.total_cmp(&self.a))
    }
}

/// One GK21 panel with the QUADPACK error rescaling.
fn gk21<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Panel {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let f_center = f(center);

    let mut kronrod = WGK[10] * f_center;
    let mut gauss = 0.0;
    let mut res_abs = kronrod.abs();
    let mut fv1 = [0.0; 10];
    let mut fv2 = [0.0; 10];

    for j in 0..10 {
        let dx = half * XGK[j];
        let (f1, f2) = (f(center - dx), f(center + dx));
        fv1[j] = f1;
        fv2[j] = f2;
        kronrod += WGK[j] * (f1 + f2);
        res_abs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            gauss += WG[j / 2] * (f1 + f2);
        }
    }

    let mean = 0.5 * kronrod;
    let mut res_asc = WGK[10] * (f_center - mean).abs();
    for j in 0..10 {
        res_asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }

    let value = kronrod * half;
    res_abs *= half.abs();
    res_asc *= half.abs();

    let mut error = ((kronrod - gauss) * half).abs();
    if res_asc != 0.0 && error != 0.0 {
        error = res_asc * (200.0 * error / res_asc).powf(1.5).min(1.0);
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        error = error.max(50.0 * f64::EPSILON * res_abs);
    }

    Panel { a, b, value, error }
}

/// Result of [`integrate`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quadrature {
    pub value: f64,
    pub error_estimate: f64,
    pub subdivisions: usize,
}

/// Globally adaptive GK21 over the partition given by `breakpoints`
/// (sorted, at least two points). The panel with the largest error estimate
/// is bisected until the summed estimate is at most `abs_tol`.
pub fn integrate<F: Fn(f64) -> f64>(
    f: F,
    breakpoints: &[f64],
    abs_tol: f64,
    max_subdivisions: usize,
) -> Result<Quadrature> {
    if breakpoints.len() < 2 {
        return Err(Error::domain("need at least two breakpoints"));
    }
    let mut heap: BinaryHeap<Panel> = breakpoints
        .windows(2)
        .filter(|w| w[1] > w[0])
        .map(|w| gk21(&f, w[0], w[1]))
        .collect();
    let mut subdivisions = 0;

    loop {
        let error: f64 = heap.iter().map(|p| p.error).sum();
        if error <= abs_tol {
            // Sum small panels first.
            let mut values: Vec<f64> = heap.iter().map(|p| p.value).collect();
            values.sort_by(|x, y| x.abs().total_cmp(&y.abs()));
            return Ok(Quadrature {
                value: values.iter().sum(),
                error_estimate: error,
                subdivisions,
            });
        }
        let worst = heap.pop().expect("nonempty partition");
        let mid = 0.5 * (worst.a + worst.b);
        if subdivisions >= max_subdivisions || !(worst.a < mid && mid < worst.b) {
            return Err(Error::Convergence {
                error_estimate: error,
                tolerance: abs_tol,
                subdivisions,
            });
        }
        heap.push(gk21(&f, worst.a, mid));
        heap.push(gk21(&f, mid, worst.b));
        subdivisions += 1;
    }
}

// ---------------------------------------------------------------------------
// Truncation

/// Analytic envelopes for the parts of `[0, ∞)` the quadrature leaves out.
pub trait TailBounded: Density {
    /// Bound on `∫_U^∞ |f ln f|`.
    fn entropy_tail(&self, u: f64) -> f64;

    /// Bound on `∫_U^∞ f`.
    fn mass_tail(&self, u: f64) -> f64;

    /// First truncation point tried.
    fn initial_cutoff(&self) -> f64;

    /// Shortest length scale of the density, used to seed the partition.
    fn inner_scale(&self) -> f64;
}

/// `∫_U^∞ y e^{−ly} dy`.
fn moment1_tail(l: f64, u: f64) -> f64 {
    (-l * u).exp() * (u / l + 1.0 / (l * l))
}

/// `∫_U^∞ y² e^{−ly} dy`.
fn moment2_tail(l: f64, u: f64) -> f64 {
    (-l * u).exp() * (u * u / l + 2.0 * u / (l * l) + 2.0 / (l * l * l))
}

/// For a sum of exponentials with rates in `[lo, hi]`:
/// `hi·lo·y·e^{−hi y} ≤ f(y) ≤ hi·lo·y·e^{−lo y}`, hence
/// `|ln f| ≤ |ln(hi·lo)| + |ln y| + hi·y`, and `|ln y| ≤ y` once `y ≥ 1`.
fn two_phase_entropy_tail(hi: f64, lo: f64, u: f64) -> f64 {
    let a = (hi * lo).ln().abs();
    hi * lo * (a * moment1_tail(lo, u) + (1.0 + hi) * moment2_tail(lo, u))
}

impl TailBounded for Exponential {
    fn entropy_tail(&self, u: f64) -> f64 {
        let l = self.rate();
        (-l * u).exp() * (l.ln().abs() + l * u + 1.0)
    }

    fn mass_tail(&self, u: f64) -> f64 {
        (-self.rate() * u).exp()
    }

    fn initial_cutoff(&self) -> f64 {
        (20.0 / self.rate()).max(1.0)
    }

    fn inner_scale(&self) -> f64 {
        1.0 / self.rate()
    }
}

impl TailBounded for Erlang2 {
    fn entropy_tail(&self, u: f64) -> f64 {
        two_phase_entropy_tail(self.rate(), self.rate(), u)
    }

    fn mass_tail(&self, u: f64) -> f64 {
        self.rate() * self.rate() * moment1_tail(self.rate(), u)
    }

    fn initial_cutoff(&self) -> f64 {
        (20.0 / self.rate()).max(1.0)
    }

    fn inner_scale(&self) -> f64 {
        1.0 / self.rate()
    }
}

impl TailBounded for HypoexpTwo {
    fn entropy_tail(&self, u: f64) -> f64 {
        let r = self.rates();
        two_phase_entropy_tail(r.hi(), r.lo(), u)
    }

    fn mass_tail(&self, u: f64) -> f64 {
        let r = self.rates();
        r.hi() * r.lo() * moment1_tail(r.lo(), u)
    }

    fn initial_cutoff(&self) -> f64 {
        (20.0 / self.rates().lo()).max(1.0)
    }

    fn inner_scale(&self) -> f64 {
        1.0 / self.rates().hi()
    }
}

/// Smallest `U = U₀·1.5^k` with `tail(U) < target`.
fn cutoff<F: Fn(f64) -> f64>(start: f64, tail: F, target: f64) -> f64 {
    let mut u = start;
    while tail(u).partial_cmp(&target) != Some(Ordering::Less) {
        u *= 1.5;
        if !u.is_finite() {
            break;
        }
    }
    u
}

/// `0, s/4, s, 4s, 16s, …, U` so the first panels resolve the mode.
fn seed_partition(scale: f64, upper: f64) -> Vec<f64> {
    let mut points = vec![0.0];
    let mut x = 0.25 * scale;
    while x < upper {
        points.push(x);
        x *= 4.0;
    }
    points.push(upper);
    points
}

/// Differential entropy `−∫ f ln f` by quadrature, with `0·ln 0 = 0`.
pub fn entropy_quadrature<D: TailBounded>(d: &D, cfg: &QuadratureConfig) -> Result<EntropyNats> {
    let target = cfg.abs_tol / 10.0;
    let upper = cutoff(d.initial_cutoff(), |u| d.entropy_tail(u), target);
    let integrand = |y: f64| {
        let lf = d.ln_pdf(y);
        if lf == f64::NEG_INFINITY {
            0.0
        } else {
            -lf.exp() * lf
        }
    };
    let q = integrate(
        integrand,
        &seed_partition(d.inner_scale(), upper),
        cfg.abs_tol - d.entropy_tail(upper),
        cfg.max_subdivisions,
    )?;
    Ok(EntropyNats::new(q.value))
}

/// Total probability `∫ f` over the same truncated domain machinery.
pub fn mass_quadrature<D: TailBounded>(d: &D, cfg: &QuadratureConfig) -> Result<f64> {
    let target = cfg.abs_tol / 10.0;
    let upper = cutoff(d.initial_cutoff(), |u| d.mass_tail(u), target);
    let q = integrate(
        |y| d.pdf(y),
        &seed_partition(d.inner_scale(), upper),
        cfg.abs_tol - d.mass_tail(upper),
        cfg.max_subdivisions,
    )?;
    Ok(q.value)
}

// ---------------------------------------------------------------------------
// Monte Carlo

/// Resubstitution estimate of `h(Y)` from `n` seeded draws.
pub fn entropy_monte_carlo(d: &HypoexpTwo, n: usize, seed: u64) -> Result<EstimateWithError> {
    if n < 2 {
        return Err(Error::domain(format!("need at least 2 samples, got {n}")));
    }
    let mut rng = SeededGenerator::new(seed);
    // Welford running mean and sum of squared deviations.
    let mut mean = 0.0;
    let mut m2 = 0.0;
    for i in 0..n {
        let y = d.sample_hypoexp(&mut rng).value();
        let surprisal = -d.ln_pdf(y);
        let delta = surprisal - mean;
        mean += delta / (i + 1) as f64;
        m2 += delta * (surprisal - mean);
    }
    let variance = m2 / (n - 1) as f64;
    Ok(EstimateWithError {
        estimate: mean,
        std_error: (variance / n as f64).sqrt(),
        n_samples: n,
    })
}

// ---------------------------------------------------------------------------
// Log-integral identity

/// Reference value `−(γ + ψ(u/v + 1))/u`.
pub fn gr_closed_form(u: f64, v: f64) -> f64 {
    -(EULER_GAMMA + digamma_raw(u / v + 1.0)) / u
}

/// `∫₀^∞ e^{−ux} ln(1 − e^{−vx}) dx`, integrated numerically as
/// `(1/v) ∫₀¹ ξ^{u/v − 1} ln(1 − ξ) dξ` on `[δ, 1 − δ]`.
///
/// The dropped slivers are bounded by `2δ^{a+1}/(a+1)` near 0 (using
/// `|ln(1 − ξ)| ≤ 2ξ` for `ξ ≤ 1/2`) and by `max(1, (1−δ)^{a−1})·δ(1 − ln δ)`
/// near 1, with `a = u/v`. `δ` is halved until each, scaled by `1/v`, is below
/// `abs_tol/10`.
pub fn gr_log_integral(u: f64, v: f64, cfg: &QuadratureConfig) -> Result<f64> {
    for (name, x) in [("u", u), ("v", v)] {
        if !(x.is_finite() && x > 0.0) {
            return Err(Error::domain(format!("{name} must be positive, got {x}")));
        }
    }
    let a = u / v;
    let target = cfg.abs_tol / 10.0;
    let left_sliver = |d: f64| 2.0 * d.powf(a + 1.0) / (a + 1.0) / v;
    let right_sliver = |d: f64| (1.0 - d).powf(a - 1.0).max(1.0) * d * (1.0 - d.ln()) / v;

    let mut delta = 1e-3;
    while !(left_sliver(delta) < target && right_sliver(delta) < target) {
        delta *= 0.5;
        if delta < f64::EPSILON {
            break;
        }
    }
    let slivers = left_sliver(delta) + right_sliver(delta);

    let integrand = |xi: f64| xi.powf(a - 1.0) * (-xi).ln_1p();
    let q = integrate(
        integrand,
        &[delta, 0.5, 1.0 - delta],
        (cfg.abs_tol - slivers) * v,
        cfg.max_subdivisions,
    )?;
    Ok(q.value / v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn integrator_polynomial_exact() {
        let q = integrate(|x| x.powi(7) - 3.0 * x * x, &[0.0, 2.0], 1e-12, 10).unwrap();
        assert_abs_diff_eq!(q.value, 32.0 - 8.0, epsilon = 1e-12);
        assert_eq!(q.subdivisions, 0);
    }

    #[test]
    fn integrator_endpoint_singularity() {
        // ∫₀¹ ln x dx = −1
        let q = integrate(
            |x: f64| if x > 0.0 { x.ln() } else { 0.0 },
            &[0.0, 1.0],
            1e-12,
            500,
        )
        .unwrap();
        assert_abs_diff_eq!(q.value, -1.0, epsilon = 1e-11);
    }

    #[test]
    fn integrator_reports_exhaustion() {
        let err = integrate(|x: f64| x.sin() * 1e3, &[0.0, 1e4], 1e-14, 3).unwrap_err();
        assert!(matches!(
            err,
            Error::Convergence {
                subdivisions: 3,
                ..
            }
        ));
    }

    #[test]
    fn config_validation() {
        assert!(QuadratureConfig::new(0.0, 10).is_err());
        assert!(QuadratureConfig::new(1e-8, 0).is_err());
        assert!(QuadratureConfig::new(f64::NAN, 10).is_err());
        let d = QuadratureConfig::default();
        assert_eq!((d.abs_tol, d.max_subdivisions), (1e-10, 2000));
    }

    #[test]
    fn tail_bounds_dominate_true_tails() {
        // Compare against tails integrated numerically out to a far cutoff.
        let d = HypoexpTwo::from_rates(3.0, 0.5).unwrap();
        let u = 10.0;
        let far = integrate(
            |y| {
                let lf = d.ln_pdf(y);
                (lf.exp() * lf).abs()
            },
            &[u, 40.0, 120.0, 400.0],
            1e-14,
            500,
        )
        .unwrap();
        assert!(d.entropy_tail(u) >= far.value);
        assert!(d.mass_tail(u) >= 1.0 - d.cdf(u));
        let e = Exponential::new(0.7).unwrap();
        assert!(e.mass_tail(5.0) >= 1.0 - e.cdf(5.0));
    }

    #[test]
    fn quadrature_examples() {
        let cfg = QuadratureConfig::default();
        let exp1 = entropy_quadrature(&Exponential::new(1.0).unwrap(), &cfg).unwrap();
        assert_abs_diff_eq!(exp1.value(), 1.0, epsilon = 1e-10);
        let h21 = entropy_quadrature(&HypoexpTwo::from_rates(2.0, 1.0).unwrap(), &cfg).unwrap();
        assert_abs_diff_eq!(h21.value(), 2.0 - std::f64::consts::LN_2, epsilon = 1e-9);
        let erl = entropy_quadrature(&Erlang2::new(1.0).unwrap(), &cfg).unwrap();
        assert_abs_diff_eq!(erl.value(), 1.0 + EULER_GAMMA, epsilon = 1e-9);
    }

    #[test]
    fn quadrature_failure_surfaces() {
        let cfg = QuadratureConfig::new(1e-15, 2).unwrap();
        let d = HypoexpTwo::from_rates(10.0, 0.1).unwrap();
        assert!(matches!(
            entropy_quadrature(&d, &cfg),
            Err(Error::Convergence { .. })
        ));
    }

    #[test]
    fn gr_examples() {
        let cfg = QuadratureConfig::default();
        assert_abs_diff_eq!(
            gr_log_integral(1.0, 1.0, &cfg).unwrap(),
            -1.0,
            epsilon = 1e-10
        );
        assert_abs_diff_eq!(
            gr_log_integral(2.0, 1.0, &cfg).unwrap(),
            -0.75,
            epsilon = 1e-9
        );
        assert_abs_diff_eq!(
            gr_log_integral(1.0, 2.0, &cfg).unwrap(),
            2.0 * std::f64::consts::LN_2 - 2.0,
            epsilon = 1e-9
        );
        assert_abs_diff_eq!(gr_closed_form(1.0, 1.0), -1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(gr_closed_form(2.0, 1.0), -0.75, epsilon = 1e-15);
        assert!(gr_log_integral(0.0, 1.0, &cfg).is_err());
        assert!(gr_log_integral(1.0, -1.0, &cfg).is_err());
    }

    #[test]
    fn monte_carlo_contract() {
        let d = HypoexpTwo::from_rates(2.0, 1.0).unwrap();
        assert!(entropy_monte_carlo(&d, 1, 42).is_err());
        assert!(entropy_monte_carlo(&d, 0, 42).is_err());
        let a = entropy_monte_carlo(&d, 5000, 9).unwrap();
        let b = entropy_monte_carlo(&d, 5000, 9).unwrap();
        assert_eq!(a.estimate.to_bits(), b.estimate.to_bits());
        assert_eq!(a.std_error.to_bits(), b.std_error.to_bits());
        assert_eq!(a.n_samples, 5000);
        assert!(a.std_error > 0.0);
    }
}
