//! Differential entropy of the sum of two independent exponential random
//! variables with distinct rates, in closed form, together with the
//! quantities that follow from it and independent numerical oracles.
//!
//! | module | contents |
//! |---|---|
//! | [`specfun`] | γ, digamma, and the cancellation-free ψ(x) − ln x |
//! | [`dist`] | exponential, Erlang-2 and two-phase hypoexponential densities; seeded sampling |
//! | [`entropy`] | closed-form entropies, channel mutual information, light-gated conditional entropy |
//! | [`oracle`] | adaptive quadrature, Monte-Carlo resubstitution, log-integral identity check |
//! | [`cli`] | command implementations behind the `hypoent` binary |

#![forbid(unsafe_code)]

pub mod cli;
pub mod dist;
pub mod entropy;
pub mod error;
pub mod oracle;
pub mod specfun;

pub use dist::{Density, Erlang2, Exponential, HypoexpTwo, RatePair, Sample, SeededGenerator};
pub use entropy::{
    cond_entropy_light, erlang2_entropy, exp_entropy, hypoexp_entropy, mean_constrained_rates,
    mutual_info_aen, EntropyNats, LightGatedModel,
};
pub use error::{Error, Result};
pub use oracle::{
    entropy_monte_carlo, entropy_quadrature, gr_log_integral, EstimateWithError, QuadratureConfig,
};
pub use specfun::{digamma, digamma_minus_log, euler_gamma, RealPositive};
