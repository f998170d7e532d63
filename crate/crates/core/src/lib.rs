//! Strategic network formation with an exponential-random-graph equilibrium.
//!
//! Firms meet in pairs and keep or drop their link according to the joint
//! marginal payoff plus a logistic match shock. The long-run distribution of
//! networks is `exp Q(g) / c(theta)` for the potential `Q`, which this crate
//! uses to simulate equilibria, estimate payoff parameters with the exchange
//! algorithm (and pseudolikelihood), check goodness of fit, and run policy
//! counterfactuals.
//!
//! Numeric code is generic over [`Scalar`] (`f32` or `f64`); the aliases at
//! the crate root fix the double-precision versions used by the CLI.

pub mod counterfactual;
pub mod dynamics;
pub mod error;
pub mod firms;
pub mod gof;
pub mod inference;
pub mod network;
pub mod params;
pub mod quantile;
pub mod rng;
pub mod scalar;
pub mod stats;
pub mod synthetic;

pub use error::{Error, Result};
pub use network::Network;
pub use params::{ParamMask, ParamVector, NUM_PARAMS, PARAM_NAMES};
pub use scalar::Scalar;

pub type Params = params::ParamVector<f64>;
pub type Params32 = params::ParamVector<f32>;
pub type Firms = firms::FirmTable<f64>;
pub type Firms32 = firms::FirmTable<f32>;
pub type Stats = stats::StatVector<f64>;
pub type Posterior = inference::PosteriorSample<f64>;
pub type Prior = inference::Prior<f64>;
