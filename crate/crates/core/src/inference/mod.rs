//! Bayesian estimation with the exchange algorithm, the pseudolikelihood
//! baseline, and MCMC output analysis.

mod diagnostics;
mod exchange;
mod linalg;
mod mple;
mod posterior;
mod prior;

pub use diagnostics::{batch_means_mcse, diagnostics, effective_sample_size, split_rhat, DiagnosticsReport, ParamDiagnostics};
pub use exchange::{
    exchange_sample, exchange_sample_with, AuxStart, AuxiliarySampler, ExchangeConfig, KernelSampler,
    TARGET_ACCEPTANCE,
};
pub use mple::{mple, mple_masked, MpleFit};
pub use posterior::{ChainDraws, ParamSummary, PosteriorSample};
pub use prior::Prior;
