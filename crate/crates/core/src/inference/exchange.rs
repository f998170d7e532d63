//! The exchange algorithm: a random-walk Metropolis sampler over parameters
//! whose acceptance ratio uses one auxiliary network drawn at the proposal,
//! so the normalizing constants of the likelihood cancel.

use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;

use super::linalg::{cholesky, lower_mul};
use super::mple::mple_masked;
use super::posterior::{ChainDraws, PosteriorSample};
use super::prior::Prior;
use crate::dynamics::{default_steps, Kernel, SimState, DEFAULT_SWAP_PROB};
use crate::error::{Error, Result};
use crate::firms::FirmTable;
use crate::network::Network;
use crate::params::{ParamMask, ParamVector, NUM_PARAMS};
use crate::rng::{stream, SimRng};
use crate::scalar::Scalar;
use crate::stats::StatVector;

/// Acceptance rate targeted by the burn-in scale adaptation.
pub const TARGET_ACCEPTANCE: f64 = 0.15;
const LOW_ACCEPTANCE: f64 = 0.01;
const FALLBACK_SD: f64 = 0.1;

/// Where each auxiliary simulation starts.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum AuxStart {
    #[default]
    Observed,
    Empty,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExchangeConfig {
    /// Iterations per chain, burn-in included.
    pub draws: usize,
    /// Leading iterations per chain that are discarded and used for adaptation.
    pub burn_in: usize,
    /// Auxiliary network steps; `None` means `ceil(n^2 ln n)`.
    pub aux_steps: Option<u64>,
    /// Random-walk standard deviations. `None` derives the proposal from the
    /// pseudolikelihood covariance.
    pub proposal_sd: Option<[f64; NUM_PARAMS]>,
    pub chains: usize,
    pub seed: u64,
    pub swap_prob: f64,
    pub mask: ParamMask,
    /// Initial parameter for chain 0; other chains start from a jittered copy.
    /// `None` starts at the pseudolikelihood estimate. Fixed parameters keep
    /// their value from here (zero by default).
    pub start: Option<[f64; NUM_PARAMS]>,
    pub aux_start: AuxStart,
    /// Tune the proposal during burn-in.
    pub adapt: bool,
}

impl Default for ExchangeConfig {
    fn default() -> Self {
        ExchangeConfig {
            draws: 50_000,
            burn_in: 5_000,
            aux_steps: None,
            proposal_sd: None,
            chains: 4,
            seed: 0,
            swap_prob: DEFAULT_SWAP_PROB,
            mask: ParamMask::FULL,
            start: None,
            aux_start: AuxStart::Observed,
            adapt: true,
        }
    }
}

impl ExchangeConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::Config(m.to_string()));
        if self.draws <= self.burn_in {
            return bad("draws must exceed burn_in");
        }
        if self.chains == 0 {
            return bad("chains must be at least 1");
        }
        if self.aux_steps == Some(0) {
            return bad("aux_steps must be at least 1");
        }
        if let Some(sd) = self.proposal_sd {
            if sd.iter().any(|s| !(*s > 0.0) || !s.is_finite()) {
                return bad("proposal_sd must be positive and finite");
            }
        }
        if !(0.0..1.0).contains(&self.swap_prob) {
            return bad("swap_prob must be in [0, 1)");
        }
        if self.mask.count() == 0 {
            return bad("at least one parameter must be free");
        }
        if let Some(s) = self.start {
            if s.iter().any(|v| !v.is_finite()) {
                return bad("start must be finite");
            }
        }
        Ok(())
    }
}

/// Produces the auxiliary network of one exchange iteration. The state has
/// already been reset to the configured start.
pub trait AuxiliarySampler<T: Scalar>: Sync {
    fn advance(&self, state: &mut SimState<'_, T>, theta: &ParamVector<T>, rng: &mut SimRng);
}

/// Runs a network kernel for a fixed number of steps.
#[derive(Clone, Debug)]
pub struct KernelSampler {
    pub kernel: Kernel,
    pub steps: u64,
}

impl<T: Scalar> AuxiliarySampler<T> for KernelSampler {
    fn advance(&self, state: &mut SimState<'_, T>, theta: &ParamVector<T>, rng: &mut SimRng) {
        state.run(theta, &self.kernel, self.steps, rng);
    }
}

/// Exchange sampling with the Metropolis toggle kernel as auxiliary sampler.
pub fn exchange_sample<T: Scalar>(
    g_obs: &Network,
    x: &FirmTable<T>,
    prior: &Prior<T>,
    cfg: &ExchangeConfig,
) -> Result<PosteriorSample<T>> {
    let sampler = KernelSampler {
        kernel: Kernel::Metropolis { swap_prob: cfg.swap_prob },
        steps: cfg.aux_steps.unwrap_or_else(|| default_steps(g_obs.n())),
    };
    exchange_sample_with(g_obs, x, prior, cfg, &sampler)
}

/// Log acceptance ratio of moving from `theta` to `proposal` given the
/// observed and auxiliary statistics.
pub(crate) fn log_acceptance<T: Scalar>(
    obs: &StatVector<T>,
    aux: &StatVector<T>,
    theta: &ParamVector<T>,
    proposal: &ParamVector<T>,
    log_prior_ratio: T,
) -> T {
    aux.potential(theta) - obs.potential(theta) + obs.potential(proposal) - aux.potential(proposal) + log_prior_ratio
}

struct Proposal {
    free: Vec<usize>,
    chol: Vec<f64>,
    log_scale: f64,
}

impl Proposal {
    fn sd(&self, a: usize) -> f64 {
        let d = self.free.len();
        (0..=a).map(|b| self.chol[a * d + b].powi(2)).sum::<f64>().sqrt()
    }

    fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<f64> {
        let z: Vec<f64> = self.free.iter().map(|_| StandardNormal.sample(rng)).collect();
        let s = self.log_scale.exp();
        lower_mul(&self.chol, self.free.len(), &z).into_iter().map(|v| v * s).collect()
    }
}

fn empirical_covariance(rows: &[Vec<f64>], d: usize) -> Vec<f64> {
    let n = rows.len() as f64;
    let mut mean = vec![0.0; d];
    for r in rows {
        for a in 0..d {
            mean[a] += r[a] / n;
        }
    }
    let mut cov = vec![0.0; d * d];
    for r in rows {
        for a in 0..d {
            for b in 0..d {
                cov[a * d + b] += (r[a] - mean[a]) * (r[b] - mean[b]) / (n - 1.0);
            }
        }
    }
    cov
}

/// Exchange sampling with a caller-supplied auxiliary sampler.
pub fn exchange_sample_with<T: Scalar, A: AuxiliarySampler<T>>(
    g_obs: &Network,
    x: &FirmTable<T>,
    prior: &Prior<T>,
    cfg: &ExchangeConfig,
    sampler: &A,
) -> Result<PosteriorSample<T>> {
    cfg.validate()?;
    prior.validate()?;
    if g_obs.n() != x.len() {
        return Err(Error::DimensionMismatch { network: g_obs.n(), firms: x.len() });
    }
    let mut warnings = Vec::new();
    if g_obs.edge_count() == 0 || g_obs.edge_count() == g_obs.dyad_count() {
        warnings.push(format!(
            "observed network is {}; the posterior may be improper or degenerate",
            if g_obs.edge_count() == 0 { "empty" } else { "complete" }
        ));
    }
    let free = cfg.mask.free_indices();
    let d = free.len();

    let fit = if cfg.start.is_none() || cfg.proposal_sd.is_none() {
        match mple_masked(g_obs, x, cfg.mask) {
            Ok(f) => Some(f),
            Err(e) => {
                warnings.push(format!("pseudolikelihood start unavailable ({e}); using defaults"));
                None
            }
        }
    } else {
        None
    };
    let mut start = [0.0; NUM_PARAMS];
    match (cfg.start, &fit) {
        (Some(s), _) => start = s,
        (None, Some(f)) => start = f.estimates.to_f64(),
        (None, None) => {
            for &k in &free {
                start[k] = prior.mean[k].as_f64();
            }
        }
    }
    let initial_cov: Vec<f64> = match (cfg.proposal_sd, &fit) {
        (Some(sd), _) => diagonal(free.iter().map(|&k| sd[k] * sd[k])),
        (None, Some(f)) => f.covariance.iter().map(|c| c.as_f64() * 2.38 * 2.38 / d as f64).collect(),
        (None, None) => diagonal(free.iter().map(|_| FALLBACK_SD * FALLBACK_SD)),
    };
    let chol = cholesky(&initial_cov, d)
        .or_else(|| cholesky(&diagonal(free.iter().map(|_| FALLBACK_SD * FALLBACK_SD)), d))
        .expect("diagonal covariance is positive definite");

    let mut template = SimState::new(
        match cfg.aux_start {
            AuxStart::Observed => g_obs.clone(),
            AuxStart::Empty => Network::empty(g_obs.n()),
        },
        x,
    )?;
    let obs_stats = if cfg.aux_start == AuxStart::Observed {
        *template.stats()
    } else {
        *SimState::new(g_obs.clone(), x)?.stats()
    };
    let aux_start_stats = *template.stats();
    // prime the complement-statistics cache once for all chains
    template.complement_stats();

    let chains: Vec<ChainDraws<T>> = (0..cfg.chains)
        .into_par_iter()
        .map(|c| {
            let mut proposal = Proposal { free: free.clone(), chol: chol.clone(), log_scale: 0.0 };
            let mut theta = start;
            if c > 0 {
                let mut jitter = stream(cfg.seed, "exchange-start", c as u64);
                for (a, &k) in free.iter().enumerate() {
                    let z: f64 = StandardNormal.sample(&mut jitter);
                    theta[k] += 2.0 * proposal.sd(a) * z;
                }
            }
            run_chain(
                ChainSetup {
                    cfg,
                    prior,
                    sampler,
                    template: &template,
                    obs: &obs_stats,
                    start_net: template.network(),
                    start_stats: &aux_start_stats,
                },
                &mut proposal,
                ParamVector::from_f64(theta),
                &mut stream(cfg.seed, "exchange", c as u64),
            )
        })
        .collect::<Result<_>>()?;

    let mut sample = PosteriorSample { mask: cfg.mask, burn_in: cfg.burn_in, chains, warnings };
    let rate = sample.acceptance_rate();
    if rate < LOW_ACCEPTANCE {
        sample.warnings.push(format!(
            "post-burn-in acceptance rate {rate:.4} is below {LOW_ACCEPTANCE}; reduce proposal_sd or lengthen burn_in"
        ));
    }
    Ok(sample)
}

fn diagonal(v: impl ExactSizeIterator<Item = f64>) -> Vec<f64> {
    let d = v.len();
    let mut m = vec![0.0; d * d];
    for (a, x) in v.enumerate() {
        m[a * d + a] = x;
    }
    m
}

struct ChainSetup<'s, 'x, T, A> {
    cfg: &'s ExchangeConfig,
    prior: &'s Prior<T>,
    sampler: &'s A,
    template: &'s SimState<'x, T>,
    obs: &'s StatVector<T>,
    start_net: &'s Network,
    start_stats: &'s StatVector<T>,
}

fn run_chain<T: Scalar, A: AuxiliarySampler<T>>(
    setup: ChainSetup<'_, '_, T, A>,
    proposal: &mut Proposal,
    mut theta: ParamVector<T>,
    rng: &mut SimRng,
) -> Result<ChainDraws<T>> {
    let ChainSetup { cfg, prior, sampler, template, obs, start_net, start_stats } = setup;
    let d = proposal.free.len();
    let mut state = template.clone();
    let mut log_prior = prior.log_density(&theta, &cfg.mask);
    let mut out = ChainDraws { draws: Vec::with_capacity(cfg.draws - cfg.burn_in), accepted: 0, proposed: 0 };
    let mut history: Vec<Vec<f64>> = Vec::new();
    let mut adapt_clock = 0usize;
    let checkpoints = [cfg.burn_in / 2, 3 * cfg.burn_in / 4];

    for s in 0..cfg.draws {
        let step = proposal.draw(rng);
        let mut next = theta;
        for (a, &k) in proposal.free.iter().enumerate() {
            next[k] = next[k] + T::of(step[a]);
        }
        let next_prior = prior.log_density(&next, &cfg.mask);
        state.restore(start_net, start_stats);
        sampler.advance(&mut state, &next, rng);
        let log_alpha = log_acceptance(obs, state.stats(), &theta, &next, next_prior - log_prior).as_f64();
        if log_alpha.is_nan() || !next.is_finite() {
            return Err(Error::NonFinitePotential(next.to_string()));
        }
        let accepted = log_alpha >= 0.0 || rng.random::<f64>() < log_alpha.exp();
        if accepted {
            theta = next;
            log_prior = next_prior;
        }
        if s < cfg.burn_in {
            if cfg.adapt {
                adapt_clock += 1;
                let gain = (adapt_clock as f64).powf(-0.6);
                proposal.log_scale += gain * ((accepted as u8) as f64 - TARGET_ACCEPTANCE);
                history.push(proposal.free.iter().map(|&k| theta[k].as_f64()).collect());
                if checkpoints.contains(&(s + 1)) && history.len() / 2 >= 20 * d {
                    let recent = &history[history.len() / 2..];
                    let cov = empirical_covariance(recent, d);
                    let scaled: Vec<f64> = cov.iter().map(|c| c * 2.38 * 2.38 / d as f64).collect();
                    if let Some(l) = cholesky(&scaled, d) {
                        proposal.chol = l;
                        proposal.log_scale = 0.0;
                        adapt_clock = 0;
                    }
                }
            }
        } else {
            out.proposed += 1;
            out.accepted += accepted as u64;
            out.draws.push(theta);
        }
    }
    Ok(out)
}
