//! Policy scenarios: change the firm population, re-simulate equilibrium
//! networks at posterior draws, and summarize the resulting markets.

use std::fmt::Write as _;

use rand::Rng;
use rand_distr::{Distribution, Normal};
use rayon::prelude::*;

use crate::dynamics::{Kernel, SimState, DEFAULT_SWAP_PROB};
use crate::error::{Error, Result};
use crate::firms::{Firm, FirmTable, FirmType};
use crate::gof::subsample;
use crate::inference::PosteriorSample;
use crate::network::Network;
use crate::quantile;
use crate::rng::stream;
use crate::scalar::Scalar;
use crate::stats::{suff_stats, StatVector};

/// Probabilities at which the degree quantile curve is evaluated.
pub const DEGREE_CURVE_PROBS: [f64; 21] = [
    0.0, 0.05, 0.1, 0.15, 0.2, 0.25, 0.3, 0.35, 0.4, 0.45, 0.5, 0.55, 0.6, 0.65, 0.7, 0.75, 0.8, 0.85, 0.9, 0.95, 1.0,
];
pub const HISTOGRAM_BINS: usize = 20;
pub const METRICS: [&str; 6] = ["density", "clustering", "homophily_type", "homophily_state", "mean_degree", "isolates"];

#[derive(Clone, Debug, PartialEq)]
pub enum Scenario {
    /// New firms with zero links. Log capital is drawn from a normal with the
    /// incumbents' mean and standard deviation; age is resampled from incumbents.
    Entry { count: usize, state: String, firm_type: FirmType },
    /// Firms with log capital below the nearest-rank `q`-quantile leave the market.
    MinCapital { q: f64 },
}

impl Scenario {
    pub fn validate(&self) -> Result<()> {
        match self {
            Scenario::MinCapital { q } if !(*q > 0.0 && *q < 1.0) => {
                Err(Error::Config(format!("min_capital quantile must lie in (0, 1), got {q}")))
            }
            Scenario::Entry { state, .. } if state.trim().is_empty() => Err(Error::Config("entry state is empty".into())),
            _ => Ok(()),
        }
    }
}

fn mean_sd(v: &[f64]) -> (f64, f64) {
    let n = v.len() as f64;
    let mean = v.iter().sum::<f64>() / n;
    let var = if v.len() > 1 { v.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0) } else { 0.0 };
    (mean, var.sqrt())
}

/// Transformed population and start network for a scenario.
pub fn apply_scenario<T: Scalar, R: Rng + ?Sized>(
    x: &FirmTable<T>,
    g: &Network,
    scenario: &Scenario,
    rng: &mut R,
) -> Result<(FirmTable<T>, Network)> {
    scenario.validate()?;
    if g.n() != x.len() {
        return Err(Error::DimensionMismatch { network: g.n(), firms: x.len() });
    }
    match scenario {
        Scenario::Entry { count, state, firm_type } => {
            if *count == 0 {
                return Ok((x.clone(), g.clone()));
            }
            if x.is_empty() {
                return Err(Error::Config("entry needs incumbents to calibrate entrant attributes".into()));
            }
            let caps: Vec<f64> = x.log_capitals().iter().map(|c| c.as_f64()).collect();
            let (mean, sd) = mean_sd(&caps);
            let capital = Normal::new(mean, sd).map_err(|e| Error::Config(e.to_string()))?;
            let mut out = x.clone();
            let mut serial = 0usize;
            for _ in 0..*count {
                let id = loop {
                    serial += 1;
                    let id = format!("entrant{serial:04}");
                    if out.index_of(&id).is_none() {
                        break id;
                    }
                };
                let age = x.age(rng.random_range(0..x.len()));
                out.append(Firm {
                    id,
                    firm_type: *firm_type,
                    state: state.clone(),
                    log_capital: T::of(capital.sample(rng)),
                    age,
                })?;
            }
            Ok((out, g.with_isolates(*count)))
        }
        Scenario::MinCapital { q } => {
            let caps: Vec<f64> = x.log_capitals().iter().map(|c| c.as_f64()).collect();
            if caps.is_empty() {
                return Err(Error::TooFewFirms(0));
            }
            let threshold = quantile::nearest_rank(&quantile::sorted(&caps), *q);
            let keep: Vec<usize> = (0..x.len()).filter(|&i| caps[i] >= threshold).collect();
            if keep.len() < 3 {
                return Err(Error::TooFewFirms(keep.len()));
            }
            Ok((x.select(&keep), g.induced(&keep)))
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct NetworkSummary {
    pub n: usize,
    pub edges: u64,
    pub density: f64,
    /// Triangles over `C(n, 3)`.
    pub clustering: f64,
    pub homophily_type: f64,
    pub homophily_state: f64,
    /// Homophily shares are reported as 0 when there are no edges.
    pub zero_edges: bool,
    pub mean_degree: f64,
    /// Degree quantiles at [`DEGREE_CURVE_PROBS`].
    pub degree_curve: Vec<f64>,
    pub isolates: usize,
}

impl NetworkSummary {
    pub fn metric(&self, name: &str) -> Option<f64> {
        Some(match name {
            "density" => self.density,
            "clustering" => self.clustering,
            "homophily_type" => self.homophily_type,
            "homophily_state" => self.homophily_state,
            "mean_degree" => self.mean_degree,
            "isolates" => self.isolates as f64,
            _ => return None,
        })
    }
}

fn summary_from<T: Scalar>(g: &Network, s: &StatVector<T>) -> NetworkSummary {
    let n = g.n();
    let nf = n as f64;
    let pairs = nf * (nf - 1.0) / 2.0;
    let triples = pairs * (nf - 2.0) / 3.0;
    let share = |k: u64| if s.edges == 0 { 0.0 } else { k as f64 / s.edges as f64 };
    let degrees: Vec<f64> = g.degrees().into_iter().map(|d| d as f64).collect();
    let sorted = quantile::sorted(&degrees);
    NetworkSummary {
        n,
        edges: s.edges,
        density: s.edges as f64 / pairs,
        clustering: s.triangles as f64 / triples,
        homophily_type: share(s.same_type),
        homophily_state: share(s.same_state),
        zero_edges: s.edges == 0,
        mean_degree: 2.0 * s.edges as f64 / nf,
        degree_curve: DEGREE_CURVE_PROBS.iter().map(|&p| quantile::interpolated(&sorted, p)).collect(),
        isolates: degrees.iter().filter(|&&d| d == 0.0).count(),
    }
}

pub fn summarize<T: Scalar>(g: &Network, x: &FirmTable<T>) -> Result<NetworkSummary> {
    if g.n() < 3 {
        return Err(Error::TooFewFirms(g.n()));
    }
    Ok(summary_from(g, &suff_stats(g, x)?))
}

/// Summary of a sampler state from its incrementally tracked statistics.
pub fn summarize_state<T: Scalar>(state: &SimState<'_, T>) -> Result<NetworkSummary> {
    if state.network().n() < 3 {
        return Err(Error::TooFewFirms(state.network().n()));
    }
    Ok(summary_from(state.network(), state.stats()))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HistogramBin {
    pub lo: f64,
    pub hi: f64,
    pub count: usize,
}

/// Equal-width histogram over the data range; one bin when the data are constant.
pub fn histogram(values: &[f64], bins: usize) -> Vec<HistogramBin> {
    if values.is_empty() {
        return Vec::new();
    }
    let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if lo == hi || bins <= 1 {
        return vec![HistogramBin { lo, hi, count: values.len() }];
    }
    let width = (hi - lo) / bins as f64;
    let mut out: Vec<HistogramBin> = (0..bins)
        .map(|b| HistogramBin { lo: lo + b as f64 * width, hi: if b + 1 == bins { hi } else { lo + (b + 1) as f64 * width }, count: 0 })
        .collect();
    for v in values {
        let b = (((v - lo) / width) as usize).min(bins - 1);
        out[b].count += 1;
    }
    out
}

#[derive(Clone, Debug, PartialEq)]
pub struct CounterfactualRun {
    /// Summary of the start network under the transformed population.
    pub start: NetworkSummary,
    /// One summary per simulated network, in job order.
    pub summaries: Vec<NetworkSummary>,
}

impl CounterfactualRun {
    pub fn values(&self, metric: &str) -> Vec<f64> {
        self.summaries.iter().filter_map(|s| s.metric(metric)).collect()
    }

    pub fn histogram(&self, metric: &str) -> Vec<HistogramBin> {
        histogram(&self.values(metric), HISTOGRAM_BINS)
    }

    /// Average over simulations of each degree-curve point.
    pub fn mean_degree_curve(&self) -> Vec<f64> {
        let m = self.summaries.len() as f64;
        (0..DEGREE_CURVE_PROBS.len())
            .map(|k| self.summaries.iter().map(|s| s.degree_curve[k]).sum::<f64>() / m)
            .collect()
    }

    /// `bin_lo,bin_hi,count`
    pub fn histogram_csv(&self, metric: &str) -> String {
        let mut out = String::from("bin_lo,bin_hi,count\n");
        for b in self.histogram(metric) {
            let _ = writeln!(out, "{},{},{}", b.lo, b.hi, b.count);
        }
        out
    }
}

/// Simulates `m` equilibrium networks from `g0`, one per distinct posterior draw.
pub fn run_counterfactual<T: Scalar>(
    x: &FirmTable<T>,
    g0: &Network,
    sample: &PosteriorSample<T>,
    m: usize,
    steps: u64,
    seed: u64,
) -> Result<CounterfactualRun> {
    let start = summarize(g0, x)?;
    let picks = subsample(sample, m, seed, "counterfactual-draws")?;
    let kernel = Kernel::Metropolis { swap_prob: DEFAULT_SWAP_PROB };
    let template = SimState::new(g0.clone(), x)?;
    let summaries = picks
        .par_iter()
        .enumerate()
        .map(|(job, &idx)| {
            let theta = sample.draw(idx);
            if !theta.is_finite() {
                return Err(Error::NonFinitePotential(theta.to_string()));
            }
            let mut state = template.clone();
            state.run(theta, &kernel, steps, &mut stream(seed, "counterfactual", job as u64));
            summarize_state(&state)
        })
        .collect::<Result<_>>()?;
    Ok(CounterfactualRun { start, summaries })
}
