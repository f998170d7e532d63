//! Goodness of fit: degree, geodesic and edgewise-shared-partner
//! distributions of the observed network against posterior-predictive bands.

use std::collections::VecDeque;
use std::fmt::{self, Write as _};

use rand::seq::index;
use rayon::prelude::*;

use crate::dynamics::{Kernel, SimState, DEFAULT_SWAP_PROB};
use crate::error::{Error, Result};
use crate::firms::FirmTable;
use crate::inference::PosteriorSample;
use crate::network::Network;
use crate::quantile;
use crate::rng::stream;
use crate::scalar::Scalar;

pub const DEFAULT_SIMULATIONS: usize = 1000;
/// Band quantiles reported per bin.
pub const BAND_PROBS: [f64; 5] = [0.025, 0.25, 0.5, 0.75, 0.975];
/// Share of bins that must fall inside the 95% band for a good fit.
pub const FIT_SHARE: f64 = 0.9;

/// `counts[k]` = number of nodes of degree `k`.
pub fn degree_distribution(g: &Network) -> Vec<u64> {
    let degrees = g.degrees();
    let mut counts = vec![0u64; degrees.iter().max().map_or(1, |d| d + 1)];
    for d in degrees {
        counts[d] += 1;
    }
    counts
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Geodesics {
    /// `counts[d]` = unordered pairs at distance `d`; `counts[0]` is always 0.
    pub counts: Vec<u64>,
    pub unreachable: u64,
}

pub fn geodesic_distribution(g: &Network) -> Geodesics {
    let n = g.n();
    let mut counts = vec![0u64; 1];
    let mut reached = 0u64;
    let mut dist = vec![usize::MAX; n];
    let mut queue = VecDeque::new();
    for s in 0..n {
        dist.fill(usize::MAX);
        dist[s] = 0;
        queue.push_back(s);
        while let Some(u) = queue.pop_front() {
            for &v in g.neighbors(u) {
                let v = v as usize;
                if dist[v] == usize::MAX {
                    dist[v] = dist[u] + 1;
                    queue.push_back(v);
                    if v > s {
                        if counts.len() <= dist[v] {
                            counts.resize(dist[v] + 1, 0);
                        }
                        counts[dist[v]] += 1;
                        reached += 1;
                    }
                }
            }
        }
    }
    Geodesics { counts, unreachable: g.dyad_count() as u64 - reached }
}

/// `counts[k]` = number of edges whose endpoints share exactly `k` partners.
pub fn esp_distribution(g: &Network) -> Vec<u64> {
    let mut counts = vec![0u64; 1];
    for (i, j) in g.edges() {
        let k = g.common_neighbors(i, j);
        if counts.len() <= k {
            counts.resize(k + 1, 0);
        }
        counts[k] += 1;
    }
    counts
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    Degree,
    Geodesic,
    Esp,
}

impl Family {
    pub const ALL: [Family; 3] = [Family::Degree, Family::Geodesic, Family::Esp];

    pub fn name(self) -> &'static str {
        match self {
            Family::Degree => "degree",
            Family::Geodesic => "geodesic",
            Family::Esp => "esp",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// One network's three distributions, geodesic unreachable pairs kept apart.
#[derive(Clone, Debug, PartialEq)]
pub struct GofStatistics {
    pub degree: Vec<u64>,
    pub geodesic: Geodesics,
    pub esp: Vec<u64>,
}

impl GofStatistics {
    pub fn of(g: &Network) -> Self {
        GofStatistics { degree: degree_distribution(g), geodesic: geodesic_distribution(g), esp: esp_distribution(g) }
    }

    fn finite_len(&self, f: Family) -> usize {
        match f {
            Family::Degree => self.degree.len(),
            Family::Geodesic => self.geodesic.counts.len(),
            Family::Esp => self.esp.len(),
        }
    }

    /// Counts padded to `len` bins; the geodesic family appends the unreachable bin.
    fn binned(&self, f: Family, len: usize) -> Vec<f64> {
        let src = match f {
            Family::Degree => &self.degree,
            Family::Geodesic => &self.geodesic.counts,
            Family::Esp => &self.esp,
        };
        let mut v: Vec<f64> = (0..len).map(|k| src.get(k).copied().unwrap_or(0) as f64).collect();
        if f == Family::Geodesic {
            v.push(self.geodesic.unreachable as f64);
        }
        v
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct FamilyBands {
    pub family: Family,
    pub bins: Vec<String>,
    pub observed: Vec<f64>,
    /// Per bin, simulated quantiles at [`BAND_PROBS`].
    pub bands: Vec<[f64; 5]>,
}

impl FamilyBands {
    fn build(family: Family, observed: &GofStatistics, sims: &[GofStatistics]) -> Self {
        let len = sims.iter().chain(std::iter::once(observed)).map(|s| s.finite_len(family)).max().unwrap_or(1);
        let mut bins: Vec<String> = (0..len).map(|k| k.to_string()).collect();
        if family == Family::Geodesic {
            bins.push("inf".into());
        }
        let simulated: Vec<Vec<f64>> = sims.iter().map(|s| s.binned(family, len)).collect();
        let bands = (0..bins.len())
            .map(|b| {
                let col = quantile::sorted(&simulated.iter().map(|v| v[b]).collect::<Vec<_>>());
                BAND_PROBS.map(|p| quantile::interpolated(&col, p))
            })
            .collect();
        FamilyBands { family, bins, observed: observed.binned(family, len), bands }
    }

    /// Share of bins whose observed value lies in the central 95% band.
    pub fn coverage(&self) -> f64 {
        let inside = self.observed.iter().zip(&self.bands).filter(|(o, b)| b[0] <= **o && **o <= b[4]).count();
        inside as f64 / self.observed.len() as f64
    }

    pub fn fits(&self) -> bool {
        self.coverage() >= FIT_SHARE
    }

    /// `bin,observed,q025,q25,q50,q75,q975`
    pub fn to_csv(&self) -> String {
        let mut out = String::from("bin,observed,q025,q25,q50,q75,q975\n");
        for ((bin, o), q) in self.bins.iter().zip(&self.observed).zip(&self.bands) {
            let _ = writeln!(out, "{bin},{o},{},{},{},{},{}", q[0], q[1], q[2], q[3], q[4]);
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GofBands {
    pub simulations: usize,
    pub degree: FamilyBands,
    pub geodesic: FamilyBands,
    pub esp: FamilyBands,
}

impl GofBands {
    pub fn from_statistics(observed: &GofStatistics, sims: &[GofStatistics]) -> Self {
        GofBands {
            simulations: sims.len(),
            degree: FamilyBands::build(Family::Degree, observed, sims),
            geodesic: FamilyBands::build(Family::Geodesic, observed, sims),
            esp: FamilyBands::build(Family::Esp, observed, sims),
        }
    }

    pub fn family(&self, f: Family) -> &FamilyBands {
        match f {
            Family::Degree => &self.degree,
            Family::Geodesic => &self.geodesic,
            Family::Esp => &self.esp,
        }
    }

    pub fn fits(&self) -> bool {
        Family::ALL.iter().all(|&f| self.family(f).fits())
    }
}

/// Picks `m` distinct posterior draws uniformly over all chains.
pub(crate) fn subsample<T: Scalar>(sample: &PosteriorSample<T>, m: usize, seed: u64, label: &str) -> Result<Vec<usize>> {
    let available = sample.len();
    if m == 0 {
        return Err(Error::Config("number of simulations must be at least 1".into()));
    }
    if m > available {
        return Err(Error::NotEnoughDraws { requested: m, available });
    }
    Ok(index::sample(&mut stream(seed, label, 0), available, m).into_vec())
}

/// Posterior-predictive bands from `m` networks, each simulated for `steps`
/// Metropolis steps from the observed network at a distinct posterior draw.
pub fn gof_run<T: Scalar>(
    g_obs: &Network,
    x: &FirmTable<T>,
    sample: &PosteriorSample<T>,
    m: usize,
    steps: u64,
    seed: u64,
) -> Result<GofBands> {
    if g_obs.n() != x.len() {
        return Err(Error::DimensionMismatch { network: g_obs.n(), firms: x.len() });
    }
    let picks = subsample(sample, m, seed, "gof-draws")?;
    let kernel = Kernel::Metropolis { swap_prob: DEFAULT_SWAP_PROB };
    let template = SimState::new(g_obs.clone(), x)?;
    let sims: Vec<GofStatistics> = picks
        .par_iter()
        .enumerate()
        .map(|(job, &idx)| {
            let theta = sample.draw(idx);
            if !theta.is_finite() {
                return Err(Error::NonFinitePotential(theta.to_string()));
            }
            let mut state = template.clone();
            state.run(theta, &kernel, steps, &mut stream(seed, "gof", job as u64));
            Ok(GofStatistics::of(state.network()))
        })
        .collect::<Result<_>>()?;
    Ok(GofBands::from_statistics(&GofStatistics::of(g_obs), &sims))
}
