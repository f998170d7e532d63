use crate::error::{Error, Result};
use crate::firms::FirmTable;
use crate::network::{dyads, Network};
use crate::params::ParamVector;
use crate::scalar::Scalar;
use crate::stats::suff_stats;

/// Largest population for which all `2^(n(n-1)/2)` networks are enumerated.
pub const MAX_ENUMERATION_NODES: usize = 6;

/// Network whose dyad `k` (lexicographic order) is linked iff bit `k` of `mask` is set.
pub fn graph_from_mask(n: usize, mask: u32) -> Network {
    let mut g = Network::empty(n);
    for (k, (i, j)) in dyads(n).enumerate() {
        if mask >> k & 1 == 1 {
            g.set(i, j, true);
        }
    }
    g
}

pub fn mask_of(g: &Network) -> u32 {
    dyads(g.n())
        .enumerate()
        .filter(|(_, (i, j))| g.has_edge(*i, *j))
        .fold(0, |m, (k, _)| m | 1 << k)
}

pub(crate) fn check_enumerable(n: usize) -> Result<()> {
    if n > MAX_ENUMERATION_NODES {
        return Err(Error::TooLarge { n, max: MAX_ENUMERATION_NODES });
    }
    if n < 2 {
        return Err(Error::Config("enumeration needs at least two firms".into()));
    }
    Ok(())
}

/// The stationary law `exp Q(g) / c` over every network, indexed by mask.
#[derive(Clone, Debug)]
pub struct ExactDistribution<T> {
    pub n: usize,
    pub potentials: Vec<T>,
    pub probs: Vec<T>,
    /// `ln c(theta, x)`.
    pub log_normalizer: T,
}

impl<T: Scalar> ExactDistribution<T> {
    pub fn prob(&self, g: &Network) -> T {
        self.probs[mask_of(g) as usize]
    }

    /// Masks of networks whose probability is at least that of every single-toggle neighbor.
    pub fn local_maxima(&self) -> Vec<u32> {
        let d = self.n * (self.n - 1) / 2;
        (0..self.probs.len() as u32)
            .filter(|&m| (0..d).all(|k| self.probs[m as usize] >= self.probs[(m ^ 1 << k) as usize]))
            .collect()
    }

    /// Expected value of `f` under the law.
    pub fn expect(&self, f: impl Fn(u32) -> T) -> T {
        self.probs.iter().enumerate().map(|(m, &p)| p * f(m as u32)).sum()
    }
}

pub fn exact_distribution<T: Scalar>(x: &FirmTable<T>, theta: &ParamVector<T>) -> Result<ExactDistribution<T>> {
    let n = x.len();
    check_enumerable(n)?;
    let count = 1u32 << (n * (n - 1) / 2);
    let potentials: Vec<T> = (0..count)
        .map(|m| suff_stats(&graph_from_mask(n, m), x).map(|s| s.potential(theta)))
        .collect::<Result<_>>()?;
    let max = potentials.iter().copied().fold(T::neg_infinity(), T::max);
    if !max.is_finite() {
        return Err(Error::NonFinitePotential(theta.to_string()));
    }
    let weights: Vec<T> = potentials.iter().map(|&q| (q - max).exp()).collect();
    let total: T = weights.iter().copied().sum();
    let probs = weights.iter().map(|&w| w / total).collect();
    Ok(ExactDistribution { n, potentials, probs, log_normalizer: max + total.ln() })
}
