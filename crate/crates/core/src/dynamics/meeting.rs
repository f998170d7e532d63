use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::Rng;

use crate::error::{Error, Result};
use crate::network::dyads;

/// Which pair of firms gets to revise its link in a period.
#[derive(Clone, Debug, Default)]
pub enum MeetingProcess {
    /// Every pair equally likely.
    #[default]
    Uniform,
    /// Fixed positive weights over dyads in lexicographic order.
    Weighted { n: usize, pairs: Vec<(usize, usize)>, weights: Vec<f64>, index: WeightedIndex<f64> },
}

impl MeetingProcess {
    pub fn weighted(n: usize, weights: Vec<f64>) -> Result<Self> {
        let pairs: Vec<_> = dyads(n).collect();
        if weights.len() != pairs.len() {
            return Err(Error::Config(format!("need {} dyad weights, got {}", pairs.len(), weights.len())));
        }
        if weights.iter().any(|w| !(*w > 0.0) || !w.is_finite()) {
            return Err(Error::Config("meeting probabilities must be positive".into()));
        }
        let index = WeightedIndex::new(&weights).map_err(|e| Error::Config(e.to_string()))?;
        Ok(MeetingProcess::Weighted { n, pairs, weights, index })
    }

    /// Draws a pair `(i, j)` with `i < j`.
    #[inline]
    pub fn draw<R: Rng + ?Sized>(&self, n: usize, rng: &mut R) -> (usize, usize) {
        match self {
            MeetingProcess::Uniform => {
                let i = rng.random_range(0..n);
                let mut j = rng.random_range(0..n - 1);
                if j >= i {
                    j += 1;
                }
                (i.min(j), i.max(j))
            }
            MeetingProcess::Weighted { n: m, pairs, index, .. } => {
                debug_assert_eq!(*m, n);
                pairs[index.sample(rng)]
            }
        }
    }

    /// Meeting probability of dyad `(i, j)`, `i < j`, for `n` firms.
    pub fn rho(&self, n: usize, i: usize, j: usize) -> f64 {
        match self {
            MeetingProcess::Uniform => 2.0 / (n * (n - 1)) as f64,
            MeetingProcess::Weighted { weights, .. } => {
                let total: f64 = weights.iter().sum();
                weights[crate::network::dyad_index(n, i, j)] / total
            }
        }
    }
}
