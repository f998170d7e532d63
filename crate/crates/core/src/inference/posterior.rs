use std::fmt::Write as _;

use super::diagnostics::{batch_means_mcse, diagnostics, DiagnosticsReport};
use crate::error::{Error, Result};
use crate::params::{ParamMask, ParamVector, NUM_PARAMS, PARAM_NAMES};
use crate::quantile;
use crate::scalar::Scalar;

/// Post-burn-in output of one chain.
#[derive(Clone, Debug, PartialEq)]
pub struct ChainDraws<T> {
    pub draws: Vec<ParamVector<T>>,
    /// Accepted proposals after burn-in.
    pub accepted: u64,
    /// Proposals made after burn-in.
    pub proposed: u64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PosteriorSample<T> {
    pub mask: ParamMask,
    /// Iterations discarded at the start of every chain.
    pub burn_in: usize,
    pub chains: Vec<ChainDraws<T>>,
    pub warnings: Vec<String>,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ParamSummary {
    pub name: &'static str,
    pub mean: f64,
    pub sd: f64,
    pub mcse: f64,
    pub q025: f64,
    pub q975: f64,
}

impl<T: Scalar> PosteriorSample<T> {
    pub fn len(&self) -> usize {
        self.chains.iter().map(|c| c.draws.len()).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Post-burn-in acceptance rate pooled over chains.
    pub fn acceptance_rate(&self) -> f64 {
        let acc: u64 = self.chains.iter().map(|c| c.accepted).sum();
        let prop: u64 = self.chains.iter().map(|c| c.proposed).sum();
        if prop == 0 {
            0.0
        } else {
            acc as f64 / prop as f64
        }
    }

    /// The `idx`-th draw in chain-major order.
    pub fn draw(&self, mut idx: usize) -> &ParamVector<T> {
        for c in &self.chains {
            if idx < c.draws.len() {
                return &c.draws[idx];
            }
            idx -= c.draws.len();
        }
        panic!("draw index out of range")
    }

    pub fn iter(&self) -> impl Iterator<Item = &ParamVector<T>> {
        self.chains.iter().flat_map(|c| c.draws.iter())
    }

    pub fn parameter_chains(&self, k: usize) -> Vec<Vec<f64>> {
        self.chains.iter().map(|c| c.draws.iter().map(|d| d[k].as_f64()).collect()).collect()
    }

    pub fn pooled(&self, k: usize) -> Vec<f64> {
        self.iter().map(|d| d[k].as_f64()).collect()
    }

    /// MCSE of the pooled mean: per-chain batch-means errors combined as
    /// `sqrt(sum mcse_c^2) / C`.
    pub fn mcse(&self, k: usize) -> f64 {
        let chains = self.parameter_chains(k);
        let ss: f64 = chains.iter().map(|c| batch_means_mcse(c).powi(2)).sum();
        ss.sqrt() / chains.len() as f64
    }

    pub fn summary(&self) -> Vec<ParamSummary> {
        (0..NUM_PARAMS)
            .map(|k| {
                let v = self.pooled(k);
                let n = v.len() as f64;
                let sorted = quantile::sorted(&v);
                let constant = sorted.first() == sorted.last();
                let mean = if constant { sorted[0] } else { v.iter().sum::<f64>() / n };
                let sd = if constant { 0.0 } else { (v.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt() };
                ParamSummary {
                    name: PARAM_NAMES[k],
                    mean,
                    sd,
                    mcse: self.mcse(k),
                    q025: quantile::interpolated(&sorted, 0.025),
                    q975: quantile::interpolated(&sorted, 0.975),
                }
            })
            .collect()
    }

    pub fn diagnostics(&self) -> Result<DiagnosticsReport> {
        diagnostics(self)
    }

    /// `chain,iter,alpha0,...,gamma`; `iter` counts from the first kept iteration.
    pub fn to_csv(&self) -> String {
        let mut out = format!("chain,iter,{}\n", PARAM_NAMES.join(","));
        for (c, chain) in self.chains.iter().enumerate() {
            for (s, d) in chain.draws.iter().enumerate() {
                let _ = writeln!(out, "{c},{},{d}", self.burn_in + s);
            }
        }
        out
    }

    /// Reads a draws table. Acceptance counts are not stored and come back as zero;
    /// every parameter is treated as free.
    pub fn from_csv(text: &str, file: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate();
        let header = lines.next().map(|(_, h)| h.trim()).unwrap_or("");
        let expected = format!("chain,iter,{}", PARAM_NAMES.join(","));
        if header != expected {
            return Err(Error::input(file, 1, format!("expected header `{expected}`")));
        }
        let mut chains: Vec<ChainDraws<T>> = Vec::new();
        let mut burn_in = None;
        for (k, line) in lines {
            let row = k + 1;
            if line.trim().is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split(',').map(str::trim).collect();
            if fields.len() != NUM_PARAMS + 2 {
                return Err(Error::input(file, row, format!("expected {} fields", NUM_PARAMS + 2)));
            }
            let chain: usize = fields[0].parse().map_err(|_| Error::input(file, row, "bad chain index"))?;
            let iter: usize = fields[1].parse().map_err(|_| Error::input(file, row, "bad iteration"))?;
            let mut v = [0.0; NUM_PARAMS];
            for (slot, f) in v.iter_mut().zip(&fields[2..]) {
                *slot = f.parse().map_err(|_| Error::input(file, row, format!("bad number `{f}`")))?;
            }
            if chain > chains.len() {
                return Err(Error::input(file, row, "chains must appear in order"));
            }
            if chain == chains.len() {
                chains.push(ChainDraws { draws: Vec::new(), accepted: 0, proposed: 0 });
            }
            burn_in.get_or_insert(iter);
            chains[chain].draws.push(ParamVector::from_f64(v));
        }
        if chains.is_empty() {
            return Err(Error::input(file, 1, "no draws"));
        }
        Ok(PosteriorSample { mask: ParamMask::FULL, burn_in: burn_in.unwrap_or(0), chains, warnings: Vec::new() })
    }
}
