//! Batch-means standard errors, split-chain potential scale reduction, and
//! multi-chain effective sample size.

use rustfft::num_complex::Complex;
use rustfft::FftPlanner;

use super::posterior::PosteriorSample;
use crate::error::{Error, Result};
use crate::params::{NUM_PARAMS, PARAM_NAMES};
use crate::scalar::Scalar;

/// Split-chain PSRF above this value is flagged.
pub const PSRF_THRESHOLD: f64 = 1.1;
pub const MIN_DRAWS_PER_CHAIN: usize = 100;

fn mean(v: &[f64]) -> f64 {
    v.iter().sum::<f64>() / v.len() as f64
}

fn variance(v: &[f64]) -> f64 {
    let m = mean(v);
    v.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / (v.len() as f64 - 1.0)
}

/// Monte Carlo standard error of the mean of one chain by non-overlapping
/// batch means with batch size `floor(sqrt(N))`.
pub fn batch_means_mcse(chain: &[f64]) -> f64 {
    let n = chain.len();
    if n < 4 {
        return f64::NAN;
    }
    let b = (n as f64).sqrt().floor() as usize;
    let a = n / b;
    let used = &chain[..a * b];
    let batch: Vec<f64> = used.chunks_exact(b).map(mean).collect();
    (b as f64 * variance(&batch) / (a * b) as f64).sqrt()
}

/// Split-R-hat over chains of equal length (trimmed to the shortest). `None`
/// when the within-chain variance vanishes.
pub fn split_rhat(chains: &[Vec<f64>]) -> Option<f64> {
    let len = chains.iter().map(Vec::len).min()?;
    let half = len / 2;
    if half < 2 || chains.is_empty() {
        return None;
    }
    let halves: Vec<&[f64]> = chains.iter().flat_map(|c| [&c[..half], &c[half..2 * half]]).collect();
    let means: Vec<f64> = halves.iter().map(|h| mean(h)).collect();
    let w = halves.iter().map(|h| variance(h)).sum::<f64>() / halves.len() as f64;
    if !(w > 0.0) {
        return None;
    }
    let n = half as f64;
    let b = n * variance(&means);
    Some((((n - 1.0) / n * w + b / n) / w).sqrt())
}

fn autocovariance(x: &[f64], planner: &mut FftPlanner<f64>) -> Vec<f64> {
    let n = x.len();
    let m = mean(x);
    let size = (2 * n).next_power_of_two();
    let mut buf: Vec<Complex<f64>> = x.iter().map(|v| Complex::new(v - m, 0.0)).collect();
    buf.resize(size, Complex::new(0.0, 0.0));
    planner.plan_fft_forward(size).process(&mut buf);
    for c in buf.iter_mut() {
        *c = Complex::new(c.norm_sqr(), 0.0);
    }
    planner.plan_fft_inverse(size).process(&mut buf);
    buf[..n].iter().map(|c| c.re / (size as f64 * n as f64)).collect()
}

/// Effective sample size combining chains, with Geyer's initial monotone
/// sequence truncation of the autocorrelations.
pub fn effective_sample_size(chains: &[Vec<f64>]) -> f64 {
    let m = chains.len();
    let n = chains.iter().map(Vec::len).min().unwrap_or(0);
    if m == 0 || n < 4 {
        return f64::NAN;
    }
    let chains: Vec<&[f64]> = chains.iter().map(|c| &c[..n]).collect();
    let mut planner = FftPlanner::new();
    let acov: Vec<Vec<f64>> = chains.iter().map(|c| autocovariance(c, &mut planner)).collect();
    let nf = n as f64;
    let mean_var = acov.iter().map(|a| a[0]).sum::<f64>() / m as f64 * nf / (nf - 1.0);
    let mut var_plus = mean_var * (nf - 1.0) / nf;
    if m > 1 {
        let means: Vec<f64> = chains.iter().map(|c| mean(c)).collect();
        var_plus += variance(&means);
    }
    if !(var_plus > 0.0) {
        return f64::NAN;
    }
    let rho = |t: usize| {
        let avg = acov.iter().map(|a| a[t]).sum::<f64>() / m as f64;
        1.0 - (mean_var - avg) / var_plus
    };
    let mut tau = 0.0;
    let mut prev = f64::INFINITY;
    let mut t = 0;
    while t + 1 < n {
        let mut pair = rho(t) + rho(t + 1);
        if pair <= 0.0 {
            break;
        }
        pair = pair.min(prev);
        prev = pair;
        tau += pair;
        t += 2;
    }
    let tau = (2.0 * tau - 1.0).max(1.0 / (m as f64 * nf).log10().max(1.0));
    m as f64 * nf / tau
}

#[derive(Clone, Debug, PartialEq)]
pub struct ParamDiagnostics {
    pub name: &'static str,
    pub mcse: f64,
    pub psrf: Option<f64>,
    pub ess: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DiagnosticsReport {
    pub params: Vec<ParamDiagnostics>,
    /// Human-readable warnings: undefined or large PSRF.
    pub flags: Vec<String>,
}

impl DiagnosticsReport {
    pub fn converged(&self) -> bool {
        self.flags.is_empty()
    }
}

/// Convergence report over the free parameters of a posterior sample.
pub fn diagnostics<T: Scalar>(sample: &PosteriorSample<T>) -> Result<DiagnosticsReport> {
    if sample.chains.len() < 2 {
        return Err(Error::TooFewDraws(format!("need at least 2 chains, got {}", sample.chains.len())));
    }
    let shortest = sample.chains.iter().map(|c| c.draws.len()).min().unwrap_or(0);
    if shortest < MIN_DRAWS_PER_CHAIN {
        return Err(Error::TooFewDraws(format!(
            "need at least {MIN_DRAWS_PER_CHAIN} post-burn-in draws per chain, got {shortest}"
        )));
    }
    let mut params = Vec::new();
    let mut flags = Vec::new();
    for k in (0..NUM_PARAMS).filter(|&k| sample.mask.is_free(k)) {
        let chains = sample.parameter_chains(k);
        let psrf = split_rhat(&chains);
        match psrf {
            None => flags.push(format!("{}: PSRF undefined (zero within-chain variance)", PARAM_NAMES[k])),
            Some(r) if !(r <= PSRF_THRESHOLD) => flags.push(format!("{}: PSRF {r:.3} > {PSRF_THRESHOLD}", PARAM_NAMES[k])),
            _ => {}
        }
        params.push(ParamDiagnostics {
            name: PARAM_NAMES[k],
            mcse: sample.mcse(k),
            psrf,
            ess: effective_sample_size(&chains),
        });
    }
    Ok(DiagnosticsReport { params, flags })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::inference::posterior::ChainDraws;
    use crate::params::{ParamMask, ParamVector};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use rand_distr::{Distribution, StandardNormal};

    fn normals(seed: u64, n: usize) -> Vec<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..n).map(|_| StandardNormal.sample(&mut rng)).collect()
    }

    fn ar1(seed: u64, n: usize, phi: f64) -> Vec<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut x = 0.0;
        (0..n)
            .map(|_| {
                let e: f64 = StandardNormal.sample(&mut rng);
                x = phi * x + e;
                x
            })
            .collect()
    }

    #[test]
    fn iid_ess_near_draw_count() {
        let chains: Vec<Vec<f64>> = (0..4).map(|c| normals(c, 5000)).collect();
        let ess = effective_sample_size(&chains);
        assert!((ess / 20_000.0 - 1.0).abs() < 0.1, "ess {ess}");
    }

    #[test]
    fn ar1_ess_matches_theory() {
        // integrated autocorrelation time (1 + phi) / (1 - phi) = 3 for phi = 0.5
        let chains: Vec<Vec<f64>> = (0..4).map(|c| ar1(c + 10, 20_000, 0.5)).collect();
        let ess = effective_sample_size(&chains);
        assert!((ess / (80_000.0 / 3.0) - 1.0).abs() < 0.15, "ess {ess}");
    }

    #[test]
    fn mcse_shrinks_with_root_n() {
        let chain = ar1(99, 16_000, 0.5);
        let se: Vec<f64> = [1000, 4000, 16_000].iter().map(|&s| batch_means_mcse(&chain[..s])).collect();
        for w in se.windows(2) {
            let ratio = w[0] / w[1];
            assert!((ratio / 2.0 - 1.0).abs() < 0.2, "ratio {ratio}");
        }
        // long-run sd of AR(1) with phi 0.5 is 2, so MCSE ~ 2/sqrt(N)
        assert!((se[2] / (2.0 / 16_000f64.sqrt()) - 1.0).abs() < 0.25);
    }

    #[test]
    fn rhat_detects_disagreement() {
        let same: Vec<Vec<f64>> = (0..4).map(|c| normals(c, 2000)).collect();
        assert!(split_rhat(&same).unwrap() < 1.01);
        let mut shifted = same.clone();
        shifted[0].iter_mut().for_each(|v| *v += 3.0);
        assert!(split_rhat(&shifted).unwrap() > 1.1);
        assert!(split_rhat(&[vec![1.0; 200], vec![1.0; 200]]).is_none());
    }

    fn sample_from(chains: Vec<Vec<f64>>) -> PosteriorSample<f64> {
        PosteriorSample {
            mask: ParamMask([true, false, false, false, false, false, false]),
            burn_in: 0,
            chains: chains
                .into_iter()
                .map(|c| ChainDraws {
                    draws: c.into_iter().map(|v| ParamVector::from_f64([v, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0])).collect(),
                    accepted: 0,
                    proposed: 1,
                })
                .collect(),
            warnings: Vec::new(),
        }
    }

    #[test]
    fn constant_chains_flagged() {
        let report = diagnostics(&sample_from(vec![vec![2.0; 150], vec![2.0; 150]])).unwrap();
        assert!(report.params[0].psrf.is_none());
        assert!(!report.converged());
    }

    #[test]
    fn too_few_draws_rejected() {
        assert!(matches!(diagnostics(&sample_from(vec![vec![0.0; 150]])), Err(Error::TooFewDraws(_))));
        assert!(matches!(diagnostics(&sample_from(vec![normals(1, 50), normals(2, 50)])), Err(Error::TooFewDraws(_))));
        let ok = diagnostics(&sample_from(vec![normals(1, 500), normals(2, 500)])).unwrap();
        assert!(ok.converged());
        assert_eq!(ok.params.len(), 1);
    }
}
