//! Maximum pseudolikelihood: logistic regression of each dyad on its change
//! statistics, treating dyads as independent.

use super::linalg::{cholesky, cholesky_inverse, cholesky_solve};
use crate::error::{Error, Result};
use crate::firms::FirmTable;
use crate::network::{dyads, Network};
use crate::params::{ParamMask, ParamVector, NUM_PARAMS};
use crate::scalar::{log1p_exp, logistic, Scalar};
use crate::stats::dyad_change;

const MAX_ITER: usize = 200;
const TOL: f64 = 1e-10;
/// Coefficients beyond this magnitude indicate a diverging (separated) fit.
const DIVERGENCE: f64 = 1e4;
/// Newton steps (relative to the coefficients) below this count as converged.
const STEP_TOL: f64 = 1e-8;
/// Iterations with a flat likelihood but large Newton steps before the design
/// is declared separated: the supremum is approached only at infinity.
const STALL_LIMIT: usize = 5;

#[derive(Clone, Debug)]
pub struct MpleFit<T> {
    pub estimates: ParamVector<T>,
    /// Inverse observed information; these understate the true uncertainty
    /// because dependence between dyads is ignored. Zero for fixed parameters.
    pub std_errors: [T; NUM_PARAMS],
    /// Covariance of the free parameters, row-major, in free-index order.
    pub covariance: Vec<T>,
    pub mask: ParamMask,
    pub log_pseudolikelihood: T,
    pub iterations: usize,
}

pub fn mple<T: Scalar>(g: &Network, x: &FirmTable<T>, include_network_terms: bool) -> Result<MpleFit<T>> {
    let mask = if include_network_terms { ParamMask::FULL } else { ParamMask::EXOGENOUS };
    mple_masked(g, x, mask)
}

pub fn mple_masked<T: Scalar>(g: &Network, x: &FirmTable<T>, mask: ParamMask) -> Result<MpleFit<T>> {
    if g.n() != x.len() {
        return Err(Error::DimensionMismatch { network: g.n(), firms: x.len() });
    }
    let free = mask.free_indices();
    let d = free.len();
    if d == 0 {
        return Err(Error::Config("no free parameters".into()));
    }
    let mut design = Vec::with_capacity(g.dyad_count() * d);
    let mut response = Vec::with_capacity(g.dyad_count());
    for (i, j) in dyads(g.n()) {
        let c = dyad_change(g, x, i, j).covariates();
        design.extend(free.iter().map(|&k| c[k]));
        response.push(g.has_edge(i, j));
    }
    let ones = response.iter().filter(|&&y| y).count();
    if ones == 0 || ones == response.len() {
        return Err(Error::Nonexistence(format!(
            "all {} dyads are {}; the pseudolikelihood has no maximum",
            response.len(),
            if ones == 0 { "unlinked" } else { "linked" }
        )));
    }

    let mut beta = vec![T::zero(); d];
    let mut ll = log_lik(&design, &response, &beta, d);
    let mut stalled = 0;
    for iter in 1..=MAX_ITER {
        let (grad, info) = score_and_information(&design, &response, &beta, d);
        let l = cholesky(&info, d).ok_or(Error::Singular)?;
        let step = cholesky_solve(&l, d, &grad);
        let mut t = T::one();
        let (mut next, mut next_ll);
        loop {
            next = beta.iter().zip(&step).map(|(b, s)| *b + t * *s).collect::<Vec<_>>();
            next_ll = log_lik(&design, &response, &next, d);
            if next_ll >= ll || t < T::of(1e-8) {
                break;
            }
            t = t * T::of(0.5);
        }
        let change = (next_ll - ll).abs();
        let size = beta.iter().fold(1.0, |m: f64, b| m.max(b.abs().as_f64()));
        let moved = step.iter().fold(0.0, |m: f64, s| m.max((t * *s).abs().as_f64())) / size;
        beta = next;
        let prev = ll;
        ll = next_ll;
        if beta.iter().any(|b| b.abs().as_f64() > DIVERGENCE) {
            return Err(Error::Nonexistence("coefficients diverge (separated design)".into()));
        }
        if change.as_f64() < TOL && iter > 1 && ll >= prev {
            if moved > STEP_TOL {
                stalled += 1;
                if stalled >= STALL_LIMIT {
                    return Err(Error::Nonexistence(
                        "likelihood flat while coefficients keep growing; the design is (quasi-)separated".into(),
                    ));
                }
                continue;
            }
            let (_, info) = score_and_information(&design, &response, &beta, d);
            let l = cholesky(&info, d).ok_or(Error::Singular)?;
            let cov = cholesky_inverse(&l, d);
            let mut estimates = ParamVector::zero();
            let mut std_errors = [T::zero(); NUM_PARAMS];
            for (a, &k) in free.iter().enumerate() {
                estimates[k] = beta[a];
                std_errors[k] = cov[a * d + a].sqrt();
            }
            return Ok(MpleFit { estimates, std_errors, covariance: cov, mask, log_pseudolikelihood: ll, iterations: iter });
        }
    }
    Err(Error::Nonexistence(format!("Newton-Raphson did not converge in {MAX_ITER} iterations")))
}

fn eta<T: Scalar>(row: &[T], beta: &[T]) -> T {
    row.iter().zip(beta).fold(T::zero(), |a, (x, b)| a + *x * *b)
}

fn log_lik<T: Scalar>(design: &[T], response: &[bool], beta: &[T], d: usize) -> T {
    design
        .chunks_exact(d)
        .zip(response)
        .map(|(row, &y)| {
            let e = eta(row, beta);
            (if y { e } else { T::zero() }) - log1p_exp(e)
        })
        .sum()
}

fn score_and_information<T: Scalar>(design: &[T], response: &[bool], beta: &[T], d: usize) -> (Vec<T>, Vec<T>) {
    let mut grad = vec![T::zero(); d];
    let mut info = vec![T::zero(); d * d];
    for (row, &y) in design.chunks_exact(d).zip(response) {
        let p = logistic(eta(row, beta));
        let r = (if y { T::one() } else { T::zero() }) - p;
        let w = p * (T::one() - p);
        for a in 0..d {
            grad[a] = grad[a] + r * row[a];
            for b in 0..=a {
                info[a * d + b] = info[a * d + b] + w * row[a] * row[b];
            }
        }
    }
    for a in 0..d {
        for b in 0..a {
            info[b * d + a] = info[a * d + b];
        }
    }
    (grad, info)
}
