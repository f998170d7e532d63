//! Sufficient statistics, change statistics and the potential.
//!
//! The potential is written over unordered statistics,
//!
//! `Q = 2 (a0 E + a1 E_type + a2 Σ|Δcap| + a3 Σ|Δage| + a4 E_state) + b S2 + 4 c T`,
//!
//! which makes the change in `Q` from adding link `ij` equal to the joint
//! marginal payoff `MP_ij + MP_ji` of the two firms.

use crate::error::{Error, Result};
use crate::firms::FirmTable;
use crate::network::Network;
use crate::params::{ParamVector, NUM_PARAMS};
use crate::scalar::{logistic, Scalar};

/// Weight of each statistic in the potential, in parameter order.
pub const POTENTIAL_SCALE: [f64; NUM_PARAMS] = [2.0, 2.0, 2.0, 2.0, 2.0, 1.0, 4.0];

pub const STAT_NAMES: [&str; NUM_PARAMS] =
    ["E", "sametype", "capdiff", "agediff", "samestate", "twostars", "triangles"];

#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub struct StatVector<T> {
    pub edges: u64,
    pub same_type: u64,
    pub capital_gap: T,
    pub age_gap: T,
    pub same_state: u64,
    pub two_stars: u64,
    pub triangles: u64,
}

impl<T: Scalar> StatVector<T> {
    /// Statistics in parameter order, unscaled.
    pub fn raw(&self) -> [T; NUM_PARAMS] {
        [
            T::count(self.edges),
            T::count(self.same_type),
            self.capital_gap,
            self.age_gap,
            T::count(self.same_state),
            T::count(self.two_stars),
            T::count(self.triangles),
        ]
    }

    /// Statistics multiplied by their potential weights.
    pub fn covariates(&self) -> [T; NUM_PARAMS] {
        scale(self.raw())
    }

    pub fn potential(&self, theta: &ParamVector<T>) -> T {
        theta.dot(&self.covariates())
    }

    /// Adds (`on = true`) or removes the contribution of one dyad.
    pub fn apply(&mut self, d: &ChangeStats<T>, on: bool) {
        if on {
            self.edges += 1;
            self.same_type += d.same_type as u64;
            self.capital_gap = self.capital_gap + d.capital_gap;
            self.age_gap = self.age_gap + d.age_gap;
            self.same_state += d.same_state as u64;
            self.two_stars += d.two_stars;
            self.triangles += d.triangles;
        } else {
            self.edges -= 1;
            self.same_type -= d.same_type as u64;
            self.capital_gap = self.capital_gap - d.capital_gap;
            self.age_gap = self.age_gap - d.age_gap;
            self.same_state -= d.same_state as u64;
            self.two_stars -= d.two_stars;
            self.triangles -= d.triangles;
        }
    }
}

fn scale<T: Scalar>(raw: [T; NUM_PARAMS]) -> [T; NUM_PARAMS] {
    let mut out = raw;
    for (v, s) in out.iter_mut().zip(POTENTIAL_SCALE) {
        *v = *v * T::of(s);
    }
    out
}

/// Change in each statistic from switching dyad `ij` on, evaluated with `g_ij = 0`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ChangeStats<T> {
    pub same_type: bool,
    pub capital_gap: T,
    pub age_gap: T,
    pub same_state: bool,
    /// `deg(i) + deg(j)` without the dyad itself.
    pub two_stars: u64,
    /// Common partners of `i` and `j`.
    pub triangles: u64,
}

impl<T: Scalar> ChangeStats<T> {
    pub fn raw(&self) -> [T; NUM_PARAMS] {
        [
            T::one(),
            if self.same_type { T::one() } else { T::zero() },
            self.capital_gap,
            self.age_gap,
            if self.same_state { T::one() } else { T::zero() },
            T::count(self.two_stars),
            T::count(self.triangles),
        ]
    }

    /// Change statistics times potential weights; the logit covariates of the dyad.
    pub fn covariates(&self) -> [T; NUM_PARAMS] {
        scale(self.raw())
    }

    pub fn delta_potential(&self, theta: &ParamVector<T>) -> T {
        theta.dot(&self.covariates())
    }
}

fn check_dims<T: Scalar>(g: &Network, x: &FirmTable<T>) -> Result<()> {
    if g.n() != x.len() {
        return Err(Error::DimensionMismatch { network: g.n(), firms: x.len() });
    }
    Ok(())
}

fn check_pair(i: usize, j: usize) -> Result<()> {
    if i == j {
        Err(Error::SameNode(i))
    } else {
        Ok(())
    }
}

/// Change statistics without argument checks; used inside the samplers.
#[inline]
pub fn dyad_change<T: Scalar>(g: &Network, x: &FirmTable<T>, i: usize, j: usize) -> ChangeStats<T> {
    let linked = g.has_edge(i, j) as u64;
    ChangeStats {
        same_type: x.same_type(i, j),
        capital_gap: x.capital_gap(i, j),
        age_gap: x.age_gap(i, j),
        same_state: x.same_state(i, j),
        two_stars: (g.degree(i) + g.degree(j)) as u64 - 2 * linked,
        triangles: g.common_neighbors(i, j) as u64,
    }
}

pub fn change_stats<T: Scalar>(g: &Network, x: &FirmTable<T>, i: usize, j: usize) -> Result<ChangeStats<T>> {
    check_dims(g, x)?;
    check_pair(i, j)?;
    Ok(dyad_change(g, x, i, j))
}

pub fn suff_stats<T: Scalar>(g: &Network, x: &FirmTable<T>) -> Result<StatVector<T>> {
    check_dims(g, x)?;
    let mut s = StatVector::default();
    for (i, j) in g.edges() {
        s.edges += 1;
        s.same_type += x.same_type(i, j) as u64;
        s.capital_gap = s.capital_gap + x.capital_gap(i, j);
        s.age_gap = s.age_gap + x.age_gap(i, j);
        s.same_state += x.same_state(i, j) as u64;
    }
    s.two_stars = two_stars(g);
    s.triangles = triangles(g);
    Ok(s)
}

/// `Σ_j C(d_j, 2)`.
pub fn two_stars(g: &Network) -> u64 {
    (0..g.n()).map(|i| g.degree(i) as u64).map(|d| d * d.saturating_sub(1) / 2).sum()
}

/// Unordered triangles, counted once each via ordered neighbor intersection.
pub fn triangles(g: &Network) -> u64 {
    let mut t = 0u64;
    for (i, j) in g.edges() {
        let (a, b) = (g.neighbors(i), g.neighbors(j));
        let (mut p, mut q) = (a.partition_point(|&k| k as usize <= j), b.partition_point(|&k| k as usize <= j));
        while p < a.len() && q < b.len() {
            match a[p].cmp(&b[q]) {
                std::cmp::Ordering::Less => p += 1,
                std::cmp::Ordering::Greater => q += 1,
                std::cmp::Ordering::Equal => {
                    t += 1;
                    p += 1;
                    q += 1;
                }
            }
        }
    }
    t
}

pub fn potential<T: Scalar>(s: &StatVector<T>, theta: &ParamVector<T>) -> T {
    s.potential(theta)
}

/// `MP_ij + MP_ji`, the change in potential from link `ij`.
pub fn joint_surplus<T: Scalar>(g: &Network, x: &FirmTable<T>, theta: &ParamVector<T>, i: usize, j: usize) -> Result<T> {
    Ok(change_stats(g, x, i, j)?.delta_potential(theta))
}

/// Probability that `i` and `j` are linked after they meet.
pub fn link_probability<T: Scalar>(
    g: &Network,
    x: &FirmTable<T>,
    theta: &ParamVector<T>,
    i: usize,
    j: usize,
) -> Result<T> {
    Ok(logistic(joint_surplus(g, x, theta, i, j)?))
}

/// `MP_ij`: the gain to `i` from a link with `j`, the rest of the network fixed.
pub fn marginal_payoff<T: Scalar>(
    g: &Network,
    x: &FirmTable<T>,
    theta: &ParamVector<T>,
    i: usize,
    j: usize,
) -> Result<T> {
    let d = change_stats(g, x, i, j)?;
    let pop_j = T::count((g.degree(j) - g.has_edge(i, j) as usize) as u64);
    let r = d.raw();
    let two = T::of(2.0);
    Ok(theta.alpha0()
        + theta.alpha1() * r[1]
        + theta.alpha2() * r[2]
        + theta.alpha3() * r[3]
        + theta.alpha4() * r[4]
        + theta.beta() * pop_j
        + two * theta.gamma() * r[6])
}

/// Direct link payoff `u(x_i, x_j; alpha)`.
pub fn link_value<T: Scalar>(x: &FirmTable<T>, theta: &ParamVector<T>, i: usize, j: usize) -> T {
    let ind = |b: bool| if b { T::one() } else { T::zero() };
    theta.alpha0()
        + theta.alpha1() * ind(x.same_type(i, j))
        + theta.alpha2() * x.capital_gap(i, j)
        + theta.alpha3() * x.age_gap(i, j)
        + theta.alpha4() * ind(x.same_state(i, j))
}

/// Payoff of firm `i`: each partner `j` yields its link value, `beta` per other
/// partner of `j`, and `gamma` per partner shared with `j`.
pub fn firm_payoff<T: Scalar>(g: &Network, x: &FirmTable<T>, theta: &ParamVector<T>, i: usize) -> T {
    g.neighbors(i)
        .iter()
        .map(|&j| {
            let j = j as usize;
            link_value(x, theta, i, j)
                + theta.beta() * T::count(g.degree(j) as u64 - 1)
                + theta.gamma() * T::count(g.common_neighbors(i, j) as u64)
        })
        .sum()
}

/// Sum of all firms' payoffs, `2 Σ_edges u + 2 b S2 + 6 c T`.
pub fn welfare<T: Scalar>(g: &Network, x: &FirmTable<T>, theta: &ParamVector<T>) -> Result<T> {
    let s = suff_stats(g, x)?;
    let r = s.raw();
    let two = T::of(2.0);
    let edge_part: T = (0..5).map(|k| theta[k] * r[k]).sum();
    Ok(two * edge_part + two * theta.beta() * r[5] + T::of(6.0) * theta.gamma() * r[6])
}
