use std::fmt::Write as _;

use rand::Rng;

use super::meeting::MeetingProcess;
use crate::error::{Error, Result};
use crate::firms::FirmTable;
use crate::network::Network;
use crate::params::ParamVector;
use crate::scalar::{logistic, Scalar};
use crate::stats::{dyad_change, suff_stats, StatVector};

/// Probability of proposing the complement network in the Metropolis kernel.
pub const DEFAULT_SWAP_PROB: f64 = 0.001;

/// Rule-of-thumb chain length `ceil(n^2 ln n)`, at least 1.
pub fn default_steps(n: usize) -> u64 {
    let n = n as f64;
    (n * n * n.ln()).ceil().max(1.0) as u64
}

/// Network transition kernel with `exp Q` as stationary law.
#[derive(Clone, Debug)]
pub enum Kernel {
    /// The formation game: a meeting pair redraws its link from the logit conditional.
    Gibbs(MeetingProcess),
    /// Single-dyad toggle proposals, plus complement proposals with probability `swap_prob`.
    Metropolis { swap_prob: f64 },
}

impl Default for Kernel {
    fn default() -> Self {
        Kernel::Metropolis { swap_prob: DEFAULT_SWAP_PROB }
    }
}

/// Dyad totals over all pairs, used to price the complement proposal.
#[derive(Clone, Copy, Debug)]
struct DyadTotals<T> {
    same_type: u64,
    capital_gap: T,
    age_gap: T,
    same_state: u64,
}

/// A network with incrementally maintained sufficient statistics.
#[derive(Clone, Debug)]
pub struct SimState<'a, T> {
    g: Network,
    x: &'a FirmTable<T>,
    stats: StatVector<T>,
    totals: Option<DyadTotals<T>>,
}

impl<'a, T: Scalar> SimState<'a, T> {
    pub fn new(g: Network, x: &'a FirmTable<T>) -> Result<Self> {
        let stats = suff_stats(&g, x)?;
        if g.n() < 2 {
            return Err(Error::Config("simulation needs at least two firms".into()));
        }
        Ok(SimState { g, x, stats, totals: None })
    }

    pub fn network(&self) -> &Network {
        &self.g
    }

    pub fn into_network(self) -> Network {
        self.g
    }

    pub fn stats(&self) -> &StatVector<T> {
        &self.stats
    }

    pub fn potential(&self, theta: &ParamVector<T>) -> T {
        self.stats.potential(theta)
    }

    fn set_dyad(&mut self, i: usize, j: usize, on: bool) {
        if self.g.has_edge(i, j) != on {
            let d = dyad_change(&self.g, self.x, i, j);
            self.g.set(i, j, on);
            self.stats.apply(&d, on);
        }
    }

    /// One period of the formation game. Returns whether the network changed.
    pub fn game_step<R: Rng + ?Sized>(&mut self, theta: &ParamVector<T>, meeting: &MeetingProcess, rng: &mut R) -> bool {
        let (i, j) = meeting.draw(self.g.n(), rng);
        let d = dyad_change(&self.g, self.x, i, j);
        let p = logistic(d.delta_potential(theta));
        let on = rng.random::<f64>() < p.as_f64();
        if self.g.has_edge(i, j) == on {
            return false;
        }
        self.g.set(i, j, on);
        self.stats.apply(&d, on);
        true
    }

    /// One Metropolis-Hastings step. Returns whether the proposal was accepted.
    pub fn mh_step<R: Rng + ?Sized>(&mut self, theta: &ParamVector<T>, swap_prob: f64, rng: &mut R) -> bool {
        if swap_prob > 0.0 && rng.random::<f64>() < swap_prob {
            let flipped = self.complement_stats();
            let dq = flipped.potential(theta) - self.stats.potential(theta);
            if accept(dq, rng) {
                self.g = self.g.complement();
                self.stats = flipped;
                return true;
            }
            return false;
        }
        let (i, j) = MeetingProcess::Uniform.draw(self.g.n(), rng);
        let d = dyad_change(&self.g, self.x, i, j);
        let on = !self.g.has_edge(i, j);
        let dq = d.delta_potential(theta);
        if accept(if on { dq } else { -dq }, rng) {
            self.g.set(i, j, on);
            self.stats.apply(&d, on);
            true
        } else {
            false
        }
    }

    pub fn step<R: Rng + ?Sized>(&mut self, theta: &ParamVector<T>, kernel: &Kernel, rng: &mut R) -> bool {
        match kernel {
            Kernel::Gibbs(m) => self.game_step(theta, m, rng),
            Kernel::Metropolis { swap_prob } => self.mh_step(theta, *swap_prob, rng),
        }
    }

    pub fn run<R: Rng + ?Sized>(&mut self, theta: &ParamVector<T>, kernel: &Kernel, steps: u64, rng: &mut R) {
        for _ in 0..steps {
            self.step(theta, kernel, rng);
        }
    }

    /// Statistics of the complement network in O(n) after a one-off O(n^2) pass.
    pub fn complement_stats(&mut self) -> StatVector<T> {
        let totals = *self.totals.get_or_insert_with(|| dyad_totals(self.x));
        let n = self.g.n() as u64;
        let degrees = self.g.degrees();
        let two_stars = degrees
            .iter()
            .map(|&d| {
                let c = n - 1 - d as u64;
                c * c.saturating_sub(1) / 2
            })
            .sum();
        // Goodman: T(g) + T(complement) = C(n,3) - (1/2) Σ d (n-1-d)
        let mixed: u64 = degrees.iter().map(|&d| d as u64 * (n - 1 - d as u64)).sum();
        let triples = n * n.saturating_sub(1) * n.saturating_sub(2) / 6;
        let s = &self.stats;
        StatVector {
            edges: n * (n - 1) / 2 - s.edges,
            same_type: totals.same_type - s.same_type,
            capital_gap: totals.capital_gap - s.capital_gap,
            age_gap: totals.age_gap - s.age_gap,
            same_state: totals.same_state - s.same_state,
            two_stars,
            triangles: triples - mixed / 2 - s.triangles,
        }
    }

    /// Resets the network to `g`, recomputing statistics.
    pub fn reset(&mut self, g: &Network) {
        self.g.clone_from(g);
        self.stats = suff_stats(&self.g, self.x).expect("same firm table");
    }

    /// Resets to a network whose statistics are already known.
    pub fn restore(&mut self, g: &Network, stats: &StatVector<T>) {
        self.g.clone_from(g);
        self.stats = *stats;
    }

    pub fn force(&mut self, i: usize, j: usize, on: bool) {
        self.set_dyad(i, j, on);
    }
}

fn dyad_totals<T: Scalar>(x: &FirmTable<T>) -> DyadTotals<T> {
    let mut t = DyadTotals { same_type: 0, capital_gap: T::zero(), age_gap: T::zero(), same_state: 0 };
    for (i, j) in crate::network::dyads(x.len()) {
        t.same_type += x.same_type(i, j) as u64;
        t.capital_gap = t.capital_gap + x.capital_gap(i, j);
        t.age_gap = t.age_gap + x.age_gap(i, j);
        t.same_state += x.same_state(i, j) as u64;
    }
    t
}

#[inline]
fn accept<T: Scalar, R: Rng + ?Sized>(log_ratio: T, rng: &mut R) -> bool {
    let r = log_ratio.as_f64();
    r >= 0.0 || rng.random::<f64>() < r.exp()
}

/// One period of the formation game on `g`.
pub fn game_step<T: Scalar, R: Rng + ?Sized>(
    g: Network,
    x: &FirmTable<T>,
    theta: &ParamVector<T>,
    meeting: &MeetingProcess,
    rng: &mut R,
) -> Result<Network> {
    let mut s = SimState::new(g, x)?;
    s.game_step(theta, meeting, rng);
    Ok(s.into_network())
}

/// One Metropolis-Hastings step on `g`.
pub fn mh_step<T: Scalar, R: Rng + ?Sized>(
    g: Network,
    x: &FirmTable<T>,
    theta: &ParamVector<T>,
    swap_prob: f64,
    rng: &mut R,
) -> Result<Network> {
    if !(0.0..1.0).contains(&swap_prob) {
        return Err(Error::Config(format!("swap probability must be in [0, 1), got {swap_prob}")));
    }
    let mut s = SimState::new(g, x)?;
    s.mh_step(theta, swap_prob, rng);
    Ok(s.into_network())
}

#[derive(Clone, Debug, PartialEq)]
pub struct TraceRow<T> {
    pub step: u64,
    pub stats: StatVector<T>,
}

/// Statistic snapshots at multiples of `stride`, plus the final state.
#[derive(Clone, Debug)]
pub struct ChainTrace<T> {
    pub stride: u64,
    pub rows: Vec<TraceRow<T>>,
    pub final_stats: StatVector<T>,
    pub final_network: Network,
}

impl<T: Scalar> ChainTrace<T> {
    /// `step,E,sametype,capdiff,agediff,samestate,twostars,triangles`
    pub fn to_csv(&self) -> String {
        let mut out = String::from("step,E,sametype,capdiff,agediff,samestate,twostars,triangles\n");
        for r in &self.rows {
            let s = &r.stats;
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{},{}",
                r.step, s.edges, s.same_type, s.capital_gap, s.age_gap, s.same_state, s.two_stars, s.triangles
            );
        }
        out
    }
}

/// Runs the formation game for `steps` periods from `g0`.
pub fn simulate<T: Scalar, R: Rng + ?Sized>(
    g0: Network,
    x: &FirmTable<T>,
    theta: &ParamVector<T>,
    steps: u64,
    meeting: &MeetingProcess,
    rng: &mut R,
    stride: u64,
) -> Result<ChainTrace<T>> {
    simulate_with(g0, x, theta, steps, &Kernel::Gibbs(meeting.clone()), rng, stride)
}

/// Like [`simulate`] with an arbitrary kernel.
pub fn simulate_with<T: Scalar, R: Rng + ?Sized>(
    g0: Network,
    x: &FirmTable<T>,
    theta: &ParamVector<T>,
    steps: u64,
    kernel: &Kernel,
    rng: &mut R,
    stride: u64,
) -> Result<ChainTrace<T>> {
    if steps == 0 {
        return Err(Error::Config("steps must be at least 1".into()));
    }
    if stride == 0 {
        return Err(Error::Config("stride must be at least 1".into()));
    }
    if !theta.is_finite() {
        return Err(Error::NonFinitePotential(theta.to_string()));
    }
    let mut s = SimState::new(g0, x)?;
    let mut rows = vec![TraceRow { step: 0, stats: *s.stats() }];
    for step in 1..=steps {
        s.step(theta, kernel, rng);
        if step % stride == 0 {
            rows.push(TraceRow { step, stats: *s.stats() });
        }
    }
    Ok(ChainTrace { stride, rows, final_stats: *s.stats(), final_network: s.into_network() })
}
