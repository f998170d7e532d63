//! Synthetic firm populations and networks for tests, benchmarks and demos.

use rand::Rng;
use rand_distr::{Distribution, Exp, Normal};

use crate::firms::{Firm, FirmTable, FirmType};
use crate::network::{dyads, Network};
use crate::params::{ParamVector, NUM_PARAMS};
use crate::scalar::Scalar;

/// States and relative frequencies loosely shaped like a venture-capital market.
pub const STATES: [(&str, f64); 10] = [
    ("CA", 0.30),
    ("MA", 0.14),
    ("NY", 0.14),
    ("TX", 0.06),
    ("IL", 0.05),
    ("CT", 0.05),
    ("PA", 0.05),
    ("WA", 0.04),
    ("CO", 0.04),
    ("NJ", 0.13),
];

fn pick<'a, R: Rng + ?Sized, V>(rng: &mut R, items: &'a [(V, f64)]) -> &'a V {
    let total: f64 = items.iter().map(|(_, w)| w).sum();
    let mut u = rng.random::<f64>() * total;
    for (v, w) in items {
        if u < *w {
            return v;
        }
        u -= w;
    }
    &items[items.len() - 1].0
}

/// `n` firms with ids `f0000..`, every firm type represented when `n >= 14`,
/// log capital ~ Normal(4, 1.5) and age ~ 1 + Exp(mean 12).
pub fn firms<T: Scalar, R: Rng + ?Sized>(n: usize, rng: &mut R) -> FirmTable<T> {
    let cap = Normal::new(4.0, 1.5).expect("valid normal");
    let age = Exp::new(1.0 / 12.0).expect("valid exponential");
    let weights: Vec<(FirmType, f64)> = FirmType::ALL
        .iter()
        .map(|&t| (t, if t == FirmType::PrivateEquity { 10.0 } else { 1.0 }))
        .collect();
    let firms = (0..n).map(|k| {
        let firm_type = if k < FirmType::ALL.len() { FirmType::ALL[k] } else { *pick(rng, &weights) };
        Firm {
            id: format!("f{k:04}"),
            firm_type,
            state: pick(rng, &STATES).to_string(),
            log_capital: T::of(cap.sample(rng)),
            age: T::of(1.0 + age.sample(rng)),
        }
    });
    FirmTable::new(firms.collect::<Vec<_>>()).expect("generated ids are unique")
}

/// Bernoulli(`p`) random graph.
pub fn random_network<R: Rng + ?Sized>(n: usize, p: f64, rng: &mut R) -> Network {
    let mut g = Network::empty(n);
    for (i, j) in dyads(n) {
        if rng.random_bool(p) {
            g.set(i, j, true);
        }
    }
    g
}

/// Parameters with independent Uniform(-scale, scale) entries.
pub fn random_params<T: Scalar, R: Rng + ?Sized>(rng: &mut R, scale: f64) -> ParamVector<T> {
    let mut v = [0.0; NUM_PARAMS];
    for x in v.iter_mut() {
        *x = rng.random_range(-scale..scale);
    }
    ParamVector::from_f64(v)
}
