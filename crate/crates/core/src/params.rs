use std::fmt;
use std::ops::{Index, IndexMut};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

pub const NUM_PARAMS: usize = 7;

/// Parameter names in vector order.
pub const PARAM_NAMES: [&str; NUM_PARAMS] = ["alpha0", "alpha1", "alpha2", "alpha3", "alpha4", "beta", "gamma"];

/// Payoff parameters `(alpha0, .., alpha4, beta, gamma)`:
/// link cost, same type, absolute log-capital gap, absolute age gap,
/// same state, partner popularity, common partners.
#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub struct ParamVector<T>(pub [T; NUM_PARAMS]);

impl<T: Scalar> ParamVector<T> {
    pub fn new(alpha0: T, alpha1: T, alpha2: T, alpha3: T, alpha4: T, beta: T, gamma: T) -> Self {
        ParamVector([alpha0, alpha1, alpha2, alpha3, alpha4, beta, gamma])
    }

    pub fn zero() -> Self {
        ParamVector([T::zero(); NUM_PARAMS])
    }

    /// Only the link cost set, everything else zero.
    pub fn cost_only(alpha0: T) -> Self {
        let mut p = Self::zero();
        p.0[0] = alpha0;
        p
    }

    pub fn from_f64(v: [f64; NUM_PARAMS]) -> Self {
        ParamVector(v.map(T::of))
    }

    pub fn from_slice(v: &[T]) -> Result<Self> {
        let arr: [T; NUM_PARAMS] = v
            .try_into()
            .map_err(|_| Error::Config(format!("parameter vector needs {NUM_PARAMS} entries, got {}", v.len())))?;
        Ok(ParamVector(arr))
    }

    pub fn to_f64(&self) -> [f64; NUM_PARAMS] {
        self.0.map(Scalar::as_f64)
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|v| v.is_finite())
    }

    pub fn alpha0(&self) -> T {
        self.0[0]
    }
    pub fn alpha1(&self) -> T {
        self.0[1]
    }
    pub fn alpha2(&self) -> T {
        self.0[2]
    }
    pub fn alpha3(&self) -> T {
        self.0[3]
    }
    pub fn alpha4(&self) -> T {
        self.0[4]
    }
    pub fn beta(&self) -> T {
        self.0[5]
    }
    pub fn gamma(&self) -> T {
        self.0[6]
    }

    pub fn dot(&self, v: &[T; NUM_PARAMS]) -> T {
        self.0.iter().zip(v).fold(T::zero(), |acc, (a, b)| acc + *a * *b)
    }
}

impl<T> Index<usize> for ParamVector<T> {
    type Output = T;
    fn index(&self, k: usize) -> &T {
        &self.0[k]
    }
}

impl<T> IndexMut<usize> for ParamVector<T> {
    fn index_mut(&mut self, k: usize) -> &mut T {
        &mut self.0[k]
    }
}

impl<T: Scalar> fmt::Display for ParamVector<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|v| v.to_string()).collect();
        write!(f, "{}", parts.join(","))
    }
}

/// Which parameters a model estimates. Fixed entries stay at their start value.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ParamMask(pub [bool; NUM_PARAMS]);

impl ParamMask {
    /// All seven parameters.
    pub const FULL: ParamMask = ParamMask([true; NUM_PARAMS]);
    /// Dyadic-independence model: popularity and common-partner terms fixed at zero.
    pub const EXOGENOUS: ParamMask = ParamMask([true, true, true, true, true, false, false]);

    pub fn free_indices(&self) -> Vec<usize> {
        (0..NUM_PARAMS).filter(|&k| self.0[k]).collect()
    }

    pub fn is_free(&self, k: usize) -> bool {
        self.0[k]
    }

    pub fn count(&self) -> usize {
        self.0.iter().filter(|&&b| b).count()
    }
}

impl Default for ParamMask {
    fn default() -> Self {
        ParamMask::FULL
    }
}
