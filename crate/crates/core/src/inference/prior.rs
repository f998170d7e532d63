use crate::error::{Error, Result};
use crate::params::{ParamMask, ParamVector, NUM_PARAMS};
use crate::scalar::Scalar;

/// Independent normal prior on each parameter.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Prior<T> {
    pub mean: [T; NUM_PARAMS],
    pub sd: [T; NUM_PARAMS],
}

impl<T: Scalar> Default for Prior<T> {
    /// Normal(0, 10^2) for every parameter.
    fn default() -> Self {
        Prior { mean: [T::zero(); NUM_PARAMS], sd: [T::of(10.0); NUM_PARAMS] }
    }
}

impl<T: Scalar> Prior<T> {
    pub fn new(mean: [T; NUM_PARAMS], sd: [T; NUM_PARAMS]) -> Result<Self> {
        let p = Prior { mean, sd };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if self.sd.iter().any(|s| !(*s > T::zero()) || !s.is_finite()) || self.mean.iter().any(|m| !m.is_finite()) {
            return Err(Error::Config("prior standard deviations must be positive and finite".into()));
        }
        Ok(())
    }

    /// Log density up to a constant, over the free parameters only.
    pub fn log_density(&self, theta: &ParamVector<T>, mask: &ParamMask) -> T {
        let half = T::of(0.5);
        (0..NUM_PARAMS)
            .filter(|&k| mask.is_free(k))
            .map(|k| {
                let z = (theta[k] - self.mean[k]) / self.sd[k];
                -half * z * z
            })
            .sum()
    }
}
