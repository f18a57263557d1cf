//! Interarrival laws for renewal counting processes.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Positive interarrival distributions. The Pareto variant has unit scale,
/// tail `P(tau > x) = x^{-alpha}` for `x >= 1`, so the tail constant in the
/// stable normalization is exactly 1 and no extra factor appears downstream.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum InterarrivalDist {
    Exponential { rate: f64 },
    Deterministic { value: f64 },
    Pareto { alpha: f64 },
}

impl InterarrivalDist {
    pub fn validate(&self) -> Result<()> {
        let ok = match *self {
            InterarrivalDist::Exponential { rate } => rate > 0.0 && rate.is_finite(),
            InterarrivalDist::Deterministic { value } => value > 0.0 && value.is_finite(),
            InterarrivalDist::Pareto { alpha } => alpha > 0.0 && alpha.is_finite(),
        };
        if ok {
            Ok(())
        } else {
            Err(Error::ConfigInvalid(format!(
                "interarrival parameters must be strictly positive: {self:?}"
            )))
        }
    }

    pub fn sample(&self, rng: &mut impl Rng) -> f64 {
        match *self {
            InterarrivalDist::Exponential { rate } => {
                // Inverse cdf on (0, 1]; 1 - gen() avoids ln(0).
                -(1.0 - rng.gen::<f64>()).ln() / rate
            }
            InterarrivalDist::Deterministic { value } => value,
            InterarrivalDist::Pareto { alpha } => (1.0 - rng.gen::<f64>()).powf(-1.0 / alpha),
        }
    }

    /// Mean interarrival time, `None` when infinite.
    pub fn mean(&self) -> Option<f64> {
        match *self {
            InterarrivalDist::Exponential { rate } => Some(1.0 / rate),
            InterarrivalDist::Deterministic { value } => Some(value),
            InterarrivalDist::Pareto { alpha } => {
                (alpha > 1.0).then(|| alpha / (alpha - 1.0))
            }
        }
    }

    /// Interarrival variance, `None` when infinite.
    pub fn variance(&self) -> Option<f64> {
        match *self {
            InterarrivalDist::Exponential { rate } => Some(1.0 / (rate * rate)),
            InterarrivalDist::Deterministic { .. } => Some(0.0),
            InterarrivalDist::Pareto { alpha } => (alpha > 2.0)
                .then(|| alpha / ((alpha - 1.0) * (alpha - 1.0) * (alpha - 2.0))),
        }
    }
}
