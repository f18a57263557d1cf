//! Empirical distributions and Kolmogorov-Smirnov distances.

use crate::error::{Error, Result};
use crate::quad::Kahan;

/// A sorted sample supporting exact KS comparisons and quantiles.
#[derive(Clone, Debug)]
pub struct EmpiricalDistribution {
    sorted: Vec<f64>,
}

impl EmpiricalDistribution {
    pub fn from_samples(mut samples: Vec<f64>) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::EmptySample);
        }
        if let Some(i) = samples.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFiniteValue(i));
        }
        samples.sort_by(f64::total_cmp);
        Ok(Self { sorted: samples })
    }

    pub fn len(&self) -> usize {
        self.sorted.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn sorted(&self) -> &[f64] {
        &self.sorted
    }

    pub fn mean(&self) -> f64 {
        let mut acc = Kahan::new();
        for &v in &self.sorted {
            acc.add(v);
        }
        acc.sum() / self.len() as f64
    }

    /// Nearest-rank quantile; `q` is clamped to [0, 1].
    pub fn quantile(&self, q: f64) -> f64 {
        let n = self.len();
        if q <= 0.0 {
            return self.sorted[0];
        }
        if q >= 1.0 {
            return self.sorted[n - 1];
        }
        let rank = (q * n as f64).ceil() as usize;
        self.sorted[rank.clamp(1, n) - 1]
    }

    /// Distribution-free standard error of the `q`-quantile estimate: the
    /// order statistics at ranks `nq +- 1.96 sqrt(n q (1-q))` bracket a 95%
    /// interval, whose half-width over 1.96 plays the role of an SE.
    pub fn quantile_se(&self, q: f64) -> f64 {
        let n = self.len();
        if n < 2 {
            return 0.0;
        }
        let q = q.clamp(0.0, 1.0);
        let spread = 1.96 * (n as f64 * q * (1.0 - q)).sqrt();
        let center = q * n as f64;
        let lo = ((center - spread).floor().max(1.0) as usize).min(n) - 1;
        let hi = ((center + spread).ceil().max(1.0) as usize).min(n) - 1;
        (self.sorted[hi] - self.sorted[lo]) / (2.0 * 1.96)
    }

    /// Exact two-sample KS distance by merge scan.
    pub fn ks_distance(&self, other: &EmpiricalDistribution) -> f64 {
        let a = &self.sorted;
        let b = &other.sorted;
        let (n, m) = (a.len() as f64, b.len() as f64);
        let (mut i, mut j) = (0usize, 0usize);
        let mut d = 0.0f64;
        while i < a.len() && j < b.len() {
            let t = a[i].min(b[j]);
            while i < a.len() && a[i] == t {
                i += 1;
            }
            while j < b.len() && b[j] == t {
                j += 1;
            }
            d = d.max((i as f64 / n - j as f64 / m).abs());
        }
        d
    }

    /// Exact one-sample KS distance to a cdf: the empirical cdf jumps at each
    /// sample, so both one-sided gaps must be checked there.
    pub fn ks_to_cdf(&self, cdf: impl Fn(f64) -> f64) -> f64 {
        let n = self.len() as f64;
        let mut d = 0.0f64;
        for (i, &x) in self.sorted.iter().enumerate() {
            let f = cdf(x);
            d = d.max(((i + 1) as f64 / n - f).abs());
            d = d.max((i as f64 / n - f).abs());
        }
        d
    }
}

/// Sample mean and its Monte Carlo standard error.
pub fn mean_and_se(samples: &[f64]) -> Result<(f64, f64)> {
    if samples.is_empty() {
        return Err(Error::EmptySample);
    }
    let n = samples.len() as f64;
    let mut acc = Kahan::new();
    for &v in samples {
        acc.add(v);
    }
    let mean = acc.sum() / n;
    if samples.len() == 1 {
        return Ok((mean, 0.0));
    }
    let mut sq = Kahan::new();
    for &v in samples {
        sq.add((v - mean) * (v - mean));
    }
    let var = sq.sum() / (n - 1.0);
    Ok((mean, (var / n).sqrt()))
}

pub fn normal_cdf(x: f64, mean: f64, sd: f64) -> f64 {
    0.5 * (1.0 + statrs::function::erf::erf((x - mean) / (sd * std::f64::consts::SQRT_2)))
}

pub fn exponential_cdf(x: f64, mean: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        1.0 - (-x / mean).exp()
    }
}
