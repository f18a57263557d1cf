//! Brownian sample paths as piecewise-linear interpolants.

use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::path::{CadlagPath, Mode};
use crate::point::Point;

/// Linear path through Gaussian increments with variance `step` per
/// coordinate, starting at the origin.
pub fn brownian_path(
    horizon: f64,
    step: f64,
    dim: usize,
    rng: &mut impl Rng,
) -> Result<CadlagPath> {
    if !(step > 0.0 && step.is_finite()) {
        return Err(Error::BadStep(step));
    }
    if !(horizon > 0.0 && horizon.is_finite()) {
        return Err(Error::ConfigInvalid("horizon must be positive".into()));
    }
    if dim != 1 && dim != 2 {
        return Err(Error::DimMismatch(1, dim));
    }
    let mut times = vec![0.0];
    let mut values = vec![Point::zero(dim)];
    let mut t = 0.0f64;
    let mut cur = Point::zero(dim);
    while t < horizon {
        let h = step.min(horizon - t);
        t = (t + step).min(horizon);
        let sd = h.sqrt();
        let dx: f64 = rng.sample::<f64, _>(StandardNormal) * sd;
        cur = if dim == 1 {
            cur + Point::scalar(dx)
        } else {
            let dy: f64 = rng.sample::<f64, _>(StandardNormal) * sd;
            cur + Point::planar(dx, dy)
        };
        times.push(t);
        values.push(cur);
    }
    CadlagPath::new(&times, &values, Mode::Linear, horizon)
}
