//! Renewal counting processes.

use rand::Rng;

use crate::error::{Error, Result};
use crate::path::MonotonePath;
use crate::sim::InterarrivalDist;

/// Counting path `N_t = #{k : S_k <= t}` with unit jumps at the partial sums
/// of interarrival draws.
pub fn renewal_path(
    dist: &InterarrivalDist,
    horizon: f64,
    rng: &mut impl Rng,
) -> Result<MonotonePath> {
    scaled_renewal_path(dist, horizon, 1.0, 1.0, rng)
}

/// The rescaled counting path `t -> N_{clock * t} / mass` on
/// `[0, horizon / clock]`, built in one pass so large scenarios do not
/// allocate twice. Jump times that collide after division by `clock` merge
/// into one larger jump.
pub fn scaled_renewal_path(
    dist: &InterarrivalDist,
    horizon: f64,
    clock: f64,
    mass: f64,
    rng: &mut impl Rng,
) -> Result<MonotonePath> {
    dist.validate()?;
    if !(horizon > 0.0 && horizon.is_finite()) || !(clock > 0.0) || !(mass > 0.0) {
        return Err(Error::ConfigInvalid(
            "renewal horizon, clock, and mass must be positive".into(),
        ));
    }
    let mut times = vec![0.0];
    let mut values = vec![0.0];
    let mut s = 0.0f64;
    let mut k = 0.0f64;
    loop {
        s += dist.sample(rng);
        if s > horizon {
            break;
        }
        k += 1.0;
        let t = s / clock;
        if t <= *times.last().unwrap() {
            *values.last_mut().unwrap() = k / mass;
        } else {
            times.push(t);
            values.push(k / mass);
        }
    }
    MonotonePath::step(&times, &values, horizon / clock)
}
