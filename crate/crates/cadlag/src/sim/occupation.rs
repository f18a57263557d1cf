//! Centered radial potentials on the plane, planar-Brownian occupation
//! functionals, and the two independent quadrature routes to the energy
//! constant.
//!
//! For a radial profile v with zero radial mean, `g(r) = int_r^inf s v(s) ds`
//! gives the gradient magnitude `|grad F(x)| = (2/|x|) |g(|x|)|`. The energy
//! constant can be computed either from g (GRADIENT) or directly from the
//! log-kernel double integral over v (LOGKERNEL); the two routes share no
//! code beyond the profile itself, which is what makes their agreement a
//! meaningful check.

use std::f64::consts::PI;
use std::sync::Arc;

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::path::MonotonePath;
use crate::quad::{adaptive, gauss8};

const CENTERING_TOL: f64 = 1e-8;
const G_CELLS: usize = 4096;

/// A centered radial potential with its tabulated tail integral g.
#[derive(Clone)]
pub struct RadialPotential {
    v: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
    r_max: f64,
    dr: f64,
    g_tab: Vec<f64>,
    gp_tab: Vec<f64>,
}

impl std::fmt::Debug for RadialPotential {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("RadialPotential")
            .field("r_max", &self.r_max)
            .field("cells", &G_CELLS)
            .finish()
    }
}

impl RadialPotential {
    /// Builds the potential, verifying the centering condition
    /// `int_0^inf r v(r) dr = 0` and tabulating g by per-cell quadrature from
    /// the tail inward. `r_max` must cover the effective support of v.
    pub fn new(v: impl Fn(f64) -> f64 + Send + Sync + 'static, r_max: f64) -> Result<Self> {
        if !(r_max > 0.0 && r_max.is_finite()) {
            return Err(Error::ConfigInvalid("potential needs a positive radius cutoff".into()));
        }
        let v = Arc::new(v);
        let vf = v.clone();
        let centering = adaptive(&mut |r| r * vf(r), 0.0, r_max, 1e-12)?;
        if centering.abs() > CENTERING_TOL {
            return Err(Error::ConfigInvalid(format!(
                "potential is not centered: int r v(r) dr = {centering:e}"
            )));
        }
        let dr = r_max / G_CELLS as f64;
        let mut g_tab = vec![0.0f64; G_CELLS + 1];
        for i in (0..G_CELLS).rev() {
            let a = i as f64 * dr;
            let cell = gauss8(&mut |s| s * v(s), a, a + dr);
            g_tab[i] = g_tab[i + 1] + cell;
        }
        let gp_tab: Vec<f64> = (0..=G_CELLS)
            .map(|i| {
                let r = i as f64 * dr;
                -r * v(r)
            })
            .collect();
        Ok(RadialPotential { v, r_max, dr, g_tab, gp_tab })
    }

    pub fn builtin(name: &str) -> Result<Self> {
        match name {
            "gaussian-centered" => Self::new(|r| (1.0 - r * r) * (-r * r).exp(), 8.0),
            "narrow" => Self::new(|r| (1.0 - 2.0 * r * r) * (-2.0 * r * r).exp(), 6.0),
            "ring" => Self::new(|r| r * r * (2.0 - r * r) * (-r * r).exp(), 8.5),
            "zero" => Self::new(|_| 0.0, 4.0),
            other => Err(Error::ConfigInvalid(format!(
                "unknown builtin potential {other:?}; known: {:?}",
                Self::builtin_names()
            ))),
        }
    }

    pub fn builtin_names() -> [&'static str; 4] {
        ["gaussian-centered", "narrow", "ring", "zero"]
    }

    pub fn r_max(&self) -> f64 {
        self.r_max
    }

    pub fn v(&self, r: f64) -> f64 {
        (self.v)(r)
    }

    /// Tabulated `g(r) = int_r^inf s v(s) ds`, interpolated cubically with
    /// the exact derivative `g'(r) = -r v(r)` at the cell ends.
    pub fn g(&self, r: f64) -> f64 {
        if r >= self.r_max {
            return 0.0;
        }
        let r = r.max(0.0);
        let i = ((r / self.dr) as usize).min(G_CELLS - 1);
        let t = (r - i as f64 * self.dr) / self.dr;
        let (t2, t3) = (t * t, t * t * t);
        let h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
        let h10 = t3 - 2.0 * t2 + t;
        let h01 = -2.0 * t3 + 3.0 * t2;
        let h11 = t3 - t2;
        h00 * self.g_tab[i]
            + h10 * self.dr * self.gp_tab[i]
            + h01 * self.g_tab[i + 1]
            + h11 * self.dr * self.gp_tab[i + 1]
    }

    /// `|grad F|^2` at squared radius u: `4 g(r)^2 / r^2`. The origin is a
    /// removable zero because g(r) = O(r^2) for centered v.
    pub fn grad_f_sq(&self, u: f64) -> f64 {
        if u <= 1e-30 || u >= self.r_max * self.r_max {
            return 0.0;
        }
        let g = self.g(u.sqrt());
        4.0 * g * g / u
    }
}

/// `|grad F|^2` as a lookup table over squared radius, for the Euler hot loop.
pub struct OccupationIntegrand {
    du: f64,
    tab: Vec<f64>,
}

impl OccupationIntegrand {
    const CELLS: usize = 8192;

    pub fn new(p: &RadialPotential) -> Self {
        let u_max = p.r_max * p.r_max;
        let du = u_max / Self::CELLS as f64;
        let tab: Vec<f64> = (0..=Self::CELLS)
            .map(|j| p.grad_f_sq(j as f64 * du))
            .collect();
        OccupationIntegrand { du, tab }
    }

    #[inline]
    pub fn eval(&self, u: f64) -> f64 {
        let x = u / self.du;
        let j = x as usize;
        if j + 1 >= self.tab.len() {
            return 0.0;
        }
        let t = x - j as f64;
        self.tab[j] + t * (self.tab[j + 1] - self.tab[j])
    }
}

/// `A_n(t) = (log n)^{-1} int_0^{nt} |grad F(B_s)|^2 ds` along an Euler
/// planar-Brownian path, as a piecewise-linear nondecreasing path on
/// `[0, t_end]` with at most ~4096 emitted breakpoints.
pub fn occupation_path(
    n: usize,
    step: f64,
    t_end: f64,
    potential: &RadialPotential,
    rng: &mut impl Rng,
) -> Result<MonotonePath> {
    let (times, values) = occupation_trace(n, step, t_end, potential, rng, true)?;
    MonotonePath::linear(&times, &values, t_end)
}

/// Terminal occupation values `A_n(t)` at the requested ascending times,
/// without building a path.
pub fn occupation_values(
    n: usize,
    step: f64,
    at: &[f64],
    potential: &RadialPotential,
    rng: &mut impl Rng,
) -> Result<Vec<f64>> {
    if at.is_empty() || at.windows(2).any(|w| w[0] >= w[1]) || at[0] <= 0.0 {
        return Err(Error::ConfigInvalid(
            "snapshot times must be positive and strictly increasing".into(),
        ));
    }
    let t_end = *at.last().unwrap();
    let (times, values) = occupation_trace(n, step, t_end, potential, rng, false)?;
    let path = MonotonePath::linear(&times, &values, t_end)?;
    at.iter().map(|&t| path.eval1(t)).collect()
}

fn occupation_trace(
    n: usize,
    step: f64,
    t_end: f64,
    potential: &RadialPotential,
    rng: &mut impl Rng,
    dense: bool,
) -> Result<(Vec<f64>, Vec<f64>)> {
    if !(step > 0.0 && step.is_finite()) {
        return Err(Error::BadStep(step));
    }
    if n < 3 {
        return Err(Error::ConfigInvalid("occupation scaling needs n >= 3 (log n >= 1)".into()));
    }
    if !(t_end > 0.0 && t_end.is_finite()) {
        return Err(Error::ConfigInvalid("horizon must be positive".into()));
    }
    let integrand = OccupationIntegrand::new(potential);
    let log_n = (n as f64).ln();
    let total = n as f64 * t_end;
    let steps = (total / step).ceil() as u64;
    let stride = if dense { (steps / 4096).max(1) } else { (steps / 16384).max(1) };

    let mut times = Vec::with_capacity((steps / stride + 2) as usize);
    let mut values = Vec::with_capacity(times.capacity());
    times.push(0.0);
    values.push(0.0);

    let (mut x, mut y) = (0.0f64, 0.0f64);
    let mut acc = 0.0f64;
    let mut s = 0.0f64;
    let sd = step.sqrt();
    for k in 1..=steps {
        // Left Riemann point, then the Euler increment.
        let h = if k == steps { total - s } else { step };
        acc += h * integrand.eval(x * x + y * y);
        let hs = if k == steps { h.max(0.0).sqrt() } else { sd };
        let zx: f64 = rng.sample(StandardNormal);
        let zy: f64 = rng.sample(StandardNormal);
        x += hs * zx;
        y += hs * zy;
        s += h;
        if k % stride == 0 || k == steps {
            let t = if k == steps { t_end } else { s / n as f64 };
            if t > *times.last().unwrap() {
                times.push(t);
                values.push(acc / log_n);
            } else {
                *values.last_mut().unwrap() = acc / log_n;
            }
        }
    }
    Ok((times, values))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CvMethod {
    /// `8 pi int_0^inf g(r)^2 / r dr` using the tabulated g.
    Gradient,
    /// `-8 pi int int r a v(r) v(a) log max(r, a) dr da` touching only v.
    LogKernel,
}

/// The energy constant by either route, to absolute tolerance `tol`.
///
/// ```
/// use cadlag::{cv_quadrature, CvMethod, RadialPotential};
///
/// let v = RadialPotential::builtin("gaussian-centered").unwrap();
/// let grad = cv_quadrature(&v, CvMethod::Gradient, 1e-9).unwrap();
/// let log = cv_quadrature(&v, CvMethod::LogKernel, 1e-9).unwrap();
/// assert!((grad - std::f64::consts::PI / 4.0).abs() < 1e-7);
/// assert!((grad - log).abs() < 1e-7);
/// ```
pub fn cv_quadrature(potential: &RadialPotential, method: CvMethod, tol: f64) -> Result<f64> {
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(Error::ConfigInvalid("quadrature tolerance must be positive".into()));
    }
    let r_max = potential.r_max;
    match method {
        CvMethod::Gradient => {
            let mut f = |r: f64| {
                let g = potential.g(r);
                g * g / r
            };
            let val = adaptive(&mut f, 0.0, r_max, tol / (8.0 * PI) / 2.0)?;
            Ok(8.0 * PI * val)
        }
        CvMethod::LogKernel => {
            // Split the inner integral at a = r:
            //   inner(r) = log r * int_0^r a v(a) da + int_r^rmax a v(a) log a da.
            let inner_tol = (tol * 1e-3 / (1.0 + r_max)).max(1e-15);
            let mut failure: Option<Error> = None;
            let mut outer_f = |r: f64| -> f64 {
                let mut low_f = |a: f64| a * potential.v(a);
                let low = match adaptive(&mut low_f, 0.0, r, inner_tol) {
                    Ok(v) => v,
                    Err(e) => {
                        failure.get_or_insert(e);
                        0.0
                    }
                };
                let mut high_f = |a: f64| a * potential.v(a) * a.ln();
                let high = match adaptive(&mut high_f, r, r_max, inner_tol) {
                    Ok(v) => v,
                    Err(e) => {
                        failure.get_or_insert(e);
                        0.0
                    }
                };
                r * potential.v(r) * (r.ln() * low + high)
            };
            let outer = adaptive(&mut outer_f, 0.0, r_max, tol / (8.0 * PI) / 2.0);
            if let Some(e) = failure {
                return Err(e);
            }
            Ok(-8.0 * PI * outer?)
        }
    }
}
