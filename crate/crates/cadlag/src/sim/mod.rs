//! Scenario generators: rescaled renewal clocks, chain martingales, their
//! compositions, and the occupation functionals.

mod brownian;
mod chain;
mod interarrival;
mod occupation;
mod renewal;

pub use brownian::brownian_path;
pub use chain::{
    chain_martingale_path, solve_poisson, ChainSampler, ChainSpec, PoissonSolution, PreparedChain,
};
pub use interarrival::InterarrivalDist;
pub use occupation::{
    cv_quadrature, occupation_path, occupation_values, CvMethod, OccupationIntegrand,
    RadialPotential,
};
pub use renewal::{renewal_path, scaled_renewal_path};

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::path::{combine, compose, inverse, CadlagPath, Mode, MonotonePath};
use crate::point::Point;

/// The scaling regimes. The greek parameter is the Pareto tail index; stable
/// scenarios must pair with a Pareto interarrival law carrying the same index.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ScenarioKind {
    /// Finite-variance interarrivals, clock scale n: diffusive limit.
    RenewalFiniteVar,
    /// Pareto tail in (0, 1), clock scale n^{1/alpha}: inverse-subordinator
    /// clock limit, the non-M1-tight regime.
    RenewalStableSub1 { alpha: f64 },
    /// Pareto tail in (1, 2), clock scale n: finite-mean, infinite-variance
    /// corrections.
    RenewalStable12 { alpha: f64 },
    /// Planar Brownian occupation functional; has no renewal triplet.
    OccupationPlanar,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub scenario: ScenarioKind,
    pub n: usize,
    pub t_end: f64,
    pub grid_step: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub chain: Option<ChainSpec>,
    pub dist: InterarrivalDist,
    pub seed: u64,
}

impl ScenarioConfig {
    pub fn validate(&self) -> Result<()> {
        self.dist.validate()?;
        if self.n == 0 {
            return Err(Error::ConfigInvalid("scaling index n must be >= 1".into()));
        }
        if !(self.t_end > 0.0 && self.t_end.is_finite()) {
            return Err(Error::ConfigInvalid("horizon must be positive".into()));
        }
        if !(self.grid_step > 0.0 && self.grid_step < self.t_end) {
            return Err(Error::ConfigInvalid(
                "grid_step must be positive and below the horizon".into(),
            ));
        }
        match self.scenario {
            ScenarioKind::RenewalFiniteVar => {
                if self.dist.variance().is_none() {
                    return Err(Error::ConfigInvalid(
                        "the finite-variance scenario needs interarrivals with a second moment"
                            .into(),
                    ));
                }
            }
            ScenarioKind::RenewalStableSub1 { alpha } => {
                if !(alpha > 0.0 && alpha < 1.0) {
                    return Err(Error::ConfigInvalid(format!(
                        "sub-1 stable scenario needs alpha in (0,1), got {alpha}"
                    )));
                }
                self.require_matching_pareto(alpha)?;
            }
            ScenarioKind::RenewalStable12 { alpha } => {
                if !(alpha > 1.0 && alpha < 2.0) {
                    return Err(Error::ConfigInvalid(format!(
                        "stable scenario needs alpha in (1,2), got {alpha}"
                    )));
                }
                self.require_matching_pareto(alpha)?;
            }
            ScenarioKind::OccupationPlanar => {}
        }
        Ok(())
    }

    fn require_matching_pareto(&self, alpha: f64) -> Result<()> {
        match self.dist {
            InterarrivalDist::Pareto { alpha: a } if a == alpha => Ok(()),
            _ => Err(Error::ConfigInvalid(format!(
                "stable scenarios need Pareto interarrivals with the scenario's alpha = {alpha}"
            ))),
        }
    }

    /// The clock rescaling a_n: arrivals are counted up to time `a_n t`.
    pub fn clock_scale(&self) -> f64 {
        let n = self.n as f64;
        match self.scenario {
            ScenarioKind::RenewalStableSub1 { alpha } => n.powf(1.0 / alpha),
            _ => n,
        }
    }

    pub fn with_n(&self, n: usize) -> ScenarioConfig {
        ScenarioConfig { n, ..self.clone() }
    }
}

/// A validated scenario with its chain solution precomputed, for loops that
/// draw many replications.
#[derive(Clone, Debug)]
pub struct ScenarioEngine {
    cfg: ScenarioConfig,
    chain: Option<PreparedChain>,
}

impl ScenarioEngine {
    pub fn new(cfg: ScenarioConfig) -> Result<Self> {
        cfg.validate()?;
        let chain = match &cfg.chain {
            Some(spec) => Some(PreparedChain::new(spec.clone())?),
            None => None,
        };
        Ok(ScenarioEngine { cfg, chain })
    }

    pub fn config(&self) -> &ScenarioConfig {
        &self.cfg
    }

    pub fn prepared_chain(&self) -> Option<&PreparedChain> {
        self.chain.as_ref()
    }

    pub fn with_n(&self, n: usize) -> ScenarioEngine {
        ScenarioEngine { cfg: self.cfg.with_n(n), chain: self.chain.clone() }
    }

    /// The rescaled arrival clock `A_n(t) = N_{a_n t} / n` on `[0, t_end]`.
    pub fn renewal(&self, rng: &mut impl Rng) -> Result<MonotonePath> {
        let a = self.cfg.clock_scale();
        scaled_renewal_path(&self.cfg.dist, a * self.cfg.t_end, a, self.cfg.n as f64, rng)
    }

    fn require_chain(&self) -> Result<&PreparedChain> {
        self.chain
            .as_ref()
            .ok_or_else(|| Error::ConfigInvalid("this scenario operation needs a chain".into()))
    }

    /// `(M_n, A_n, W_n)` with `M_n = W_n  o  A_n`. A zero-variance chain has
    /// identically zero increments from any start state, so its martingale
    /// is kept as the constant zero path rather than an error.
    pub fn triplet(
        &self,
        rng: &mut impl Rng,
    ) -> Result<(CadlagPath, MonotonePath, CadlagPath)> {
        if self.cfg.scenario == ScenarioKind::OccupationPlanar {
            return Err(Error::ConfigInvalid(
                "the occupation scenario has no renewal triplet; use occupation_path".into(),
            ));
        }
        let chain = self.require_chain()?;
        let a_n = self.renewal(rng)?;
        let w_hor = a_n.terminal_value();
        let w_n = if chain.solution.sigma_sq > 0.0 && w_hor > 0.0 {
            chain.martingale_path(self.cfg.n, w_hor, rng)?
        } else {
            CadlagPath::new(&[0.0], &[Point::scalar(0.0)], Mode::Step, w_hor)?
        };
        let m_n = compose(&w_n, &a_n)?;
        Ok((m_n, a_n, w_n))
    }

    /// `A_n  o  inverse(A_n)`: the compensator proxy for the rescaled
    /// martingale. Its horizon is the terminal value of the clock; beyond it
    /// the process is constant, so probes cap evaluation times there.
    pub fn compensator(&self, rng: &mut impl Rng) -> Result<MonotonePath> {
        compensator_of(&self.renewal(rng)?)
    }

    /// Centered price path: case 1 gives
    /// `sqrt(n) (X_{nt}/n - t mu/c1)`, case 4 gives
    /// `n^{1-1/alpha} (X_{nt}/n - t mu/mu1)`, where X is the cumulative
    /// potential over executed events.
    pub fn centered_price_path(&self, rng: &mut impl Rng) -> Result<CadlagPath> {
        let (jump_scale, drift_rate) = self.centering_scales()?;
        let chain = self.require_chain()?;
        let a = self.cfg.clock_scale();
        let horizon = a * self.cfg.t_end;

        let mut times = vec![0.0];
        let mut values = vec![0.0];
        let mut s = 0.0f64;
        let mut x = 0.0f64;
        let mut state = chain.sampler.initial(rng);
        loop {
            s += self.cfg.dist.sample(rng);
            if s > horizon {
                break;
            }
            state = chain.sampler.step(state, rng);
            x += chain.spec.v0()[state];
            let t = s / a;
            if t <= *times.last().unwrap() {
                *values.last_mut().unwrap() = x * jump_scale;
            } else {
                times.push(t);
                values.push(x * jump_scale);
            }
        }
        let steps = CadlagPath::step(&times, &values, self.cfg.t_end)?;
        let ramp = CadlagPath::linear(
            &[0.0, self.cfg.t_end],
            &[0.0, self.cfg.t_end],
            self.cfg.t_end,
        )?;
        combine(1.0, &steps, -drift_rate, &ramp)
    }

    /// Terminal value of the centered price at time `t`, without a path.
    pub fn centered_terminal(&self, t: f64, rng: &mut impl Rng) -> Result<f64> {
        if !(t > 0.0 && t <= self.cfg.t_end) {
            return Err(Error::OutOfDomain { arg: t, hi: self.cfg.t_end });
        }
        let (jump_scale, drift_rate) = self.centering_scales()?;
        let chain = self.require_chain()?;
        let clock_end = self.cfg.clock_scale() * t;
        let mut s = 0.0f64;
        let mut x = 0.0f64;
        let mut state = chain.sampler.initial(rng);
        loop {
            s += self.cfg.dist.sample(rng);
            if s > clock_end {
                break;
            }
            state = chain.sampler.step(state, rng);
            x += chain.spec.v0()[state];
        }
        Ok(x * jump_scale - drift_rate * t)
    }

    /// Per-case (jump scale, linear drift rate) of the centered price.
    fn centering_scales(&self) -> Result<(f64, f64)> {
        let chain = self.require_chain()?;
        let mu = chain.solution.mu;
        let n = self.cfg.n as f64;
        match self.cfg.scenario {
            ScenarioKind::RenewalFiniteVar => {
                let c1 = self.cfg.dist.mean().expect("validated finite mean");
                Ok((1.0 / n.sqrt(), n.sqrt() * mu / c1))
            }
            ScenarioKind::RenewalStable12 { alpha } => {
                let mu1 = self.cfg.dist.mean().expect("alpha > 1 has a mean");
                let scale = n.powf(1.0 - 1.0 / alpha);
                Ok((scale / n, scale * mu / mu1))
            }
            _ => Err(Error::ConfigInvalid(
                "centered prices are defined for the finite-variance and alpha in (1,2) cases"
                    .into(),
            )),
        }
    }

    /// The corrected CLT variance `sigma^2/c1 + mu^2 sigma1^2 / c1^3` for the
    /// finite-variance case.
    pub fn sigma_tilde_sq(&self) -> Result<f64> {
        if self.cfg.scenario != ScenarioKind::RenewalFiniteVar {
            return Err(Error::ConfigInvalid(
                "the corrected CLT constant applies to the finite-variance case".into(),
            ));
        }
        let chain = self.require_chain()?;
        let c1 = self.cfg.dist.mean().expect("validated finite mean");
        let s1_sq = self.cfg.dist.variance().expect("validated finite variance");
        let sol = &chain.solution;
        Ok(sol.sigma_sq / c1 + sol.mu * sol.mu * s1_sq / (c1 * c1 * c1))
    }
}

/// The compensator proxy of a given clock draw, for probes that must couple
/// the martingale and its compensator through the same clock.
pub fn compensator_of(a: &MonotonePath) -> Result<MonotonePath> {
    let tau = inverse(a)?;
    MonotonePath::new(compose(a.as_path(), &tau)?)
}

/// One draw of `(martingale, clock, walk)` for a fresh engine; see
/// [`ScenarioEngine::triplet`] for the amortized form.
///
/// ```
/// use cadlag::{scenario_triplet, substream, ChainSpec, InterarrivalDist,
///              ScenarioConfig, ScenarioKind};
///
/// let cfg = ScenarioConfig {
///     scenario: ScenarioKind::RenewalFiniteVar,
///     n: 50,
///     t_end: 2.0,
///     grid_step: 0.01,
///     chain: Some(ChainSpec::iid_rows(vec![0.5, 0.5], vec![1.0, -1.0]).unwrap()),
///     dist: InterarrivalDist::Exponential { rate: 1.0 },
///     seed: 3,
/// };
/// let mut rng = substream(cfg.seed, 0, 0, 0);
/// let (m, a, w) = scenario_triplet(&cfg, &mut rng).unwrap();
/// // The martingale is the walk read on the renewal clock.
/// let t = 1.25;
/// let s = a.eval1(t).unwrap();
/// assert!((m.eval1(t).unwrap() - w.eval1(s).unwrap()).abs() <= 1e-12);
/// ```
pub fn scenario_triplet(
    cfg: &ScenarioConfig,
    rng: &mut impl Rng,
) -> Result<(CadlagPath, MonotonePath, CadlagPath)> {
    ScenarioEngine::new(cfg.clone())?.triplet(rng)
}

pub fn compensator_path(cfg: &ScenarioConfig, rng: &mut impl Rng) -> Result<MonotonePath> {
    ScenarioEngine::new(cfg.clone())?.compensator(rng)
}
