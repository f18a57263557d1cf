//! Finite Markov chains: the Poisson equation, martingale increments, and
//! scaled partial-sum paths.
//!
//! For a chain with transition matrix P and centered potential V = V0 - mu,
//! the Poisson equation (I - P)f = V yields martingale increments
//! `Y_k = f(xi_k) - (Pf)(xi_{k-1})` whose scaled partial sums converge to a
//! Brownian motion with variance sigma^2.

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::path::{CadlagPath, Mode};

const STOCHASTIC_TOL: f64 = 1e-12;

/// A finite chain: row-stochastic transition matrix, potential values, and an
/// initial distribution. Irreducibility is checked at construction.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ChainSpecRaw", into = "ChainSpecRaw")]
pub struct ChainSpec {
    p: Vec<Vec<f64>>,
    v0: Vec<f64>,
    initial: Vec<f64>,
}

#[derive(Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ChainSpecRaw {
    p: Vec<Vec<f64>>,
    v0: Vec<f64>,
    initial: Vec<f64>,
}

impl TryFrom<ChainSpecRaw> for ChainSpec {
    type Error = Error;

    fn try_from(raw: ChainSpecRaw) -> Result<Self> {
        ChainSpec::new(raw.p, raw.v0, raw.initial)
    }
}

impl From<ChainSpec> for ChainSpecRaw {
    fn from(spec: ChainSpec) -> Self {
        ChainSpecRaw { p: spec.p, v0: spec.v0, initial: spec.initial }
    }
}

impl ChainSpec {
    pub fn new(p: Vec<Vec<f64>>, v0: Vec<f64>, initial: Vec<f64>) -> Result<Self> {
        let n = p.len();
        if n == 0 {
            return Err(Error::ConfigInvalid("chain needs at least one state".into()));
        }
        if v0.len() != n {
            return Err(Error::LengthMismatch { expected: n, got: v0.len() });
        }
        if initial.len() != n {
            return Err(Error::LengthMismatch { expected: n, got: initial.len() });
        }
        for (i, row) in p.iter().enumerate() {
            if row.len() != n {
                return Err(Error::LengthMismatch { expected: n, got: row.len() });
            }
            let mut sum = 0.0;
            for &q in row {
                if !(q >= 0.0) || !q.is_finite() {
                    return Err(Error::ConfigInvalid(format!(
                        "transition row {i} has a negative or non-finite entry"
                    )));
                }
                sum += q;
            }
            if (sum - 1.0).abs() > STOCHASTIC_TOL {
                return Err(Error::ConfigInvalid(format!(
                    "transition row {i} sums to {sum}, not 1"
                )));
            }
        }
        let mut isum = 0.0;
        for &q in &initial {
            if !(q >= 0.0) || !q.is_finite() {
                return Err(Error::ConfigInvalid(
                    "initial distribution has a negative or non-finite entry".into(),
                ));
            }
            isum += q;
        }
        if (isum - 1.0).abs() > STOCHASTIC_TOL {
            return Err(Error::ConfigInvalid(format!(
                "initial distribution sums to {isum}, not 1"
            )));
        }
        if v0.iter().any(|v| !v.is_finite()) {
            return Err(Error::ConfigInvalid("potential must be finite".into()));
        }
        let spec = ChainSpec { p, v0, initial };
        if !spec.is_irreducible() {
            return Err(Error::ReducibleChain);
        }
        Ok(spec)
    }

    /// Chain whose every row equals `pi`: the states are iid draws from `pi`.
    pub fn iid_rows(pi: Vec<f64>, v0: Vec<f64>) -> Result<Self> {
        let rows = vec![pi.clone(); pi.len()];
        ChainSpec::new(rows, v0, pi)
    }

    pub fn n_states(&self) -> usize {
        self.p.len()
    }

    pub fn transition(&self) -> &[Vec<f64>] {
        &self.p
    }

    pub fn v0(&self) -> &[f64] {
        &self.v0
    }

    pub fn initial(&self) -> &[f64] {
        &self.initial
    }

    /// Strong connectivity of the positive-probability edge graph, by forward
    /// and backward reachability from state 0.
    fn is_irreducible(&self) -> bool {
        let n = self.n_states();
        let reach = |backward: bool| {
            let mut seen = vec![false; n];
            let mut stack = vec![0usize];
            seen[0] = true;
            while let Some(x) = stack.pop() {
                for y in 0..n {
                    let edge = if backward { self.p[y][x] } else { self.p[x][y] };
                    if edge > 0.0 && !seen[y] {
                        seen[y] = true;
                        stack.push(y);
                    }
                }
            }
            seen.iter().all(|&s| s)
        };
        reach(false) && reach(true)
    }
}

/// Stationary law, centered potential data, and the Poisson-equation solution.
#[derive(Clone, Debug)]
pub struct PoissonSolution {
    pub pi: Vec<f64>,
    pub mu: f64,
    pub v: Vec<f64>,
    pub f: Vec<f64>,
    pub pf: Vec<f64>,
    pub sigma_sq: f64,
}

/// Solves pi P = pi and (I - P)f = V with pi.f = 0, and evaluates the
/// martingale variance `sigma^2 = sum_x pi(x) sum_y P(x,y) {f(y) - Pf(x)}^2`.
pub fn solve_poisson(chain: &ChainSpec) -> Result<PoissonSolution> {
    let n = chain.n_states();
    let p = DMatrix::from_fn(n, n, |i, j| chain.p[i][j]);

    // Stationarity: (I - P^T) pi = 0 with the last equation replaced by the
    // normalization sum(pi) = 1.
    let mut a = DMatrix::identity(n, n) - p.transpose();
    for j in 0..n {
        a[(n - 1, j)] = 1.0;
    }
    let mut rhs = DVector::zeros(n);
    rhs[n - 1] = 1.0;
    let pi = a.lu().solve(&rhs).ok_or(Error::SingularSystem)?;
    let total: f64 = pi.iter().sum();
    let pi: Vec<f64> = pi.iter().map(|q| (q / total).max(0.0)).collect();

    let mu: f64 = pi.iter().zip(&chain.v0).map(|(q, v)| q * v).sum();
    let v: Vec<f64> = chain.v0.iter().map(|x| x - mu).collect();

    // Fundamental-matrix route: (I - P + 1 pi^T) f = V has a unique solution,
    // which satisfies (I - P)f = V and pi.f = 0 because pi.V = 0.
    let mut b = DMatrix::identity(n, n) - &p;
    for i in 0..n {
        for j in 0..n {
            b[(i, j)] += pi[j];
        }
    }
    let f = b
        .lu()
        .solve(&DVector::from_column_slice(&v))
        .ok_or(Error::SingularSystem)?;
    let drift: f64 = pi.iter().zip(f.iter()).map(|(q, x)| q * x).sum();
    let f: Vec<f64> = f.iter().map(|x| x - drift).collect();

    let pf: Vec<f64> = (0..n)
        .map(|i| (0..n).map(|j| chain.p[i][j] * f[j]).sum())
        .collect();

    let mut sigma_sq = 0.0;
    for i in 0..n {
        for j in 0..n {
            let d = f[j] - pf[i];
            sigma_sq += pi[i] * chain.p[i][j] * d * d;
        }
    }
    Ok(PoissonSolution { pi, mu, v, f, pf, sigma_sq: sigma_sq.max(0.0) })
}

/// Inverse-cdf sampling with precomputed cumulative rows, so draws are
/// platform-reproducible.
#[derive(Clone, Debug)]
pub struct ChainSampler {
    cum_rows: Vec<Vec<f64>>,
    cum_init: Vec<f64>,
}

fn cumulative(row: &[f64]) -> Vec<f64> {
    let mut acc = 0.0;
    let mut out: Vec<f64> = row
        .iter()
        .map(|&q| {
            acc += q;
            acc
        })
        .collect();
    if let Some(last) = out.last_mut() {
        *last = 1.0;
    }
    out
}

fn pick(cum: &[f64], u: f64) -> usize {
    cum.partition_point(|&c| c <= u).min(cum.len() - 1)
}

impl ChainSampler {
    pub fn new(chain: &ChainSpec) -> Self {
        ChainSampler {
            cum_rows: chain.p.iter().map(|r| cumulative(r)).collect(),
            cum_init: cumulative(&chain.initial),
        }
    }

    pub fn initial(&self, rng: &mut impl Rng) -> usize {
        pick(&self.cum_init, rng.gen::<f64>())
    }

    pub fn step(&self, from: usize, rng: &mut impl Rng) -> usize {
        pick(&self.cum_rows[from], rng.gen::<f64>())
    }
}

/// A chain with its Poisson solution and sampler precomputed, for hot loops
/// that draw many paths from one spec.
#[derive(Clone, Debug)]
pub struct PreparedChain {
    pub spec: ChainSpec,
    pub solution: PoissonSolution,
    pub sampler: ChainSampler,
}

impl PreparedChain {
    pub fn new(spec: ChainSpec) -> Result<Self> {
        let solution = solve_poisson(&spec)?;
        let sampler = ChainSampler::new(&spec);
        Ok(PreparedChain { spec, solution, sampler })
    }

    /// Step path of `(1/(sigma sqrt(n))) sum_{k <= floor(nt)} Y_k`.
    pub fn martingale_path(
        &self,
        n: usize,
        horizon: f64,
        rng: &mut impl Rng,
    ) -> Result<CadlagPath> {
        if self.solution.sigma_sq <= 0.0 {
            return Err(Error::ZeroVariance);
        }
        if n == 0 || !(horizon > 0.0 && horizon.is_finite()) {
            return Err(Error::ConfigInvalid(
                "martingale path needs n >= 1 and a positive horizon".into(),
            ));
        }
        let sol = &self.solution;
        let scale = 1.0 / (sol.sigma_sq.sqrt() * (n as f64).sqrt());
        let steps = (n as f64 * horizon).floor() as usize;
        let mut times = Vec::with_capacity(steps + 1);
        let mut values = Vec::with_capacity(steps + 1);
        times.push(0.0);
        values.push(0.0);
        let mut state = self.sampler.initial(rng);
        let mut sum = 0.0f64;
        for k in 1..=steps {
            let prev = state;
            state = self.sampler.step(prev, rng);
            sum += sol.f[state] - sol.pf[prev];
            times.push(k as f64 / n as f64);
            values.push(sum * scale);
        }
        CadlagPath::new(&times, &values_to_points(&values), Mode::Step, horizon)
    }
}

fn values_to_points(values: &[f64]) -> Vec<crate::point::Point> {
    values.iter().map(|&v| crate::point::Point::scalar(v)).collect()
}

/// Convenience wrapper that prepares the chain on every call.
pub fn chain_martingale_path(
    chain: &ChainSpec,
    n: usize,
    horizon: f64,
    rng: &mut impl Rng,
) -> Result<CadlagPath> {
    PreparedChain::new(chain.clone())?.martingale_path(n, horizon, rng)
}
