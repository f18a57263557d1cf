//! Compensator mean tracking and the Lenglart domination inequality.

use crate::error::{Error, Result};
use crate::path::{CadlagPath, MonotonePath};
use crate::probe::{eval_capped, ProbeReport, TAG_COMPENSATOR, TAG_LENGLART};
use crate::rng::substream;
use crate::sim::{compensator_of, ScenarioConfig, ScenarioEngine};
use crate::stats::mean_and_se;

// Pure float-rounding grace on interval endpoints: `(floor(nt)+1)/n - t` can
// land an ulp past `1/n` even though the real quantity never does.
const EDGE_GRACE: f64 = 1e-12;

/// Cell `(n, t)` is the sample mean of the compensator proxy at `t`.
///
/// The proxy overshoots the identity by at most one clock increment, so the
/// declared pass window is `mean - t` in `[-2 SE, 1/n + 2 SE]`; the threshold
/// column records the staircase bound `1/n`. Reads past a replication's
/// terminal level return the terminal value (the process has stopped there).
pub fn compensator_probe(
    cfg: &ScenarioConfig,
    t_grid: &[f64],
    n_grid: &[usize],
    reps: u64,
) -> Result<ProbeReport> {
    if t_grid.is_empty() || n_grid.is_empty() {
        return Err(Error::ConfigInvalid("compensator grids must be nonempty".into()));
    }
    if t_grid.iter().any(|&t| !(t >= 0.0 && t <= cfg.t_end)) {
        return Err(Error::ConfigInvalid("every t must lie in [0, horizon]".into()));
    }
    if reps < 2 {
        return Err(Error::ConfigInvalid("need at least 2 replications for an SE".into()));
    }

    let desc = format!(
        "{:?}|{t_grid:?}|{n_grid:?}|reps={reps}",
        serde_json::to_string(cfg).expect("config serializes")
    );
    let mut report = ProbeReport::new("compensator", &["n", "t"], cfg.seed, &desc);
    report.push_note(
        "pass iff mean - t in [-2 SE, 1/n + 2 SE]; threshold column is the staircase bound 1/n"
            .into(),
    );

    for &n in n_grid {
        let engine = ScenarioEngine::new(cfg.with_n(n))?;
        let mut values = vec![Vec::with_capacity(reps as usize); t_grid.len()];
        for rep in 0..reps {
            let mut rng = substream(cfg.seed, TAG_COMPENSATOR, n as u64, rep);
            let comp = engine.compensator(&mut rng)?;
            for (ti, &t) in t_grid.iter().enumerate() {
                values[ti].push(eval_capped(&comp, t));
            }
        }
        let slack = 1.0 / n as f64;
        for (ti, &t) in t_grid.iter().enumerate() {
            let (mean, se) = mean_and_se(&values[ti])?;
            let dev = mean - t;
            let pass = dev >= -2.0 * se - EDGE_GRACE && dev <= slack + 2.0 * se + EDGE_GRACE;
            report.push_cell(vec![n as f64, t], mean, se, slack, pass);
        }
    }
    Ok(report)
}

/// Replications of `(M_n, compensator)` coupled through the same clock draw,
/// as the domination check consumes them.
pub fn lenglart_pairs(cfg: &ScenarioConfig, reps: u64) -> Result<Vec<(CadlagPath, MonotonePath)>> {
    if reps == 0 {
        return Err(Error::ConfigInvalid("need at least one replication".into()));
    }
    let engine = ScenarioEngine::new(cfg.clone())?;
    let mut out = Vec::with_capacity(reps as usize);
    for rep in 0..reps {
        let mut rng = substream(cfg.seed, TAG_LENGLART, 0, rep);
        let (m_n, a_n, _) = engine.triplet(&mut rng)?;
        out.push((m_n, compensator_of(&a_n)?));
    }
    Ok(out)
}

/// Empirical Lenglart domination: for every `(eps, eta)` cell,
/// `P(sup_{s<=tau} M(s)^2 >= eps) <= eta/eps + P(4 Y(tau) >= eta)` up to twice
/// the combined standard error.
///
/// The squared martingale against four times its compensator is the concrete
/// dominated pair here: the Doob L2 inequality bounds the expected running
/// square by four times the expected bracket, which is what the abstract
/// lemma's precondition asks for. The estimate column holds the signed
/// violation `LHS - RHS`, so anything at or below the threshold passes.
pub fn lenglart_check(
    pairs: &[(CadlagPath, MonotonePath)],
    eps_grid: &[f64],
    eta_grid: &[f64],
    tau: f64,
) -> Result<ProbeReport> {
    if pairs.is_empty() {
        return Err(Error::ConfigInvalid("need at least one path pair".into()));
    }
    if eps_grid.is_empty() || eta_grid.is_empty() {
        return Err(Error::ConfigInvalid("eps and eta grids must be nonempty".into()));
    }
    if eps_grid.iter().chain(eta_grid).any(|&v| !(v > 0.0)) {
        return Err(Error::ConfigInvalid("eps and eta must be positive".into()));
    }

    let reps = pairs.len() as f64;
    let mut sup_sq = Vec::with_capacity(pairs.len());
    let mut bracket = Vec::with_capacity(pairs.len());
    for (m, y) in pairs {
        let s = m.sup_norm(tau)?;
        sup_sq.push(s * s);
        bracket.push(4.0 * eval_capped(y, tau));
    }

    let desc = format!("pairs={}|{eps_grid:?}|{eta_grid:?}|tau={tau}", pairs.len());
    let mut report = ProbeReport::new("lenglart", &["eps", "eta"], 0, &desc);
    let mut worst = f64::NEG_INFINITY;
    for &eps in eps_grid {
        for &eta in eta_grid {
            let lhs = sup_sq.iter().filter(|&&v| v >= eps).count() as f64 / reps;
            let rhs_p = bracket.iter().filter(|&&v| v >= eta).count() as f64 / reps;
            let se_lhs = (lhs * (1.0 - lhs) / reps).sqrt();
            let se_rhs = (rhs_p * (1.0 - rhs_p) / reps).sqrt();
            let se = (se_lhs * se_lhs + se_rhs * se_rhs).sqrt();
            let violation = lhs - (eta / eps + rhs_p);
            worst = worst.max(violation);
            report.push_cell(vec![eps, eta], violation, se, 2.0 * se, violation <= 2.0 * se);
        }
    }
    report.push_note(format!("max violation {worst}"));
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::path::Mode;
    use crate::point::Point;
    use crate::sim::{ChainSpec, InterarrivalDist, ScenarioKind};

    fn cfg(n: usize) -> ScenarioConfig {
        ScenarioConfig {
            scenario: ScenarioKind::RenewalFiniteVar,
            n,
            t_end: 2.5,
            grid_step: 0.01,
            chain: Some(ChainSpec::iid_rows(vec![0.5, 0.5], vec![1.0, -1.0]).unwrap()),
            dist: InterarrivalDist::Exponential { rate: 1.0 },
            seed: 13,
        }
    }

    #[test]
    fn staircase_compensator_is_exact() {
        let mut c = cfg(10);
        c.dist = InterarrivalDist::Deterministic { value: 1.0 };
        let r = compensator_probe(&c, &[0.25, 1.0], &[10], 16).unwrap();
        // Deterministic clock: value is (floor(nt)+1)/n with zero spread.
        let cell = r.cell(&[10.0, 0.25]).unwrap();
        assert!((cell.estimate - 0.3).abs() < 1e-12);
        assert!(cell.stderr < 1e-12);
        assert!(cell.pass);
        let cell = r.cell(&[10.0, 1.0]).unwrap();
        assert!((cell.estimate - 1.1).abs() < 1e-12);
        assert!(cell.pass, "exact staircase edge must pass via the float grace");
        assert!(r.passed());
    }

    #[test]
    fn poisson_clock_tracks_identity() {
        let r = compensator_probe(&cfg(200), &[0.5, 1.0, 2.0], &[200], 300).unwrap();
        assert!(r.passed(), "{}", r.to_csv());
        for cell in r.cells() {
            let t = cell.axes[1];
            assert!(cell.estimate >= t - 2.0 * cell.stderr - 1e-12);
            assert!(cell.estimate <= t + 1.0 / 200.0 + 2.0 * cell.stderr + 1e-12);
        }
    }

    #[test]
    fn origin_cell_reads_the_first_level() {
        // At t=0 the proxy reads the first positive clock level, about 1/n.
        let r = compensator_probe(&cfg(50), &[0.0], &[50], 200).unwrap();
        let cell = r.cell(&[50.0, 0.0]).unwrap();
        assert!(cell.estimate >= 0.0 && cell.estimate <= 1.0 / 50.0 + 2.0 * cell.stderr + 1e-12);
        assert!(cell.pass);
    }

    #[test]
    fn domination_holds_on_scenario_paths() {
        let pairs = lenglart_pairs(&cfg(300), 400).unwrap();
        let grid = [0.25, 0.5, 1.0, 2.0];
        let r = lenglart_check(&pairs, &grid, &grid, 2.0).unwrap();
        assert!(r.passed(), "{}", r.to_csv());
    }

    #[test]
    fn generous_budget_dominates_trivially() {
        // Y constant and huge: RHS >= P(4Y >= eta) = 1 for eta below it.
        let m = CadlagPath::step(&[0.0, 1.0], &[0.0, 1.5], 2.0).unwrap();
        let y = MonotonePath::new(
            CadlagPath::new(&[0.0], &[Point::scalar(100.0)], Mode::Step, 2.0).unwrap(),
        )
        .unwrap();
        let r = lenglart_check(&[(m, y)], &[1.0], &[10.0], 2.0).unwrap();
        let cell = r.cell(&[1.0, 10.0]).unwrap();
        assert!(cell.estimate <= 0.0);
        assert!(cell.pass);
    }

    #[test]
    fn zero_martingale_never_violates() {
        let m = CadlagPath::step(&[0.0], &[0.0], 2.0).unwrap();
        let y = MonotonePath::step(&[0.0], &[0.0], 2.0).unwrap();
        let r = lenglart_check(&[(m, y)], &[0.5], &[0.5], 2.0).unwrap();
        assert!(r.passed());
    }

    #[test]
    fn rejects_degenerate_input() {
        assert!(lenglart_check(&[], &[1.0], &[1.0], 1.0).is_err());
        let m = CadlagPath::step(&[0.0], &[0.0], 2.0).unwrap();
        let y = MonotonePath::step(&[0.0], &[0.0], 2.0).unwrap();
        assert!(lenglart_check(&[(m.clone(), y.clone())], &[], &[1.0], 1.0).is_err());
        assert!(lenglart_check(&[(m, y)], &[-1.0], &[1.0], 1.0).is_err());
        assert!(compensator_probe(&cfg(10), &[9.0], &[10], 10).is_err());
    }
}
