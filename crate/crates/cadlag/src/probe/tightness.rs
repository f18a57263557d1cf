//! Oscillation-modulus tightness tables.

use crate::error::{Error, Result};
use crate::modulus::{oscillation_modulus, ModulusKind};
use crate::probe::{ProbeReport, TAG_TIGHTNESS};
use crate::rng::substream;
use crate::sim::{ScenarioConfig, ScenarioEngine};

/// Cell `(n, delta)` estimates `P(omega(M_n, delta, T) > eps)` with its
/// binomial standard error.
///
/// Tightness of a family means these probabilities vanish as `delta` shrinks,
/// uniformly in `n`; a persistent lower bound at small `delta` and large `n`
/// witnesses the opposite. Which of the two a caller expects depends on the
/// scenario, so the table itself is descriptive: every cell passes and trend
/// assertions live with the caller reading the estimates.
pub fn tightness_table(
    cfg: &ScenarioConfig,
    kind: ModulusKind,
    delta_grid: &[f64],
    n_grid: &[usize],
    eps: f64,
    t_end: f64,
    reps: u64,
) -> Result<ProbeReport> {
    if delta_grid.is_empty() || n_grid.is_empty() {
        return Err(Error::ConfigInvalid("tightness grids must be nonempty".into()));
    }
    if reps < 100 {
        return Err(Error::ConfigInvalid("tightness needs at least 100 replications".into()));
    }
    if !(eps > 0.0) {
        return Err(Error::ConfigInvalid("the exceedance level eps must be positive".into()));
    }
    if !(t_end > 0.0 && t_end <= cfg.t_end) {
        return Err(Error::ConfigInvalid(
            "the modulus window must fit inside the scenario horizon".into(),
        ));
    }
    if delta_grid.iter().any(|&d| !(d > 0.0 && d < t_end)) {
        return Err(Error::ConfigInvalid("every delta must lie in (0, T)".into()));
    }

    let desc = format!(
        "{:?}|{kind:?}|{delta_grid:?}|{n_grid:?}|eps={eps}|T={t_end}|reps={reps}",
        serde_json::to_string(cfg).expect("config serializes")
    );
    let mut report = ProbeReport::new("tightness", &["n", "delta"], cfg.seed, &desc);
    report.push_note(format!(
        "cell = P(omega_{}(M_n, delta, {t_end}) > {eps}); descriptive, trends judged by the caller",
        kind.label()
    ));

    for &n in n_grid {
        let engine = ScenarioEngine::new(cfg.with_n(n))?;
        let mut exceed = vec![0u64; delta_grid.len()];
        for rep in 0..reps {
            let mut rng = substream(cfg.seed, TAG_TIGHTNESS, n as u64, rep);
            let (m_n, _, _) = engine.triplet(&mut rng)?;
            for (di, &delta) in delta_grid.iter().enumerate() {
                if oscillation_modulus(&m_n, kind, delta, t_end)?.value > eps {
                    exceed[di] += 1;
                }
            }
        }
        for (di, &delta) in delta_grid.iter().enumerate() {
            let p = exceed[di] as f64 / reps as f64;
            let se = (p * (1.0 - p) / reps as f64).sqrt();
            report.push_cell(vec![n as f64, delta], p, se, 1.0, true);
        }
    }
    Ok(report)
}
