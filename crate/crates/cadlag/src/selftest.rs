//! Curated fast end-to-end checks over the public API, exposed so a batch
//! front end can verify an installation in seconds.

use crate::error::Result;
use crate::l2w::{l2w_distance, L2wTruncation};
use crate::modulus::{grid_increment_max, jump_bound_check, oscillation_modulus, ModulusKind};
use crate::path::{compose, inverse, CadlagPath, MonotonePath};
use crate::probe::{compensator_probe, lenglart_check, lenglart_pairs};
use crate::rng::substream;
use crate::sim::{
    cv_quadrature, scenario_triplet, solve_poisson, ChainSpec, CvMethod, InterarrivalDist,
    RadialPotential, ScenarioConfig, ScenarioKind,
};
use crate::{hermite, hermite_sup};

/// One named check with a human-readable detail line.
#[derive(Debug, Clone, serde::Serialize)]
pub struct SelfCheck {
    pub name: &'static str,
    pub detail: String,
    pub pass: bool,
}

fn check(out: &mut Vec<SelfCheck>, name: &'static str, body: impl FnOnce() -> Result<(String, bool)>) {
    let (detail, pass) = match body() {
        Ok(pair) => pair,
        Err(e) => (format!("error: {e}"), false),
    };
    out.push(SelfCheck { name, detail, pass });
}

fn demo_config() -> ScenarioConfig {
    ScenarioConfig {
        scenario: ScenarioKind::RenewalFiniteVar,
        n: 200,
        t_end: 2.5,
        grid_step: 0.01,
        chain: Some(ChainSpec::iid_rows(vec![0.5, 0.5], vec![1.0, -1.0]).expect("valid chain")),
        dist: InterarrivalDist::Exponential { rate: 1.0 },
        seed: 404,
    }
}

/// Run every check; the whole batch stays in the tens of seconds.
pub fn run_selftests() -> Vec<SelfCheck> {
    let mut out = Vec::new();

    check(&mut out, "inverse-involution", || {
        let a = MonotonePath::step(&[0.0, 0.5, 1.3, 2.0], &[0.0, 1.0, 2.5, 4.0], 3.0)?;
        let twice = inverse(&inverse(&a)?)?;
        let mut worst = 0.0f64;
        for i in 0..=60 {
            let t = 3.0 * i as f64 / 60.0;
            worst = worst.max((twice.eval1(t)? - a.eval1(t)?).abs());
        }
        Ok((format!("max |inv(inv(a)) - a| = {worst:.3e}"), worst == 0.0))
    });

    check(&mut out, "first-passage-composition", || {
        // A strictly increasing path composed with its inverse reproduces the
        // identity at continuity points.
        let a = MonotonePath::linear(&[0.0, 1.0, 2.0], &[0.0, 0.7, 2.0], 2.0)?;
        let tau = inverse(&a)?;
        let round = compose(a.as_path(), &tau)?;
        let mut worst = 0.0f64;
        for i in 0..=40 {
            let t = 1.9 * i as f64 / 40.0;
            worst = worst.max((round.eval1(t)? - t).abs());
        }
        Ok((format!("max |A(tau(t)) - t| = {worst:.3e}"), worst < 1e-12))
    });

    check(&mut out, "spike-moduli", || {
        // Up-down unit spike: J1 and M1 both see the full height once the
        // window covers the spike.
        let x = CadlagPath::step(&[0.0, 1.0, 1.1], &[0.0, 1.0, 0.0], 2.0)?;
        let j1 = oscillation_modulus(&x, ModulusKind::J1, 0.2, 2.0)?.value;
        let m1 = oscillation_modulus(&x, ModulusKind::M1, 0.2, 2.0)?.value;
        Ok((format!("J1 = {j1}, M1 = {m1}"), (j1 - 1.0).abs() < 1e-12 && (m1 - 1.0).abs() < 1e-12))
    });

    check(&mut out, "monotone-m1-vanishes", || {
        let x = CadlagPath::step(&[0.0, 0.3, 0.9, 1.4], &[0.0, 0.5, 1.5, 3.0], 2.0)?;
        let m1 = oscillation_modulus(&x, ModulusKind::M1, 0.3, 2.0)?.value;
        Ok((format!("M1 on a staircase = {m1}"), m1 == 0.0))
    });

    check(&mut out, "grid-increment-straddle", || {
        let x = CadlagPath::step(&[0.0, 1.0], &[0.0, 1.0], 2.0)?;
        let vals: Vec<f64> =
            [3usize, 10, 100].iter().map(|&k| grid_increment_max(&x, k, 2.0).unwrap()).collect();
        let pass = vals.iter().all(|&d| (d - 1.0).abs() < 1e-15);
        Ok((format!("D(k) over k in {{3,10,100}} = {vals:?}"), pass))
    });

    check(&mut out, "jump-bound-inequality", || {
        let x = MonotonePath::step(
            &[0.0, 1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0, 9.0],
            &[0.0, 1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0, 9.0],
            10.0,
        )?;
        let (lhs, rhs) = jump_bound_check(&x, 0.5, 10.0)?;
        Ok((format!("lhs = {lhs}, rhs = {rhs}"), lhs <= rhs + 1e-12))
    });

    check(&mut out, "hermite-sup-bound", || {
        let mut worst = 0.0f64;
        for k in 0..=50 {
            for i in 0..=400 {
                let t = -10.0 + 20.0 * i as f64 / 400.0;
                worst = worst.max(hermite(k, t).abs());
            }
        }
        let bound = hermite_sup() + 1e-10;
        Ok((format!("max |h_k| sampled = {worst:.6}, bound {bound:.6}"), worst <= bound))
    });

    check(&mut out, "weak-metric-axioms", || {
        // The default truncation reads cuts out to time 8, so the demo paths
        // carry that horizon.
        let x = CadlagPath::step(&[0.0, 0.4], &[0.0, 1.0], 8.0)?;
        let y = CadlagPath::linear(&[0.0, 2.0], &[0.0, 1.0], 8.0)?;
        let t = L2wTruncation::default();
        let (dxx, _) = l2w_distance(&x, &x, &t)?;
        let (dxy, _) = l2w_distance(&x, &y, &t)?;
        let (dyx, _) = l2w_distance(&y, &x, &t)?;
        Ok((
            format!("d(x,x) = {dxx:.3e}, d(x,y) = {dxy:.6}, d(y,x) = {dyx:.6}"),
            dxx == 0.0 && dxy > 0.0 && (dxy - dyx).abs() < 1e-12,
        ))
    });

    check(&mut out, "cv-dual-quadrature", || {
        let p = RadialPotential::builtin("gaussian-centered")?;
        let grad = cv_quadrature(&p, CvMethod::Gradient, 1e-7)?;
        let log = cv_quadrature(&p, CvMethod::LogKernel, 1e-7)?;
        let target = std::f64::consts::PI / 4.0;
        let pass = (grad - log).abs() < 2e-7 && (grad - target).abs() < 1e-6;
        Ok((format!("gradient route {grad:.9}, log route {log:.9}, target {target:.9}"), pass))
    });

    check(&mut out, "poisson-equation-centering", || {
        let spec = ChainSpec::new(
            vec![vec![0.6, 0.4], vec![0.3, 0.7]],
            vec![1.0, -1.0],
            vec![0.5, 0.5],
        )?;
        let sol = solve_poisson(&spec)?;
        let centered: f64 = sol.pi.iter().zip(&sol.f).map(|(p, f)| p * f).sum();
        Ok((
            format!("pi-mean of f = {centered:.3e}, sigma^2 = {:.6}", sol.sigma_sq),
            centered.abs() < 1e-12 && sol.sigma_sq > 0.0,
        ))
    });

    check(&mut out, "scenario-triplet-composition", || {
        let cfg = demo_config();
        let mut rng = substream(cfg.seed, 99, 0, 0);
        let (m, a, w) = scenario_triplet(&cfg, &mut rng)?;
        let mut worst = 0.0f64;
        for i in 0..=50 {
            let t = cfg.t_end * i as f64 / 50.0;
            worst = worst.max((m.eval1(t)? - w.eval1(a.eval1(t)?)?).abs());
        }
        Ok((format!("max |M(t) - W(A(t))| = {worst:.3e}"), worst < 1e-9))
    });

    check(&mut out, "compensator-tracks-identity", || {
        let cfg = demo_config();
        let r = compensator_probe(&cfg, &[0.5, 1.0, 2.0], &[200], 300)?;
        Ok((format!("cells: {}", r.to_csv().lines().count() - 1), r.passed()))
    });

    check(&mut out, "lenglart-domination", || {
        let cfg = demo_config();
        let pairs = lenglart_pairs(&cfg, 300)?;
        let grid = [0.25, 0.5, 1.0, 2.0];
        let r = lenglart_check(&pairs, &grid, &grid, 2.0)?;
        Ok((format!("cells: {}", r.to_csv().lines().count() - 1), r.passed()))
    });

    out
}
