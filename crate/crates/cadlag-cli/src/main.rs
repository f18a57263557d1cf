//! Command line front end. Exit codes: 0 every reported check passed,
//! 1 at least one threshold failed, 2 the run itself could not proceed
//! (bad flags, bad config, library error).

mod config;
mod manifest;

use anyhow::{bail, Context};
use cadlag::{
    compensator_probe, cv_quadrature, fdd_probe, l2w_probe, lenglart_check, lenglart_pairs,
    occupation_probe, run_selftests, scenario_triplet, sigma_tilde_probe, substream,
    tightness_table, CvMethod, PathDoc, ProbeReport, RadialPotential,
};
use clap::{Parser, Subcommand};
use config::LoadedConfig;
use manifest::ManifestWriter;
use rayon::prelude::*;
use std::path::PathBuf;

/// Replication tag for the simulate command. The diagnostics key their
/// substreams with tags 1..=7, so tag 0 keeps the streams disjoint.
const SIM_TAG: u64 = 0;

#[derive(Parser)]
#[command(name = "cadlag", version, about = "Renewal-clock path experiments and diagnostics")]
struct Cli {
    /// TOML experiment description; required by simulate and probe.
    #[arg(long, global = true, env = "CADLAG_CONFIG")]
    config: Option<PathBuf>,

    /// Master seed; overrides the seed in the config file.
    #[arg(long, global = true, env = "CADLAG_SEED")]
    seed: Option<u64>,

    /// Worker threads for simulate. Output bytes do not depend on this.
    #[arg(long, global = true, env = "CADLAG_WORKERS", default_value_t = 1)]
    workers: usize,

    /// Directory for artifacts; created if missing.
    #[arg(long, global = true, env = "CADLAG_OUT", default_value = "out")]
    out: PathBuf,

    #[command(subcommand)]
    cmd: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Draw independent scenario replications and write each triplet
    /// (martingale, clock, walk) as path documents.
    Simulate,
    /// Run one named diagnostic; writes <name>.csv, <name>.json and a
    /// manifest.
    Probe {
        /// One of: tightness, fdd, l2w, compensator, lenglart, sigma_tilde,
        /// occupation.
        #[arg(long, env = "CADLAG_NAME")]
        name: String,
    },
    /// Compute the energy constant by two independent quadrature routes and
    /// compare them.
    Cv {
        /// Builtin potential name.
        #[arg(long, default_value = "gaussian-centered")]
        v: String,
        /// Absolute tolerance per route; the routes must agree within twice
        /// this.
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
    },
    /// Exercise the library end to end and print one line per check.
    Selftest,
}

fn main() {
    match run() {
        Ok(true) => {}
        Ok(false) => std::process::exit(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            std::process::exit(2);
        }
    }
}

fn run() -> anyhow::Result<bool> {
    let cli = Cli::parse();
    match &cli.cmd {
        Command::Simulate => simulate(&cli),
        Command::Probe { name } => probe(&cli, name),
        Command::Cv { v, tol } => cv(v, *tol),
        Command::Selftest => selftest(),
    }
}

fn load_config(cli: &Cli) -> anyhow::Result<LoadedConfig> {
    match &cli.config {
        Some(path) => config::load(path),
        None => bail!("this subcommand needs --config (or CADLAG_CONFIG)"),
    }
}

fn simulate(cli: &Cli) -> anyhow::Result<bool> {
    let loaded = load_config(cli)?;
    let mut scenario = loaded.scenario()?.clone();
    if let Some(seed) = cli.seed {
        scenario.seed = seed;
    }
    let reps = match &loaded.parsed.simulate {
        Some(s) if s.reps > 0 => s.reps,
        Some(_) => bail!("[simulate] reps must be at least 1"),
        None => bail!("config has no [simulate] section"),
    };

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cli.workers.max(1))
        .build()
        .context("building the worker pool")?;
    // Each replication owns its substream, so the draw order inside the pool
    // cannot change the bytes written.
    let docs: Vec<cadlag::Result<[String; 3]>> = pool.install(|| {
        (0..reps)
            .into_par_iter()
            .map(|rep| {
                let mut rng = substream(scenario.seed, SIM_TAG, 0, rep);
                let (m, a, w) = scenario_triplet(&scenario, &mut rng)?;
                Ok([
                    PathDoc::from_path(&m).to_json(),
                    PathDoc::from_path(a.as_path()).to_json(),
                    PathDoc::from_path(&w).to_json(),
                ])
            })
            .collect()
    });

    let mut writer = ManifestWriter::new(&cli.out, loaded.raw.clone(), scenario.seed)?;
    for (rep, doc) in docs.into_iter().enumerate() {
        let [m, a, w] = doc.with_context(|| format!("replication {rep}"))?;
        writer.emit(&format!("sim_rep{rep}_martingale.json"), m.as_bytes())?;
        writer.emit(&format!("sim_rep{rep}_clock.json"), a.as_bytes())?;
        writer.emit(&format!("sim_rep{rep}_walk.json"), w.as_bytes())?;
    }
    writer.finish()?;
    println!("simulate: {reps} replications in {}", cli.out.display());
    Ok(true)
}

fn probe(cli: &Cli, name: &str) -> anyhow::Result<bool> {
    let loaded = load_config(cli)?;
    let report = build_report(cli, &loaded, name)?;

    let mut writer = ManifestWriter::new(&cli.out, loaded.raw.clone(), report.seed())?;
    writer.emit(&format!("{name}.csv"), report.to_csv().as_bytes())?;
    writer.emit(&format!("{name}.json"), report.to_json().as_bytes())?;
    writer.finish()?;

    let verdict = if report.passed() { "pass" } else { "FAIL" };
    println!("probe {name}: {} cells, {verdict}", report.cells().len());
    for note in report.notes() {
        println!("  note: {note}");
    }
    Ok(report.passed())
}

fn build_report(cli: &Cli, loaded: &LoadedConfig, name: &str) -> anyhow::Result<ProbeReport> {
    let sections = &loaded.parsed.probe;
    // The occupation diagnostic carries its own seed; everything else reads
    // the scenario section.
    if name == "occupation" {
        let Some(s) = &sections.occupation else {
            bail!("config has no [probe.occupation] section");
        };
        let seed = cli.seed.unwrap_or(s.seed);
        let potential = RadialPotential::builtin(&s.potential)?;
        return Ok(occupation_probe(&potential, &s.n_grid, s.reps, s.step, seed)?);
    }

    let mut scenario = loaded.scenario()?.clone();
    if let Some(seed) = cli.seed {
        scenario.seed = seed;
    }
    let report = match name {
        "tightness" => {
            let Some(s) = &sections.tightness else {
                bail!("config has no [probe.tightness] section");
            };
            tightness_table(&scenario, s.kind, &s.delta_grid, &s.n_grid, s.eps, s.t_end, s.reps)?
        }
        "fdd" => {
            let Some(s) = &sections.fdd else {
                bail!("config has no [probe.fdd] section");
            };
            fdd_probe(&scenario, &s.times, &s.n_grid, s.reps, s.target)?
        }
        "l2w" => {
            let Some(s) = &sections.l2w else {
                bail!("config has no [probe.l2w] section");
            };
            l2w_probe(&scenario, &s.n_grid, s.reps, &s.truncation.to_truncation())?
        }
        "compensator" => {
            let Some(s) = &sections.compensator else {
                bail!("config has no [probe.compensator] section");
            };
            compensator_probe(&scenario, &s.t_grid, &s.n_grid, s.reps)?
        }
        "lenglart" => {
            let Some(s) = &sections.lenglart else {
                bail!("config has no [probe.lenglart] section");
            };
            let pairs = lenglart_pairs(&scenario, s.reps)?;
            lenglart_check(&pairs, &s.eps_grid, &s.eta_grid, s.tau)?
        }
        "sigma_tilde" => {
            let Some(s) = &sections.sigma_tilde else {
                bail!("config has no [probe.sigma_tilde] section");
            };
            sigma_tilde_probe(&scenario, s.reps, s.n)?
        }
        other => bail!(
            "unknown probe {other:?}; known: tightness, fdd, l2w, compensator, lenglart, \
             sigma_tilde, occupation"
        ),
    };
    Ok(report)
}

fn cv(name: &str, tol: f64) -> anyhow::Result<bool> {
    let potential = RadialPotential::builtin(name)?;
    let grad = cv_quadrature(&potential, CvMethod::Gradient, tol)?;
    let log = cv_quadrature(&potential, CvMethod::LogKernel, tol)?;
    let gap = (grad - log).abs();
    println!("gradient route:   {grad:.12}");
    println!("log kernel route: {log:.12}");
    println!("gap: {gap:.3e} (budget {:.3e})", 2.0 * tol);
    Ok(gap <= 2.0 * tol)
}

fn selftest() -> anyhow::Result<bool> {
    let checks = run_selftests();
    let mut all = true;
    for c in &checks {
        println!("{} {}: {}", if c.pass { "PASS" } else { "FAIL" }, c.name, c.detail);
        all &= c.pass;
    }
    let failed = checks.iter().filter(|c| !c.pass).count();
    println!("{} checks, {failed} failed", checks.len());
    Ok(all)
}
