//! Typed TOML configuration. Every section rejects unknown keys so a typo
//! fails the run instead of silently changing an experiment.

use anyhow::{bail, Context};
use cadlag::{FddTarget, L2wTruncation, ModulusKind, ScenarioConfig};
use serde::Deserialize;
use std::path::Path;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub scenario: Option<ScenarioConfig>,
    pub simulate: Option<SimulateSection>,
    #[serde(default)]
    pub probe: ProbeSections,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimulateSection {
    pub reps: u64,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProbeSections {
    pub tightness: Option<TightnessSection>,
    pub fdd: Option<FddSection>,
    pub l2w: Option<L2wSection>,
    pub compensator: Option<CompensatorSection>,
    pub lenglart: Option<LenglartSection>,
    pub sigma_tilde: Option<SigmaTildeSection>,
    pub occupation: Option<OccupationSection>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TightnessSection {
    pub kind: ModulusKind,
    pub delta_grid: Vec<f64>,
    pub n_grid: Vec<usize>,
    pub eps: f64,
    pub t_end: f64,
    pub reps: u64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FddSection {
    pub times: Vec<f64>,
    pub n_grid: Vec<usize>,
    pub reps: u64,
    pub target: FddTarget,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct L2wSection {
    pub n_grid: Vec<usize>,
    pub reps: u64,
    #[serde(default)]
    pub truncation: TruncationSection,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TruncationSection {
    pub k_max: usize,
    pub l_max: usize,
    pub quad_tol: f64,
}

impl Default for TruncationSection {
    fn default() -> Self {
        let t = L2wTruncation::default();
        TruncationSection { k_max: t.k_max, l_max: t.l_max, quad_tol: t.quad_tol }
    }
}

impl TruncationSection {
    pub fn to_truncation(&self) -> L2wTruncation {
        L2wTruncation { k_max: self.k_max, l_max: self.l_max, quad_tol: self.quad_tol }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CompensatorSection {
    pub t_grid: Vec<f64>,
    pub n_grid: Vec<usize>,
    pub reps: u64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LenglartSection {
    pub reps: u64,
    pub eps_grid: Vec<f64>,
    pub eta_grid: Vec<f64>,
    pub tau: f64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SigmaTildeSection {
    pub reps: u64,
    pub n: usize,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OccupationSection {
    pub potential: String,
    pub n_grid: Vec<usize>,
    pub reps: u64,
    pub step: f64,
    pub seed: u64,
}

/// The parsed config plus the raw text it came from, kept for the manifest.
pub struct LoadedConfig {
    pub parsed: FileConfig,
    pub raw: String,
}

pub fn load(path: &Path) -> anyhow::Result<LoadedConfig> {
    let raw = std::fs::read_to_string(path)
        .with_context(|| format!("reading config {}", path.display()))?;
    let parsed: FileConfig =
        toml::from_str(&raw).with_context(|| format!("parsing config {}", path.display()))?;
    Ok(LoadedConfig { parsed, raw })
}

impl LoadedConfig {
    /// The scenario section, required by most subcommands.
    pub fn scenario(&self) -> anyhow::Result<&ScenarioConfig> {
        match &self.parsed.scenario {
            Some(s) => Ok(s),
            None => bail!("config has no [scenario] section"),
        }
    }
}
