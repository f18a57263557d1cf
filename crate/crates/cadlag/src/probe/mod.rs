//! Monte Carlo probes: each one turns a limit hypothesis into a table of
//! estimates with standard errors and declared pass thresholds.
//!
//! Replications are keyed `(seed, probe tag, cell, rep)` through
//! [`crate::rng::substream`], so a report is reproducible bit for bit from its
//! manifest no matter how the work is scheduled. Convergence without a
//! closed-form limit is always operationalized as a Cauchy criterion across a
//! geometric grid of scale indices; the frozen two-sample threshold lives in
//! [`KS_CAUCHY`].

mod compensator;
mod fdd;
mod occupation;
mod terminal;
mod tightness;
mod weak_metric;

pub use compensator::{compensator_probe, lenglart_check, lenglart_pairs};
pub use fdd::{fdd_probe, FddTarget};
pub use occupation::occupation_probe;
pub use terminal::{sigma_tilde_probe, sigma_tilde_sample};
pub use tightness::tightness_table;
pub use weak_metric::l2w_probe;

use serde::Serialize;

use crate::path::MonotonePath;
use crate::rng::mix;

// Substream tags: one per probe family, fixed forever.
pub(crate) const TAG_TIGHTNESS: u64 = 1;
pub(crate) const TAG_FDD: u64 = 2;
pub(crate) const TAG_COMPENSATOR: u64 = 3;
pub(crate) const TAG_L2W: u64 = 4;
pub(crate) const TAG_LENGLART: u64 = 5;
pub(crate) const TAG_SIGMA: u64 = 6;
pub(crate) const TAG_OCCUPATION: u64 = 7;

/// Frozen threshold for Cauchy-style two-sample KS cells. Chosen above the
/// 95% same-law band at the default replication counts so that residual
/// drift between consecutive scale indices has margin to live in.
pub const KS_CAUCHY: f64 = 0.03;

/// Asymptotic 95% two-sample KS band for equal sample sizes.
pub fn ks_two_sample_band(reps: u64) -> f64 {
    1.36 * (2.0 / reps as f64).sqrt()
}

/// Asymptotic 95% one-sample KS band.
pub fn ks_one_sample_band(reps: u64) -> f64 {
    1.36 / (reps as f64).sqrt()
}

/// One grid cell: axis values (aligned with the report's axis names), the
/// estimate with its Monte Carlo standard error, and the verdict against the
/// declared threshold.
#[derive(Clone, Debug, Serialize)]
pub struct ProbeCell {
    pub axes: Vec<f64>,
    pub estimate: f64,
    pub stderr: f64,
    pub threshold: f64,
    pub pass: bool,
}

/// A finished probe run. Cells are immutable once assembled; the manifest tag
/// digests the probe name, seed, and full configuration so reports can be
/// matched to the run that produced them.
#[derive(Clone, Debug, Serialize)]
pub struct ProbeReport {
    probe: String,
    axis_names: Vec<String>,
    cells: Vec<ProbeCell>,
    notes: Vec<String>,
    seed: u64,
    manifest_tag: String,
}

impl ProbeReport {
    pub(crate) fn new(probe: &str, axis_names: &[&str], seed: u64, config_desc: &str) -> Self {
        ProbeReport {
            probe: probe.into(),
            axis_names: axis_names.iter().map(|s| s.to_string()).collect(),
            cells: Vec::new(),
            notes: Vec::new(),
            seed,
            manifest_tag: manifest_tag(probe, seed, config_desc),
        }
    }

    pub(crate) fn push_cell(&mut self, axes: Vec<f64>, estimate: f64, stderr: f64, threshold: f64, pass: bool) {
        debug_assert_eq!(axes.len(), self.axis_names.len());
        self.cells.push(ProbeCell { axes, estimate, stderr, threshold, pass });
    }

    pub(crate) fn push_note(&mut self, note: String) {
        self.notes.push(note);
    }

    pub fn probe(&self) -> &str {
        &self.probe
    }

    pub fn axis_names(&self) -> &[String] {
        &self.axis_names
    }

    pub fn cells(&self) -> &[ProbeCell] {
        &self.cells
    }

    pub fn notes(&self) -> &[String] {
        &self.notes
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn manifest_tag(&self) -> &str {
        &self.manifest_tag
    }

    /// The cell for given axis values, if present.
    pub fn cell(&self, axes: &[f64]) -> Option<&ProbeCell> {
        self.cells.iter().find(|c| c.axes == axes)
    }

    pub fn passed(&self) -> bool {
        self.cells.iter().all(|c| c.pass)
    }

    /// One row per cell: `probe,<axes...>,estimate,stderr,threshold,pass`,
    /// pass encoded 1/0.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("probe");
        for name in &self.axis_names {
            s.push(',');
            s.push_str(name);
        }
        s.push_str(",estimate,stderr,threshold,pass\n");
        for c in &self.cells {
            s.push_str(&self.probe);
            for a in &c.axes {
                s.push(',');
                s.push_str(&format!("{a}"));
            }
            s.push_str(&format!(
                ",{},{},{},{}\n",
                c.estimate,
                c.stderr,
                c.threshold,
                u8::from(c.pass)
            ));
        }
        s
    }

    /// The JSON summary: the full report plus the aggregate verdict.
    pub fn to_json(&self) -> String {
        #[derive(Serialize)]
        struct Summary<'a> {
            #[serde(flatten)]
            report: &'a ProbeReport,
            passed: bool,
        }
        serde_json::to_string_pretty(&Summary { report: self, passed: self.passed() })
            .expect("report serialization cannot fail")
    }
}

/// Deterministic 64-bit digest of the run coordinates, hex-encoded.
fn manifest_tag(probe: &str, seed: u64, config_desc: &str) -> String {
    let mut h = mix(seed, probe.len() as u64);
    for chunk in probe.as_bytes().chunks(8).chain(config_desc.as_bytes().chunks(8)) {
        let mut word = [0u8; 8];
        word[..chunk.len()].copy_from_slice(chunk);
        h = mix(h, u64::from_le_bytes(word));
    }
    format!("{h:016x}")
}

/// Compensator proxies live on `[0, A_terminal]` and are constant afterwards,
/// so reads past the horizon return the terminal value instead of erroring.
pub(crate) fn eval_capped(p: &MonotonePath, t: f64) -> f64 {
    if t >= p.horizon() {
        p.terminal_value()
    } else {
        p.eval1(t).expect("t within [0, horizon)")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample_report() -> ProbeReport {
        let mut r = ProbeReport::new("demo", &["n", "t"], 7, "cfg");
        r.push_cell(vec![100.0, 0.5], 0.01, 0.002, 0.03, true);
        r.push_cell(vec![100.0, 1.0], 0.05, 0.002, 0.03, false);
        r.push_note("a note".into());
        r
    }

    #[test]
    fn csv_layout_is_stable() {
        let r = sample_report();
        let csv = r.to_csv();
        let mut lines = csv.lines();
        assert_eq!(lines.next().unwrap(), "probe,n,t,estimate,stderr,threshold,pass");
        assert_eq!(lines.next().unwrap(), "demo,100,0.5,0.01,0.002,0.03,1");
        assert_eq!(lines.next().unwrap(), "demo,100,1,0.05,0.002,0.03,0");
        assert!(!r.passed());
    }

    #[test]
    fn json_carries_the_verdict() {
        let r = sample_report();
        let parsed: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(parsed["passed"], serde_json::Value::Bool(false));
        assert_eq!(parsed["probe"], "demo");
        assert_eq!(parsed["cells"].as_array().unwrap().len(), 2);
        assert_eq!(parsed["manifest_tag"].as_str().unwrap().len(), 16);
    }

    #[test]
    fn manifest_tag_distinguishes_runs() {
        let a = manifest_tag("p", 1, "cfg");
        assert_eq!(a, manifest_tag("p", 1, "cfg"));
        assert_ne!(a, manifest_tag("p", 2, "cfg"));
        assert_ne!(a, manifest_tag("q", 1, "cfg"));
        assert_ne!(a, manifest_tag("p", 1, "cfg2"));
    }

    #[test]
    fn cell_lookup_matches_axes() {
        let r = sample_report();
        assert_eq!(r.cell(&[100.0, 1.0]).unwrap().estimate, 0.05);
        assert!(r.cell(&[100.0, 2.0]).is_none());
    }

    #[test]
    fn capped_reads_freeze_at_the_terminal() {
        let a = crate::path::MonotonePath::step(&[0.0, 1.0], &[0.0, 3.0], 2.0).unwrap();
        assert_eq!(eval_capped(&a, 0.5), 0.0);
        assert_eq!(eval_capped(&a, 1.5), 3.0);
        assert_eq!(eval_capped(&a, 2.0), 3.0);
        assert_eq!(eval_capped(&a, 10.0), 3.0);
    }
}
