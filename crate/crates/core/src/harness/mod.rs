//! Experiment drivers, configuration and CSV output.
//!
//! Every random draw in an experiment comes from [`derive_stream`] keyed by
//! the master seed, an experiment label, the trial index and (for paired
//! designs) the arm, so results are reproducible and independent of how
//! trials are scheduled across threads.

mod config;
mod experiments;
pub mod oracle;

pub use crate::rng::derive_stream;
pub use config::{ExperimentConfig, ExperimentSection, ModeName, ModelSection, RecoverySection, Statistic, SweepSection};
pub use experiments::{
    detection_experiment, evaluate_statistic, lowdeg_rows, phase_sweep, recovery_experiment, rho_rows, run_detection, run_recovery,
    DetectionOutcome, RecoveryOutcome,
};

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::Result;

/// Header comment of result files. Bump on any column change.
pub const RESULTS_SCHEMA: &str = "planted-cycle-results/v1";
/// Header comment of shape-breakdown files.
pub const LOWDEG_SCHEMA: &str = "planted-cycle-lowdeg/v1";
/// Header comment of `ρ` table files.
pub const RHO_SCHEMA: &str = "planted-cycle-rho/v1";

/// One row of a results file: a full parameter echo followed by whichever
/// detection and recovery summaries apply. `wall_time_s` is always last and
/// is the only column that may differ between identical runs.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ExperimentResult {
    pub experiment: String,
    pub cell: String,
    pub n: usize,
    pub p: f64,
    pub q: f64,
    pub tau: f64,
    pub a: Option<f64>,
    pub b: Option<f64>,
    pub r: f64,
    pub mu: f64,
    pub lambda: f64,
    pub trials: usize,
    pub seed: u64,
    pub statistic: Option<String>,
    pub null_control: Option<bool>,
    pub pilot_fraction: Option<f64>,
    pub mean_p: Option<f64>,
    pub var_p: Option<f64>,
    pub mean_q: Option<f64>,
    pub var_q: Option<f64>,
    pub separation_ratio: Option<f64>,
    pub threshold: Option<f64>,
    pub type_i: Option<f64>,
    pub type_ii: Option<f64>,
    pub holdout_error: Option<f64>,
    pub ell: Option<usize>,
    pub epsilon: Option<f64>,
    pub delta: Option<f64>,
    pub saw_mode: Option<String>,
    pub kappa: Option<f64>,
    pub positives: Option<usize>,
    pub error_rate: Option<f64>,
    pub error_rate_stderr: Option<f64>,
    pub miss_rate: Option<f64>,
    pub false_alarm_rate: Option<f64>,
    pub ratio_to_trivial: Option<f64>,
    pub ratio_stderr: Option<f64>,
    pub status: String,
    pub wall_time_s: f64,
}

fn write_with_schema<W: Write, T: Serialize>(mut w: W, schema: &str, rows: &[T]) -> Result<()> {
    writeln!(w, "# schema={schema}")?;
    let mut out = csv::Writer::from_writer(w);
    for row in rows {
        out.serialize(row)?;
    }
    out.flush()?;
    Ok(())
}

/// Writes `rows` as CSV preceded by the schema comment line.
pub fn write_results<W: Write>(w: W, rows: &[ExperimentResult]) -> Result<()> {
    write_with_schema(w, RESULTS_SCHEMA, rows)
}

/// Reads a results file written by [`write_results`].
pub fn read_results<R: std::io::Read>(r: R) -> Result<Vec<ExperimentResult>> {
    let mut reader = csv::ReaderBuilder::new().comment(Some(b'#')).from_reader(r);
    Ok(reader.deserialize().collect::<std::result::Result<Vec<_>, _>>()?)
}

/// The file contents with the trailing wall-time column removed from every
/// line, for reproducibility comparisons.
pub fn strip_wall_time(text: &str) -> String {
    text.lines()
        .map(|line| if line.starts_with('#') { line } else { line.rsplit_once(',').map_or(line, |(head, _)| head) })
        .collect::<Vec<_>>()
        .join("\n")
}

/// One shape of the truncated advantage, as written by `lowdeg-diag`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LowDegRow {
    pub shape_id: String,
    pub edges: usize,
    pub vertices: usize,
    pub components: usize,
    pub embedding_count: f64,
    pub phi_mean: f64,
    pub phi_stderr: f64,
    pub contribution: f64,
}

pub fn write_lowdeg<W: Write>(w: W, rows: &[LowDegRow]) -> Result<()> {
    write_with_schema(w, LOWDEG_SCHEMA, rows)
}

/// One rooted shape of the `ρ` table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RhoRow {
    pub shape_id: String,
    pub edges: usize,
    pub vertices: usize,
    pub multiplicity: f64,
    pub rho: f64,
    pub rho_stderr: f64,
    pub p_alpha_alpha: f64,
    pub p_alpha_alpha_stderr: f64,
}

pub fn write_rho<W: Write>(w: W, rows: &[RhoRow]) -> Result<()> {
    write_with_schema(w, RHO_SCHEMA, rows)
}
