//! Experiment configuration files.
//!
//! A config is a TOML document with optional sections; anything missing takes
//! the default below and command-line flags override individual keys.
//!
//! ```toml
//! [model]
//! n = 400
//! p = 0.8
//! q = 0.4
//! tau = 0.12
//!
//! [experiment]
//! trials = 200
//! seed = 7
//! statistic = "triangle"   # or "clique4", "clique5"
//! pilot_fraction = 0.5
//!
//! [recovery]
//! ell = 3
//! mode = "auto"            # "exact", "mc" or "auto"
//! mc_samples = 200000
//!
//! [sweep]
//! a = [0.1, 0.2]
//! b = [0.2, 0.6, 0.9]
//! n = [200, 400]
//! q_ratio = 0.5
//!
//! [lowdeg]
//! max_degree = 4
//! mc_samples = 1000000
//! ```

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{ensure, Error, Result};
use crate::lowdeg::LowDegConfig;
use crate::models::ModelParams;
use crate::recovery::{RecoveryConfig, SawMode};
use crate::statistics::DEFAULT_SAW_BUDGET;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelSection {
    pub n: usize,
    pub p: f64,
    pub q: f64,
    pub tau: f64,
}

impl Default for ModelSection {
    fn default() -> Self {
        ModelSection { n: 400, p: 0.8, q: 0.4, tau: 0.12 }
    }
}

impl ModelSection {
    pub fn params(&self) -> Result<ModelParams> {
        ModelParams::new(self.n, self.p, self.q, self.tau)
    }
}

/// Polynomial statistic used by the detection experiments.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Statistic {
    /// Signed triangle count `S₃`.
    Triangle,
    /// Signed 4-clique count.
    Clique4,
    /// Signed 5-clique count.
    Clique5,
}

impl Statistic {
    pub fn name(self) -> &'static str {
        match self {
            Statistic::Triangle => "triangle",
            Statistic::Clique4 => "clique4",
            Statistic::Clique5 => "clique5",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "triangle" => Ok(Statistic::Triangle),
            "clique4" => Ok(Statistic::Clique4),
            "clique5" => Ok(Statistic::Clique5),
            other => Err(Error::invalid(format!("unknown statistic `{other}` (expected triangle, clique4 or clique5)"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentSection {
    pub trials: usize,
    pub seed: u64,
    pub statistic: Statistic,
    /// Share of trials used to place the detection threshold.
    pub pilot_fraction: f64,
    /// Run both arms under the null (a no-signal control).
    pub null_control: bool,
}

impl Default for ExperimentSection {
    fn default() -> Self {
        ExperimentSection { trials: 200, seed: 0, statistic: Statistic::Triangle, pilot_fraction: 0.5, null_control: false }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModeName {
    Exact,
    Mc,
    Auto,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RecoverySection {
    pub ell: usize,
    /// Overrides the default `δ = (3/ℓ)(1.1)`.
    pub delta: Option<f64>,
    /// Overrides `ε = τ n^{−δ/4}`.
    pub epsilon: Option<f64>,
    pub mode: ModeName,
    pub mc_samples: u64,
    pub budget: f64,
}

impl Default for RecoverySection {
    fn default() -> Self {
        RecoverySection { ell: 3, delta: None, epsilon: None, mode: ModeName::Auto, mc_samples: 200_000, budget: DEFAULT_SAW_BUDGET }
    }
}

impl RecoverySection {
    pub fn config(&self, params: &ModelParams) -> Result<RecoveryConfig> {
        let base = match (self.delta, self.epsilon) {
            (_, Some(eps)) => {
                let delta = self.delta.unwrap_or(3.0 / self.ell.max(1) as f64 * 1.1);
                RecoveryConfig::with_epsilon(params, self.ell, eps, delta)?
            }
            (Some(delta), None) => RecoveryConfig::with_delta(params, self.ell, delta)?,
            (None, None) => RecoveryConfig::new(params, self.ell)?,
        };
        let mode = match self.mode {
            ModeName::Exact => SawMode::Exact,
            ModeName::Mc => SawMode::MonteCarlo { samples: self.mc_samples },
            ModeName::Auto => SawMode::Auto { samples: self.mc_samples },
        };
        ensure!(self.budget > 0.0, "SAW budget must be positive");
        Ok(base.mode(mode).budget(self.budget))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepSection {
    /// Exponents with `p = n^{−a}`.
    pub a: Vec<f64>,
    /// Exponents with `τ = n^{−b}`.
    pub b: Vec<f64>,
    pub n: Vec<usize>,
    /// `q = q_ratio · p`.
    pub q_ratio: f64,
    /// Skip the recovery half of each cell.
    pub detection_only: bool,
    /// Run cells concurrently as well as the trials inside them.
    pub parallel_cells: bool,
}

impl Default for SweepSection {
    fn default() -> Self {
        SweepSection { a: vec![0.1, 0.2], b: vec![0.2, 0.6, 0.9], n: vec![200, 400], q_ratio: 0.5, detection_only: false, parallel_cells: false }
    }
}

impl SweepSection {
    pub fn validate(&self) -> Result<()> {
        ensure!(!self.a.is_empty() && !self.b.is_empty() && !self.n.is_empty(), "sweep grid must be non-empty");
        for &x in self.a.iter().chain(&self.b) {
            ensure!(x > 0.0 && x < 1.0, "sweep exponents must lie in (0, 1), got {x}");
        }
        ensure!(self.q_ratio > 0.0 && self.q_ratio < 1.0, "q_ratio must lie in (0, 1), got {}", self.q_ratio);
        Ok(())
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub model: ModelSection,
    pub experiment: ExperimentSection,
    pub recovery: RecoverySection,
    pub sweep: SweepSection,
    pub lowdeg: LowDegConfig,
}

impl ExperimentConfig {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| {
            let line = e.span().map(|s| text[..s.start.min(text.len())].matches('\n').count() + 1).unwrap_or(0);
            Error::Parse { line, msg: e.message().to_string() }
        })
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_toml_str(&std::fs::read_to_string(path)?)
    }

    pub fn to_toml_string(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    pub fn validate(&self) -> Result<()> {
        ensure!(self.experiment.trials >= 1, "trials must be at least 1");
        ensure!(
            self.experiment.pilot_fraction > 0.0 && self.experiment.pilot_fraction < 1.0,
            "pilot_fraction must lie in (0, 1)"
        );
        self.sweep.validate()?;
        self.lowdeg.validate()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn module_example_parses() {
        let doc = include_str!("config.rs");
        let start = doc.find("//! ```toml\n").unwrap() + "//! ```toml\n".len();
        let end = start + doc[start..].find("//! ```").unwrap();
        let text: String = doc[start..end].lines().map(|l| l.trim_start_matches("//!").trim_start()).collect::<Vec<_>>().join("\n");
        let cfg = ExperimentConfig::from_toml_str(&text).unwrap();
        assert_eq!(cfg.model.n, 400);
        assert_eq!(cfg.experiment.statistic, Statistic::Triangle);
        assert_eq!(cfg.recovery.mode, ModeName::Auto);
        assert_eq!(cfg.sweep.b, vec![0.2, 0.6, 0.9]);
        assert_eq!(cfg.lowdeg.max_degree, 4);
        cfg.validate().unwrap();
    }

    #[test]
    fn defaults_and_round_trip() {
        let cfg = ExperimentConfig::from_toml_str("").unwrap();
        assert_eq!(cfg, ExperimentConfig::default());
        let again = ExperimentConfig::from_toml_str(&cfg.to_toml_string()).unwrap();
        assert_eq!(again, cfg);
    }

    #[test]
    fn errors_carry_line_numbers() {
        let err = ExperimentConfig::from_toml_str("[model]\nn = 10\np = 0.5\nq = 0.2\ntau = 0.1\ncolour = 3\n").unwrap_err();
        match err {
            Error::Parse { line, .. } => assert_eq!(line, 6),
            other => panic!("{other:?}"),
        }
        assert_eq!(ExperimentConfig::from_toml_str("[experiment]\ntrials = \"x\"").unwrap_err().exit_code(), 2);
    }

    #[test]
    fn recovery_section_builds_configs() {
        let params = ModelParams::new(500, 0.9, 0.3, 0.15).unwrap();
        let sec = RecoverySection { epsilon: Some(0.01), ..Default::default() };
        assert_eq!(sec.config(&params).unwrap().epsilon(), 0.01);
        let sec = RecoverySection { epsilon: Some(0.2), ..Default::default() };
        assert!(sec.config(&params).is_err());
        let sec = RecoverySection { delta: Some(2.0), mode: ModeName::Exact, ..Default::default() };
        let cfg = sec.config(&params).unwrap();
        assert!((cfg.epsilon() - 0.15 * 500f64.powf(-0.5)).abs() < 1e-15);
        assert_eq!(cfg.mode, SawMode::Exact);
    }
}
