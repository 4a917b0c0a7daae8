use std::time::Instant;

use rand::RngCore;

use super::config::{ExperimentConfig, ExperimentSection, Statistic};
use super::{ExperimentResult, LowDegRow, RhoRow};
use crate::error::{ensure, Result};
use crate::graph::Graph;
use crate::lowdeg::{Advantage, RhoTable};
use crate::models::{sample_null, sample_planted, ModelParams};
use crate::numeric::RunningStats;
use crate::par;
use crate::recovery::{estimate_pair, kappa_threshold, RecoveryConfig, SawMode};
use crate::rng::{derive_stream, Label};
use crate::statistics::{signed_clique_count, signed_triangle, standardize};

/// Fewest trials accepted by [`detection_experiment`]; both halves of the
/// pilot/hold-out split need enough samples to estimate means.
pub const MIN_DETECTION_TRIALS: usize = 20;

/// The detection statistic of `a`, standardized around `r`.
pub fn evaluate_statistic(a: &Graph, params: &ModelParams, statistic: Statistic) -> Result<f64> {
    let m = standardize(a, params.r())?;
    match statistic {
        Statistic::Triangle => signed_triangle(&m),
        Statistic::Clique4 => signed_clique_count(&m, 4),
        Statistic::Clique5 => signed_clique_count(&m, 5),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DetectionOutcome {
    pub p_values: Vec<f64>,
    pub q_values: Vec<f64>,
    pub mean_p: f64,
    pub var_p: f64,
    pub mean_q: f64,
    pub var_q: f64,
    /// `|mean_P − mean_Q| / max(std_P, std_Q)` over all trials.
    pub separation_ratio: f64,
    /// Midpoint of the pilot means.
    pub threshold: f64,
    /// Held-out false alarm rate (null declared planted).
    pub type_i: f64,
    /// Held-out miss rate (planted declared null).
    pub type_ii: f64,
    /// `(type_i + type_ii) / 2`.
    pub holdout_error: f64,
}

/// Paired planted/null trials of a detection statistic.
///
/// The first `pilot_fraction` of the trials place the threshold halfway
/// between the two arm means; the remaining trials measure the errors.
pub fn detection_experiment(params: &ModelParams, exp: &ExperimentSection, label: &str) -> Result<DetectionOutcome> {
    ensure!(exp.trials >= MIN_DETECTION_TRIALS, "detection needs at least {MIN_DETECTION_TRIALS} trials, got {}", exp.trials);
    ensure!(exp.pilot_fraction > 0.0 && exp.pilot_fraction < 1.0, "pilot_fraction must lie in (0, 1)");
    let pilot = ((exp.trials as f64 * exp.pilot_fraction).round() as usize).clamp(1, exp.trials - 1);
    let values = par::map_indexed(exp.trials, |t| -> Result<(f64, f64)> {
        let stream = |arm: &str| derive_stream(exp.seed, &[Label::Tag(label), Label::Tag("detect"), Label::Index(t as u64), Label::Tag(arm)]);
        let planted = if exp.null_control { sample_null(params, &mut stream("P")) } else { sample_planted(params, &mut stream("P"))?.0 };
        let null = sample_null(params, &mut stream("Q"));
        Ok((evaluate_statistic(&planted, params, exp.statistic)?, evaluate_statistic(&null, params, exp.statistic)?))
    });
    let values = values.into_iter().collect::<Result<Vec<_>>>()?;
    let (p_values, q_values): (Vec<f64>, Vec<f64>) = values.into_iter().unzip();

    let stats = |xs: &[f64]| xs.iter().copied().collect::<RunningStats>();
    let (all_p, all_q) = (stats(&p_values), stats(&q_values));
    let spread = all_p.std_dev().max(all_q.std_dev());
    let gap = (all_p.mean() - all_q.mean()).abs();
    let separation_ratio = if spread > 0.0 { gap / spread } else if gap > 0.0 { f64::INFINITY } else { 0.0 };

    let (pilot_p, pilot_q) = (stats(&p_values[..pilot]), stats(&q_values[..pilot]));
    let threshold = 0.5 * (pilot_p.mean() + pilot_q.mean());
    let planted_high = pilot_p.mean() >= pilot_q.mean();
    let says_planted = |x: f64| if planted_high { x >= threshold } else { x <= threshold };
    let held = (exp.trials - pilot) as f64;
    let type_i = q_values[pilot..].iter().filter(|&&x| says_planted(x)).count() as f64 / held;
    let type_ii = p_values[pilot..].iter().filter(|&&x| !says_planted(x)).count() as f64 / held;

    Ok(DetectionOutcome {
        mean_p: all_p.mean(),
        var_p: all_p.variance(),
        mean_q: all_q.mean(),
        var_q: all_q.variance(),
        separation_ratio,
        threshold,
        type_i,
        type_ii,
        holdout_error: 0.5 * (type_i + type_ii),
        p_values,
        q_values,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RecoveryOutcome {
    pub trials: usize,
    /// Trials with `χ = 1`.
    pub positives: usize,
    pub kappa: f64,
    /// `P{χ̂ ≠ χ}`.
    pub error_rate: f64,
    pub error_rate_stderr: f64,
    /// `P{χ̂ = 0 | χ = 1}`; NaN without positives.
    pub miss_rate: f64,
    /// `P{χ̂ = 1 | χ = 0}`; NaN without negatives.
    pub false_alarm_rate: f64,
    /// `P{χ̂ ≠ χ} / τ`: below 1 beats the all-zero estimator.
    pub ratio_to_trivial: f64,
    pub ratio_stderr: f64,
}

/// Planted trials of the pairwise estimator for vertices 1 and 2.
pub fn recovery_experiment(params: &ModelParams, cfg: &RecoveryConfig, trials: usize, seed: u64, label: &str) -> Result<RecoveryOutcome> {
    ensure!(trials >= 1, "trials must be at least 1");
    let kappa = kappa_threshold(params, cfg.ell(), cfg.epsilon())?;
    let outcomes = par::map_indexed(trials, |t| -> Result<(bool, bool)> {
        let mut rng = derive_stream(seed, &[Label::Tag(label), Label::Tag("recover"), Label::Index(t as u64)]);
        let (g, z) = sample_planted(params, &mut rng)?;
        let walk_seed = derive_stream(seed, &[Label::Tag(label), Label::Tag("recover-walks"), Label::Index(t as u64)]).next_u64();
        let chi = z.dist(0, 1) <= params.tau() / 2.0;
        let chi_hat = estimate_pair(&g, params, &cfg.clone().seed(walk_seed))?;
        Ok((chi, chi_hat))
    });
    let outcomes = outcomes.into_iter().collect::<Result<Vec<_>>>()?;
    let positives = outcomes.iter().filter(|o| o.0).count();
    let misses = outcomes.iter().filter(|o| o.0 && !o.1).count();
    let false_alarms = outcomes.iter().filter(|o| !o.0 && o.1).count();
    let tf = trials as f64;
    let error_rate = (misses + false_alarms) as f64 / tf;
    let error_rate_stderr = (error_rate * (1.0 - error_rate) / tf).sqrt();
    let rate = |num: usize, den: usize| if den == 0 { f64::NAN } else { num as f64 / den as f64 };
    Ok(RecoveryOutcome {
        trials,
        positives,
        kappa,
        error_rate,
        error_rate_stderr,
        miss_rate: rate(misses, positives),
        false_alarm_rate: rate(false_alarms, trials - positives),
        ratio_to_trivial: error_rate / params.tau(),
        ratio_stderr: error_rate_stderr / params.tau(),
    })
}

fn echo(experiment: &str, cell: &str, params: &ModelParams, trials: usize, seed: u64) -> ExperimentResult {
    ExperimentResult {
        experiment: experiment.into(),
        cell: cell.into(),
        n: params.n(),
        p: params.p(),
        q: params.q(),
        tau: params.tau(),
        r: params.r(),
        mu: params.mu(),
        lambda: params.lambda(),
        trials,
        seed,
        status: "ok".into(),
        ..Default::default()
    }
}

fn fill_detection(row: &mut ExperimentResult, exp: &ExperimentSection, d: &DetectionOutcome) {
    row.statistic = Some(exp.statistic.name().into());
    row.null_control = Some(exp.null_control);
    row.pilot_fraction = Some(exp.pilot_fraction);
    row.mean_p = Some(d.mean_p);
    row.var_p = Some(d.var_p);
    row.mean_q = Some(d.mean_q);
    row.var_q = Some(d.var_q);
    row.separation_ratio = Some(d.separation_ratio);
    row.threshold = Some(d.threshold);
    row.type_i = Some(d.type_i);
    row.type_ii = Some(d.type_ii);
    row.holdout_error = Some(d.holdout_error);
}

fn mode_name(mode: SawMode) -> String {
    match mode {
        SawMode::Exact => "exact".into(),
        SawMode::MonteCarlo { samples } => format!("mc:{samples}"),
        SawMode::Auto { samples } => format!("auto:{samples}"),
    }
}

fn fill_recovery_config(row: &mut ExperimentResult, cfg: &RecoveryConfig) {
    row.ell = Some(cfg.ell());
    row.epsilon = Some(cfg.epsilon());
    row.delta = Some(cfg.delta());
    row.saw_mode = Some(mode_name(cfg.mode));
}

fn fill_recovery(row: &mut ExperimentResult, r: &RecoveryOutcome) {
    row.kappa = Some(r.kappa);
    row.positives = Some(r.positives);
    row.error_rate = Some(r.error_rate);
    row.error_rate_stderr = Some(r.error_rate_stderr);
    row.miss_rate = Some(r.miss_rate);
    row.false_alarm_rate = Some(r.false_alarm_rate);
    row.ratio_to_trivial = Some(r.ratio_to_trivial);
    row.ratio_stderr = Some(r.ratio_stderr);
}

/// `detect-power`: one row for the `[model]` parameters.
pub fn run_detection(cfg: &ExperimentConfig) -> Result<ExperimentResult> {
    cfg.validate()?;
    let start = Instant::now();
    let params = cfg.model.params()?;
    let outcome = detection_experiment(&params, &cfg.experiment, "detect-power")?;
    let mut row = echo("detect-power", "", &params, cfg.experiment.trials, cfg.experiment.seed);
    fill_detection(&mut row, &cfg.experiment, &outcome);
    row.wall_time_s = start.elapsed().as_secs_f64();
    Ok(row)
}

/// `recover`: one row for the `[model]` and `[recovery]` parameters.
pub fn run_recovery(cfg: &ExperimentConfig) -> Result<ExperimentResult> {
    cfg.validate()?;
    let start = Instant::now();
    let params = cfg.model.params()?;
    let rcfg = cfg.recovery.config(&params)?;
    let outcome = recovery_experiment(&params, &rcfg, cfg.experiment.trials, cfg.experiment.seed, "recover")?;
    let mut row = echo("recover", "", &params, cfg.experiment.trials, cfg.experiment.seed);
    fill_recovery_config(&mut row, &rcfg);
    fill_recovery(&mut row, &outcome);
    row.wall_time_s = start.elapsed().as_secs_f64();
    Ok(row)
}

/// `sweep-phase`: one row per `(a, b, n)` with `p = n^{−a}`, `τ = n^{−b}` and
/// `q = q_ratio · p`. A cell that cannot run records the reason in `status`
/// and the sweep moves on. Cells run one after another unless
/// `parallel_cells` is set; rows come back in grid order either way.
pub fn phase_sweep(cfg: &ExperimentConfig) -> Result<Vec<ExperimentResult>> {
    cfg.validate()?;
    let sweep = &cfg.sweep;
    let mut grid = Vec::new();
    for &n in &sweep.n {
        for &a in &sweep.a {
            for &b in &sweep.b {
                grid.push((a, b, n));
            }
        }
    }
    let run = |k: usize| sweep_cell(cfg, grid[k]);
    Ok(if sweep.parallel_cells { par::map_indexed(grid.len(), run) } else { (0..grid.len()).map(run).collect() })
}

fn sweep_cell(cfg: &ExperimentConfig, (a, b, n): (f64, f64, usize)) -> ExperimentResult {
    let start = Instant::now();
    let cell = format!("a={a};b={b};n={n}");
    let nf = n as f64;
    let (p, tau) = (nf.powf(-a), nf.powf(-b));
    let q = cfg.sweep.q_ratio * p;
    let mut row = match ModelParams::new(n, p, q, tau) {
        Ok(params) => {
            let mut row = echo("sweep-phase", &cell, &params, cfg.experiment.trials, cfg.experiment.seed);
            let mut problems = Vec::new();
            match detection_experiment(&params, &cfg.experiment, &cell) {
                Ok(d) => fill_detection(&mut row, &cfg.experiment, &d),
                Err(e) => problems.push(format!("detection: {e}")),
            }
            if !cfg.sweep.detection_only {
                match cfg.recovery.config(&params) {
                    Ok(rcfg) => {
                        fill_recovery_config(&mut row, &rcfg);
                        match recovery_experiment(&params, &rcfg, cfg.experiment.trials, cfg.experiment.seed, &cell) {
                            Ok(r) => fill_recovery(&mut row, &r),
                            Err(e) => problems.push(format!("recovery: {e}")),
                        }
                    }
                    Err(e) => problems.push(format!("recovery: {e}")),
                }
            }
            if !problems.is_empty() {
                row.status = problems.join("; ");
            }
            row
        }
        Err(e) => ExperimentResult {
            experiment: "sweep-phase".into(),
            cell: cell.clone(),
            n,
            p,
            q,
            tau,
            trials: cfg.experiment.trials,
            seed: cfg.experiment.seed,
            status: format!("parameters: {e}"),
            ..Default::default()
        },
    };
    row.a = Some(a);
    row.b = Some(b);
    row.wall_time_s = start.elapsed().as_secs_f64();
    row
}

/// Rows of the shape breakdown written by `lowdeg-diag`.
pub fn lowdeg_rows(adv: &Advantage) -> Vec<LowDegRow> {
    adv.breakdown
        .iter()
        .map(|c| LowDegRow {
            shape_id: c.shape.id(),
            edges: c.shape.num_edges(),
            vertices: c.shape.num_vertices(),
            components: c.shape.components(),
            embedding_count: c.embedding_count,
            phi_mean: c.phi.estimate,
            phi_stderr: c.phi.stderr,
            contribution: c.contribution,
        })
        .collect()
}

/// Rows of the `ρ` table written by `lowdeg-diag --rho-out`.
pub fn rho_rows(table: &RhoTable) -> Vec<RhoRow> {
    table
        .entries()
        .iter()
        .map(|e| RhoRow {
            shape_id: e.shape.id(),
            edges: e.shape.num_edges(),
            vertices: e.shape.num_vertices(),
            multiplicity: e.multiplicity,
            rho: e.rho,
            rho_stderr: e.stderr,
            p_alpha_alpha: e.p_alpha_alpha.estimate,
            p_alpha_alpha_stderr: e.p_alpha_alpha.stderr,
        })
        .collect()
}
