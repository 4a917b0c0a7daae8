//! Pairwise recovery of the geometric graph from the walk statistic `T`.
//!
//! Given the endpoint distance `u = d(z_1, z_2)`, the conditional mean of `T`
//! has the closed form
//!
//! ```text
//! E[T | u] = (n−2)_ℓ · τ^ℓ · λ^{ℓ+1} · P(ℓ/2 + u/τ − 1/2 ≤ S_ℓ ≤ ℓ/2 + u/τ + 1/2)
//! ```
//!
//! with `S_ℓ` Irwin–Hall of order `ℓ` and `(n−2)_ℓ` the number of ordered
//! tuples of distinct intermediates. The estimator thresholds `T` halfway
//! between the conditional means at `u = τ/2` and `u = τ/2 + ε`.

use crate::error::{ensure, Error, Result};
use crate::graph::Graph;
use crate::irwin_hall::IrwinHallOrder;
use crate::models::ModelParams;
use crate::par;
use crate::rng::{derive_stream, Label};
use crate::statistics::{
    saw_term_count, signed_saw_exact_with_budget, signed_saw_mc, standardize, SawSpec, StandardizedMatrix,
    DEFAULT_SAW_BUDGET,
};

/// Slack added to `3/ℓ` when picking the default exponent `δ`.
pub const DEFAULT_DELTA_MARGIN: f64 = 0.1;

/// Largest `n` for which [`reconstruct_geometry`] runs exact enumeration.
pub const RECONSTRUCT_EXACT_MAX_N: usize = 300;

/// How the statistic `T` is evaluated.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SawMode {
    /// Exact enumeration; fails if over budget.
    Exact,
    /// Monte Carlo with the given number of sampled walks.
    MonteCarlo { samples: u64 },
    /// Exact when within budget, Monte Carlo otherwise.
    Auto { samples: u64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct RecoveryConfig {
    ell: usize,
    epsilon: f64,
    delta: f64,
    pub mode: SawMode,
    pub budget: f64,
    /// Master seed for Monte Carlo walk sampling.
    pub seed: u64,
}

impl RecoveryConfig {
    /// Defaults: `δ = (3/ℓ)(1 + 0.1)` and `ε = τ n^{−δ/4}`, exact mode.
    pub fn new(params: &ModelParams, ell: usize) -> Result<Self> {
        let delta = 3.0 / ell.max(1) as f64 * (1.0 + DEFAULT_DELTA_MARGIN);
        RecoveryConfig::with_delta(params, ell, delta)
    }

    /// Sets `δ` and derives `ε = τ n^{−δ/4}` from it.
    pub fn with_delta(params: &ModelParams, ell: usize, delta: f64) -> Result<Self> {
        ensure!(delta.is_finite() && delta > 0.0, "delta must be positive, got {delta}");
        let epsilon = params.tau() * (params.n() as f64).powf(-delta / 4.0);
        RecoveryConfig::with_epsilon(params, ell, epsilon, delta)
    }

    /// Fully explicit configuration.
    pub fn with_epsilon(params: &ModelParams, ell: usize, epsilon: f64, delta: f64) -> Result<Self> {
        check_walk_length(params, ell)?;
        check_epsilon(params, epsilon)?;
        Ok(RecoveryConfig { ell, epsilon, delta, mode: SawMode::Exact, budget: DEFAULT_SAW_BUDGET, seed: 0 })
    }

    pub fn mode(mut self, mode: SawMode) -> Self {
        self.mode = mode;
        self
    }

    pub fn seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn budget(mut self, budget: f64) -> Self {
        self.budget = budget;
        self
    }

    pub fn ell(&self) -> usize {
        self.ell
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    /// Whether `2τ(ℓ + 1) ≤ 1`, the regime in which the variance bounds for
    /// `T` are established. Outside it the estimator is still well defined.
    pub fn in_variance_regime(&self, params: &ModelParams) -> bool {
        2.0 * params.tau() * (self.ell as f64 + 1.0) <= 1.0
    }
}

fn check_walk_length(params: &ModelParams, ell: usize) -> Result<()> {
    IrwinHallOrder::new(ell)?;
    let reach = (ell as f64 + 1.0) * params.tau();
    ensure!(reach < 1.0, "need (ell + 1) * tau < 1 so walks cannot wrap the circle (got {reach})");
    Ok(())
}

fn check_epsilon(params: &ModelParams, epsilon: f64) -> Result<()> {
    let half = params.tau() / 2.0;
    ensure!(epsilon > 0.0 && epsilon < half, "epsilon must lie in (0, tau/2) = (0, {half}), got {epsilon}");
    Ok(())
}

/// `E[T | d(z_1, z_2) = u]` for walks with `ell` intermediates.
pub fn t_cond_mean(params: &ModelParams, ell: usize, u: f64) -> Result<f64> {
    ensure!((0.0..=0.5).contains(&u), "distance u must lie in [0, 1/2], got {u}");
    check_walk_length(params, ell)?;
    let tau = params.tau();
    let l = ell as f64;
    if u > (l + 1.0) * tau / 2.0 {
        return Ok(0.0);
    }
    let centre = l / 2.0 + u / tau;
    let mass = IrwinHallOrder::new(ell)?.window(centre - 0.5, centre + 0.5)?;
    Ok(saw_term_count(params.n(), ell) * tau.powi(ell as i32) * params.lambda().powi(ell as i32 + 1) * mass)
}

/// `Δ(ε) = E[T | u = τ/2] − E[T | u = τ/2 + ε]`.
pub fn delta_gap(params: &ModelParams, ell: usize, epsilon: f64) -> Result<f64> {
    check_epsilon(params, epsilon)?;
    let half = params.tau() / 2.0;
    Ok(t_cond_mean(params, ell, half)? - t_cond_mean(params, ell, half + epsilon)?)
}

/// Midpoint `κ` of the conditional means at `τ/2` and `τ/2 + ε`.
pub fn kappa_threshold(params: &ModelParams, ell: usize, epsilon: f64) -> Result<f64> {
    check_epsilon(params, epsilon)?;
    let half = params.tau() / 2.0;
    Ok(0.5 * (t_cond_mean(params, ell, half)? + t_cond_mean(params, ell, half + epsilon)?))
}

/// Index of the unordered pair `i < j` in lexicographic order.
fn pair_index(i: usize, j: usize, n: usize) -> u64 {
    let (i, j) = if i < j { (i, j) } else { (j, i) };
    (i * n - i * (i + 1) / 2 + (j - i - 1)) as u64
}

/// `T` between `i` and `j` under the configured mode. Monte Carlo draws come
/// from a stream keyed by the master seed and the pair index.
pub fn pair_statistic(m: &StandardizedMatrix, cfg: &RecoveryConfig, i: usize, j: usize) -> Result<f64> {
    let spec = SawSpec::between(cfg.ell, i, j)?;
    let n = m.n();
    let mc = |samples: u64| -> Result<f64> {
        let mut rng = derive_stream(cfg.seed, &[Label::Tag("saw-mc"), Label::Index(pair_index(i, j, n))]);
        Ok(signed_saw_mc(m, &spec, samples, &mut rng)?.estimate)
    };
    match cfg.mode {
        SawMode::Exact => signed_saw_exact_with_budget(m, &spec, cfg.budget),
        SawMode::MonteCarlo { samples } => mc(samples),
        SawMode::Auto { samples } => match signed_saw_exact_with_budget(m, &spec, cfg.budget) {
            Err(Error::Budget { .. }) => mc(samples),
            other => other,
        },
    }
}

/// `χ̂ = 1{T(A) ≥ κ}` for the pair of vertices 1 and 2.
pub fn estimate_pair(a: &Graph, params: &ModelParams, cfg: &RecoveryConfig) -> Result<bool> {
    let kappa = kappa_threshold(params, cfg.ell, cfg.epsilon)?;
    estimate_pair_with_threshold(a, params, cfg, kappa)
}

/// As [`estimate_pair`] with an explicit threshold.
pub fn estimate_pair_with_threshold(a: &Graph, params: &ModelParams, cfg: &RecoveryConfig, kappa: f64) -> Result<bool> {
    ensure!(a.n() == params.n(), "graph has {} vertices, parameters say {}", a.n(), params.n());
    ensure!(a.n() >= cfg.ell + 2, "need n >= ell + 2");
    let m = standardize(a, params.q())?;
    Ok(pair_statistic(&m, cfg, 0, 1)? >= kappa)
}

/// Applies the pairwise estimator to every pair, giving `X̂`.
///
/// Exact mode is refused above [`RECONSTRUCT_EXACT_MAX_N`] vertices; `Auto`
/// switches to Monte Carlo there.
pub fn reconstruct_geometry(a: &Graph, params: &ModelParams, cfg: &RecoveryConfig) -> Result<Graph> {
    let n = a.n();
    ensure!(n == params.n(), "graph has {n} vertices, parameters say {}", params.n());
    ensure!(n >= cfg.ell + 2, "need n >= ell + 2");
    let mut cfg = cfg.clone();
    if n > RECONSTRUCT_EXACT_MAX_N {
        match cfg.mode {
            SawMode::Exact => {
                return Err(Error::Budget {
                    what: "exact reconstruction (vertex count)".into(),
                    needed: n as f64,
                    budget: RECONSTRUCT_EXACT_MAX_N as f64,
                })
            }
            SawMode::Auto { samples } => cfg.mode = SawMode::MonteCarlo { samples },
            SawMode::MonteCarlo { .. } => {}
        }
    }
    let kappa = kappa_threshold(params, cfg.ell, cfg.epsilon)?;
    let m = standardize(a, params.q())?;
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    let decisions = par::map_indexed(pairs.len(), |k| {
        let (i, j) = pairs[k];
        pair_statistic(&m, &cfg, i, j).map(|t| t >= kappa)
    });
    let mut xhat = Graph::empty(n);
    for (&(i, j), d) in pairs.iter().zip(decisions) {
        if d? {
            xhat.set_edge(i, j, true);
        }
    }
    Ok(xhat)
}

/// `(‖X̂ − X‖_F², fraction of off-diagonal entries that differ)`.
pub fn recovery_error(xhat: &Graph, x: &Graph) -> Result<(f64, f64)> {
    ensure!(xhat.n() == x.n(), "size mismatch: {} vs {}", xhat.n(), x.n());
    let n = x.n();
    let differing: u32 = (0..n).map(|i| xhat.row(i).iter().zip(x.row(i)).map(|(a, b)| (a ^ b).count_ones()).sum::<u32>()).sum();
    let frob = differing as f64;
    let off_diagonal = (n * n.saturating_sub(1)) as f64;
    Ok((frob, if off_diagonal > 0.0 { frob / off_diagonal } else { 0.0 }))
}
