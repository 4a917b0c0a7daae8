//! Numerical low-degree diagnostics.
//!
//! Sums over all edge sets `α ⊆ binom([n], 2)` with `|α| ≤ D` are organised by
//! isomorphism class: every quantity here depends on `α` only through its
//! shape (rooted at vertices 1 and 2 for the recovery quantities), so each
//! class is evaluated once and weighted by its number of embeddings.

mod prior;
mod rho;
mod shapes;

pub use prior::{pattern_histogram, CirclePrior, Draw, LatentPrior, PatternHistogram, MAX_DRAW_VERTICES, MC_BLOCK};
pub use rho::{corr_bound, corr_bound_from_table, p_alpha_beta_mc, rho_table, rho_table_with_prior, CorrBound, RhoEntry, RhoTable};
pub use shapes::{canonical_shape, enumerate_rooted_shapes, enumerate_shapes, Shape, MAX_SHAPE_VERTICES};

use crate::error::{ensure, Result};
use crate::geometry::LatentAssignment;
use crate::models::ModelParams;
use crate::rng::{Label, RandomStream};
use crate::statistics::EdgeSubset;

/// Largest degree budget `D` accepted by the enumerations.
pub const MAX_DEGREE: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LowDegConfig {
    /// Degree budget `D`: largest `|α|` included.
    pub max_degree: usize,
    /// Monte Carlo draws per shape.
    pub mc_samples: u64,
    /// Largest vertex count of an enumerated shape.
    pub vertex_budget: usize,
    /// Concentrate latent draws near the first vertex (see [`CirclePrior`]).
    pub importance_sampling: bool,
}

impl LowDegConfig {
    pub fn new(max_degree: usize, mc_samples: u64) -> Result<Self> {
        let cfg = LowDegConfig { max_degree, mc_samples, vertex_budget: MAX_SHAPE_VERTICES, importance_sampling: true };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        ensure!((1..=MAX_DEGREE).contains(&self.max_degree), "degree budget D must lie in 1..={MAX_DEGREE}, got {}", self.max_degree);
        ensure!(self.mc_samples >= 2, "need at least two Monte Carlo samples");
        ensure!(
            (2..=MAX_SHAPE_VERTICES).contains(&self.vertex_budget),
            "vertex budget must lie in 2..={MAX_SHAPE_VERTICES}, got {}",
            self.vertex_budget
        );
        Ok(())
    }
}

impl Default for LowDegConfig {
    fn default() -> Self {
        LowDegConfig { max_degree: 4, mc_samples: 1_000_000, vertex_budget: MAX_SHAPE_VERTICES, importance_sampling: true }
    }
}

/// A Monte Carlo estimate with its standard error.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct McEstimate {
    pub estimate: f64,
    pub stderr: f64,
}

impl McEstimate {
    pub fn exact(value: f64) -> Self {
        McEstimate { estimate: value, stderr: 0.0 }
    }

    pub fn z_score(&self, target: f64) -> f64 {
        let diff = self.estimate - target;
        if self.stderr > 0.0 {
            diff / self.stderr
        } else if diff == 0.0 {
            0.0
        } else {
            f64::INFINITY * diff.signum()
        }
    }
}

/// `η(z; α)`: how many pairs of `α` have latent distance at most `τ/2`.
pub fn eta(z: &LatentAssignment, alpha: &EdgeSubset, tau: f64) -> Result<usize> {
    if let Some(v) = alpha.max_vertex() {
        ensure!(v < z.n(), "edge subset uses vertex {v} but only {} positions are given", z.n());
    }
    Ok(alpha.edges().iter().filter(|&&(i, j)| z.dist(i, j) <= tau / 2.0).count())
}

fn check_tau(params: &ModelParams) -> Result<()> {
    ensure!(params.tau() > 0.0, "bandwidth tau must be positive");
    Ok(())
}

/// `E_P[φ_α]` from the latent integral
/// `E_z[∏_{(i,j) ∈ α} E[Ā_ij | z]]`, where each factor is `μ` for a close
/// pair and `μτ/(τ − 1)` otherwise. Exact zero for shapes with a dangling
/// edge.
pub fn phi_expectation_mc(params: &ModelParams, alpha: &EdgeSubset, samples: u64, rng: &RandomStream) -> Result<McEstimate> {
    check_tau(params)?;
    phi_expectation_with_prior(params, &CirclePrior::new(params.tau(), true)?, alpha, samples, rng)
}

/// As [`phi_expectation_mc`] with an explicit latent sampler.
pub fn phi_expectation_with_prior(
    params: &ModelParams,
    prior: &CirclePrior,
    alpha: &EdgeSubset,
    samples: u64,
    rng: &RandomStream,
) -> Result<McEstimate> {
    check_tau(params)?;
    if alpha.is_empty() {
        return Ok(McEstimate::exact(1.0));
    }
    if alpha.has_dangling_edge() {
        return Ok(McEstimate::exact(0.0));
    }
    ensure!(samples >= 2, "need at least two Monte Carlo samples");
    let tau = params.tau();
    let close = params.mu();
    let far = params.mu() * tau / (tau - 1.0);
    let m = alpha.len() as i32;
    let stats = prior::draw_stats(prior, alpha, samples, rng, |d| {
        let outside = d.outside.count_ones() as i32;
        d.weight * close.powi(m - outside) * far.powi(outside)
    });
    Ok(McEstimate { estimate: stats.mean(), stderr: stats.stderr() })
}

/// `E_P[φ_α]` by sampling latent positions and then the edges of `α`
/// themselves; independent of the latent closed form.
pub fn phi_expectation_graph_mc(params: &ModelParams, alpha: &EdgeSubset, samples: u64, rng: &RandomStream) -> Result<McEstimate> {
    ensure!(samples >= 2, "need at least two Monte Carlo samples");
    ensure!(alpha.num_vertices() <= MAX_DRAW_VERTICES, "too many vertices for a latent draw");
    let verts = alpha.vertices();
    let r = params.r();
    let sd = (r * (1.0 - r)).sqrt();
    let (hi, lo) = ((1.0 - r) / sd, -r / sd);
    let parts = prior::blocked(samples, rng, |count, stream| {
        let mut stats = crate::numeric::RunningStats::new();
        let mut pos = [0.0f64; MAX_DRAW_VERTICES];
        for _ in 0..count {
            for x in pos[..verts.len()].iter_mut() {
                *x = stream.uniform();
            }
            let at = |v: usize| pos[verts.binary_search(&v).unwrap()];
            let mut prod = 1.0;
            for &(i, j) in alpha.edges() {
                let prob = if crate::geometry::circle_dist(at(i), at(j)) <= params.tau() / 2.0 { params.p() } else { params.q() };
                prod *= if stream.bernoulli(prob) { hi } else { lo };
            }
            stats.push(prod);
        }
        stats
    });
    let mut total = crate::numeric::RunningStats::new();
    for p in &parts {
        total.merge(p);
    }
    Ok(McEstimate { estimate: total.mean(), stderr: total.stderr() })
}

/// One shape's share of the truncated advantage.
#[derive(Debug, Clone, PartialEq)]
pub struct ShapeContribution {
    pub shape: Shape,
    pub embedding_count: f64,
    pub phi: McEstimate,
    /// `embedding_count · E[φ]²`.
    pub contribution: f64,
    pub contribution_stderr: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Advantage {
    /// `Adv²_{≤D}`, including the constant term 1.
    pub estimate: f64,
    pub stderr: f64,
    pub breakdown: Vec<ShapeContribution>,
}

impl Advantage {
    /// The breakdown entry with the largest contribution.
    pub fn dominant(&self) -> Option<&ShapeContribution> {
        self.breakdown.iter().max_by(|a, b| a.contribution.total_cmp(&b.contribution))
    }
}

/// `Adv²_{≤D} = Σ_{|α| ≤ D} E_P[φ_α]²`, grouped by shape.
///
/// Shapes with a dangling edge contribute exactly zero; this also covers
/// every shape with more vertices than edges.
pub fn advantage_sq(params: &ModelParams, cfg: &LowDegConfig, rng: &RandomStream) -> Result<Advantage> {
    cfg.validate()?;
    check_tau(params)?;
    let prior = CirclePrior::new(params.tau(), cfg.importance_sampling)?;
    let shapes = enumerate_shapes(cfg.max_degree, cfg.vertex_budget)?;
    let mut breakdown = Vec::with_capacity(shapes.len());
    for shape in shapes {
        let id = shape.id();
        let phi = phi_expectation_with_prior(params, &prior, shape.edges(), cfg.mc_samples, &rng.split(Label::Tag(&id)))?;
        let embedding_count = shape.embedding_count(params.n());
        let contribution = embedding_count * phi.estimate * phi.estimate;
        let contribution_stderr = embedding_count * 2.0 * phi.estimate.abs() * phi.stderr;
        breakdown.push(ShapeContribution { shape, embedding_count, phi, contribution, contribution_stderr });
    }
    let estimate = 1.0 + breakdown.iter().map(|c| c.contribution).sum::<f64>();
    let stderr = breakdown.iter().map(|c| c.contribution_stderr.powi(2)).sum::<f64>().sqrt();
    Ok(Advantage { estimate, stderr, breakdown })
}
