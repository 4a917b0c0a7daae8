//! Model parameters and the two samplers: the planted dense cycle `P` and the
//! degree-matched Erdős–Rényi null `Q`.

use serde::{Deserialize, Serialize};

use crate::error::{ensure, Result};
use crate::geometry::{check_bandwidth, sample_latents, LatentAssignment};
use crate::graph::Graph;
use crate::rng::RandomStream;

/// `(n, p, q, τ)`. The derived densities `r`, `μ` and `λ` are always recomputed
/// from these four values.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    n: usize,
    p: f64,
    q: f64,
    tau: f64,
}

impl ModelParams {
    /// Validates `0 < q < p <= 1` and `0 <= τ <= 1/2`.
    ///
    /// `q = 0` is rejected because `λ` and the standardization by `q` divide by
    /// `sqrt(q(1 - q))`; this also keeps `r` strictly inside `(0, 1)`.
    pub fn new(n: usize, p: f64, q: f64, tau: f64) -> Result<Self> {
        ensure!(n >= 1, "n must be positive");
        ensure!(p.is_finite() && q.is_finite() && tau.is_finite(), "parameters must be finite");
        ensure!(q < p, "q < p violated (p = {p}, q = {q})");
        ensure!(p <= 1.0, "p <= 1 violated (p = {p})");
        ensure!(q > 0.0, "q > 0 required so that sqrt(q(1-q)) is nonzero (q = {q})");
        check_bandwidth(tau)?;
        Ok(ModelParams { n, p, q, tau })
    }

    /// Same `p, q, τ` with a different vertex count.
    pub fn with_n(&self, n: usize) -> Result<Self> {
        ModelParams::new(n, self.p, self.q, self.tau)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    /// Average edge density `τp + (1 − τ)q`, shared by both models.
    pub fn r(&self) -> f64 {
        self.tau * self.p + (1.0 - self.tau) * self.q
    }

    /// Detection signal-to-noise ratio `(p − r) / sqrt(r(1 − r))`.
    pub fn mu(&self) -> f64 {
        let r = self.r();
        (self.p - r) / (r * (1.0 - r)).sqrt()
    }

    /// Recovery signal-to-noise ratio `(p − q) / sqrt(q(1 − q))`.
    pub fn lambda(&self) -> f64 {
        (self.p - self.q) / (self.q * (1.0 - self.q)).sqrt()
    }
}

/// One draw from the planted model: the observed graph and the latent vector.
pub fn sample_planted(params: &ModelParams, rng: &mut RandomStream) -> Result<(Graph, LatentAssignment)> {
    let z = sample_latents(params.n, rng)?;
    let g = sample_planted_given(params, &z, rng)?;
    Ok((g, z))
}

/// Planted-model edges conditional on a fixed latent vector.
pub fn sample_planted_given(params: &ModelParams, z: &LatentAssignment, rng: &mut RandomStream) -> Result<Graph> {
    ensure!(z.n() == params.n, "latent vector has {} entries, expected {}", z.n(), params.n);
    let half = params.tau / 2.0;
    let mut g = Graph::empty(params.n);
    for i in 0..params.n {
        for j in i + 1..params.n {
            let density = if z.dist(i, j) <= half { params.p } else { params.q };
            if rng.bernoulli(density) {
                g.set_edge(i, j, true);
            }
        }
    }
    Ok(g)
}

/// One draw from the null model `G(n, r)`.
pub fn sample_null(params: &ModelParams, rng: &mut RandomStream) -> Graph {
    let r = params.r();
    let mut g = Graph::empty(params.n);
    for i in 0..params.n {
        for j in i + 1..params.n {
            if rng.bernoulli(r) {
                g.set_edge(i, j, true);
            }
        }
    }
    g
}
