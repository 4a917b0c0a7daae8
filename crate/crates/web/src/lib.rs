//! wasm-bindgen bindings for the browser demo in `www/`.
//!
//! Each export is a thin wrapper over a plain Rust function so the numbers
//! can be checked natively.

use planted_cycle::harness::{evaluate_statistic, Statistic};
use planted_cycle::recovery::{kappa_threshold, t_cond_mean, RecoveryConfig};
use planted_cycle::{derive_stream, sample_null, sample_planted, Label, ModelParams, Result};
use wasm_bindgen::prelude::*;

/// Largest graph the demo will draw.
pub const MAX_DEMO_N: usize = 600;
/// Most trials per histogram arm.
pub const MAX_DEMO_TRIALS: usize = 2000;

fn js(e: planted_cycle::Error) -> JsError {
    JsError::new(&e.to_string())
}

fn params(n: usize, p: f64, q: f64, tau: f64) -> Result<ModelParams> {
    if n > MAX_DEMO_N {
        return Err(planted_cycle::Error::Validation(format!("the demo is limited to n <= {MAX_DEMO_N}")));
    }
    ModelParams::new(n, p, q, tau)
}

/// A planted graph laid out on its hidden circle.
#[wasm_bindgen]
pub struct CycleSample {
    positions: Vec<f64>,
    edges: Vec<u32>,
    close: Vec<u8>,
}

#[wasm_bindgen]
impl CycleSample {
    /// Latent positions in `[0, 1)`.
    pub fn positions(&self) -> Vec<f64> {
        self.positions.clone()
    }

    /// Edges as a flat list `[i0, j0, i1, j1, ...]`.
    pub fn edges(&self) -> Vec<u32> {
        self.edges.clone()
    }

    /// 1 for edges whose endpoints are within `τ/2` on the circle.
    pub fn close(&self) -> Vec<u8> {
        self.close.clone()
    }

    #[wasm_bindgen(getter)]
    pub fn edge_count(&self) -> usize {
        self.close.len()
    }
}

pub fn sample_cycle_native(n: usize, p: f64, q: f64, tau: f64, seed: u64) -> Result<CycleSample> {
    let params = params(n, p, q, tau)?;
    let mut rng = derive_stream(seed, &[Label::Tag("web-sample")]);
    let (g, z) = sample_planted(&params, &mut rng)?;
    let mut edges = Vec::with_capacity(2 * g.edge_count());
    let mut close = Vec::with_capacity(g.edge_count());
    for (i, j) in g.edges() {
        edges.extend([i as u32, j as u32]);
        close.push(u8::from(z.dist(i, j) <= tau / 2.0));
    }
    Ok(CycleSample { positions: z.positions().to_vec(), edges, close })
}

#[wasm_bindgen]
pub fn sample_cycle(n: usize, p: f64, q: f64, tau: f64, seed: u64) -> Result<CycleSample, JsError> {
    sample_cycle_native(n, p, q, tau, seed).map_err(js)
}

/// `E[T | dist = u]` at `points` evenly spaced `u ∈ [0, 1/2]`, flattened as
/// `[u0, t0, u1, t1, ...]`, followed by the default threshold `κ`.
pub fn conditional_mean_curve_native(n: usize, p: f64, q: f64, tau: f64, ell: usize, points: usize) -> Result<Vec<f64>> {
    let params = params(n, p, q, tau)?;
    let cfg = RecoveryConfig::new(&params, ell)?;
    let points = points.clamp(2, 2000);
    let mut out = Vec::with_capacity(2 * points + 1);
    for k in 0..points {
        let u = 0.5 * k as f64 / (points - 1) as f64;
        out.extend([u, t_cond_mean(&params, ell, u)?]);
    }
    out.push(kappa_threshold(&params, ell, cfg.epsilon())?);
    Ok(out)
}

#[wasm_bindgen]
pub fn conditional_mean_curve(n: usize, p: f64, q: f64, tau: f64, ell: usize, points: usize) -> Result<Vec<f64>, JsError> {
    conditional_mean_curve_native(n, p, q, tau, ell, points).map_err(js)
}

/// Signed triangle counts of `trials` planted graphs followed by `trials`
/// null graphs.
pub fn triangle_samples_native(n: usize, p: f64, q: f64, tau: f64, trials: usize, seed: u64) -> Result<Vec<f64>> {
    let params = params(n, p, q, tau)?;
    if trials == 0 || trials > MAX_DEMO_TRIALS {
        return Err(planted_cycle::Error::Validation(format!("trials must lie in 1..={MAX_DEMO_TRIALS}")));
    }
    let mut planted = Vec::with_capacity(trials);
    let mut null = Vec::with_capacity(trials);
    for t in 0..trials {
        let stream = |arm: &str| derive_stream(seed, &[Label::Tag("web-hist"), Label::Index(t as u64), Label::Tag(arm)]);
        let (g, _) = sample_planted(&params, &mut stream("P"))?;
        planted.push(evaluate_statistic(&g, &params, Statistic::Triangle)?);
        null.push(evaluate_statistic(&sample_null(&params, &mut stream("Q")), &params, Statistic::Triangle)?);
    }
    planted.extend(null);
    Ok(planted)
}

#[wasm_bindgen]
pub fn triangle_samples(n: usize, p: f64, q: f64, tau: f64, trials: usize, seed: u64) -> Result<Vec<f64>, JsError> {
    triangle_samples_native(n, p, q, tau, trials, seed).map_err(js)
}
