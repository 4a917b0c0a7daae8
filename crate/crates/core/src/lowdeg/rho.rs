//! The `P_αβ` probabilities, the cumulant-like recursion for `ρ_α` and the
//! resulting bound on the degree-`D` correlation.
//!
//! `ρ_∅ = P{(1,2) ∈ W}` and, for `α ≠ ∅`,
//!
//! ```text
//! ρ_α = ( P{α ∪ {(1,2)} ⊆ W} − Σ_{β ⊊ α} ρ_β P_αβ ) / P_αα,   P_αβ = P{α ∖ W = β}.
//! ```
//!
//! `ρ_α` vanishes unless `α` is connected and contains both endpoints, so the
//! table only stores connected shapes rooted at vertices 1 and 2 (labels 0
//! and 1 here).

use std::collections::BTreeMap;

use crate::error::{ensure, Result};
use crate::models::ModelParams;
use crate::rng::{Label, RandomStream};
use crate::statistics::EdgeSubset;

use super::prior::{pattern_histogram, CirclePrior, LatentPrior};
use super::shapes::{canonical_shape, enumerate_rooted_shapes, Shape};
use super::{LowDegConfig, McEstimate};

/// `P_αβ` under the planted-cycle prior. Single pairs use the exact values
/// `P{e ∈ W} = τ`.
pub fn p_alpha_beta_mc(params: &ModelParams, alpha: &EdgeSubset, beta: &EdgeSubset, samples: u64, rng: &RandomStream) -> Result<McEstimate> {
    let mut pattern = 0u64;
    for &(i, j) in beta.edges() {
        let k = alpha.edges().iter().position(|&e| e == (i, j));
        ensure!(k.is_some(), "beta must be a subset of alpha: ({i}, {j}) is not in alpha");
        pattern |= 1 << k.unwrap();
    }
    ensure!(params.tau() > 0.0, "bandwidth tau must be positive");
    let tau = params.tau();
    match alpha.len() {
        0 => Ok(McEstimate::exact(1.0)),
        1 => Ok(McEstimate::exact(if pattern == 0 { tau } else { 1.0 - tau })),
        _ => {
            let h = pattern_histogram(&CirclePrior::new(tau, true)?, alpha, samples, rng)?;
            let (estimate, stderr) = h.probability(pattern);
            Ok(McEstimate { estimate, stderr })
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RhoEntry {
    /// Rooted shape; vertices 0 and 1 are the endpoints.
    pub shape: Shape,
    pub rho: f64,
    /// First-order propagated standard error.
    pub stderr: f64,
    /// Number of labeled edge sets with this rooted shape.
    pub multiplicity: f64,
    /// Estimated `P_αα`.
    pub p_alpha_alpha: McEstimate,
}

/// `ρ_α` for every connected rooted shape with at most `D` edges.
#[derive(Debug, Clone, PartialEq)]
pub struct RhoTable {
    empty: f64,
    entries: Vec<RhoEntry>,
    index: BTreeMap<EdgeSubset, usize>,
}

impl RhoTable {
    /// `ρ_∅`.
    pub fn rho_empty(&self) -> f64 {
        self.empty
    }

    pub fn entries(&self) -> &[RhoEntry] {
        &self.entries
    }

    /// `(ρ_α, stderr)` for any labeled `α`; exact zero when `α` is
    /// disconnected or misses vertex 0 or 1.
    pub fn rho(&self, alpha: &EdgeSubset) -> Result<(f64, f64)> {
        if alpha.is_empty() {
            return Ok((self.empty, 0.0));
        }
        if !alpha.is_connected() || !alpha.contains_vertex(0) || !alpha.contains_vertex(1) {
            return Ok((0.0, 0.0));
        }
        let shape = canonical_shape(alpha, true)?;
        let k = self.index.get(shape.edges());
        ensure!(k.is_some(), "shape {} lies outside the table", shape.id());
        let e = &self.entries[*k.unwrap()];
        Ok((e.rho, e.stderr))
    }
}

/// The table under the planted-cycle prior with `n` vertices.
pub fn rho_table(params: &ModelParams, cfg: &LowDegConfig, rng: &RandomStream) -> Result<RhoTable> {
    ensure!(params.tau() > 0.0, "bandwidth tau must be positive");
    rho_table_with_prior(&CirclePrior::new(params.tau(), cfg.importance_sampling)?, params.n(), cfg, rng)
}

/// The recursion for an arbitrary prior over `W`.
pub fn rho_table_with_prior(prior: &dyn LatentPrior, n: usize, cfg: &LowDegConfig, rng: &RandomStream) -> Result<RhoTable> {
    cfg.validate()?;
    let pi = prior.pair_probability();
    let mut table = RhoTable { empty: pi, entries: Vec::new(), index: BTreeMap::new() };
    // Shapes come ordered by edge count, so every proper subset is ready.
    for shape in enumerate_rooted_shapes(cfg.max_degree, cfg.vertex_budget)? {
        let alpha = shape.edges().clone();
        let multiplicity = shape.embedding_count(n);
        let entry = if alpha.len() == 1 {
            // α = {(1,2)}: (π − π·π) / (1 − π) = π.
            RhoEntry { shape, rho: pi, stderr: 0.0, multiplicity, p_alpha_alpha: McEstimate::exact(1.0 - pi) }
        } else {
            let id = shape.id();
            let hist = pattern_histogram(prior, &alpha, cfg.mc_samples, &rng.split(Label::Tag("rho")).split(Label::Tag(&id)))?;
            let full = (1u64 << alpha.len()) - 1;
            let (p_full, p_full_se) = hist.probability(full);
            ensure!(p_full > 0.0, "estimated P_aa for shape {id} is not positive; increase the sample count");

            let mut rho_of = vec![0.0; full as usize + 1];
            let mut inherited_var = 0.0;
            let mut numerator = hist.joint_probability().0;
            for pattern in 0..full {
                let (r, se) = table.rho(&alpha.select(pattern))?;
                rho_of[pattern as usize] = r;
                let p = hist.probability(pattern).0;
                numerator -= r * p;
                inherited_var += (p / p_full * se).powi(2);
            }
            let rho = numerator / p_full;
            rho_of[full as usize] = rho;

            // Per-draw influence w·(1{joint} − ρ_{pattern}), which has mean zero
            // at the estimate.
            let nf = hist.samples as f64;
            let mut second = hist.joint_sq * (1.0 - 2.0 * rho_of[0]);
            for pattern in 0..=full as usize {
                second += rho_of[pattern].powi(2) * hist.weight_sq[pattern];
            }
            let own_var = (second / nf).max(0.0) / nf / (p_full * p_full);
            let stderr = (own_var + inherited_var).sqrt();
            RhoEntry { shape, rho, stderr, multiplicity, p_alpha_alpha: McEstimate { estimate: p_full, stderr: p_full_se } }
        };
        table.index.insert(entry.shape.edges().clone(), table.entries.len());
        table.entries.push(entry);
    }
    Ok(table)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorrBound {
    /// `Σ_{|α| ≤ D} ρ_α² λ^{2|α|}`, an upper bound on `Corr²_{≤D}`.
    pub corr_sq_bound: f64,
    pub stderr: f64,
    /// `max(0, E[χ²] − bound)` with `E[χ²] = ρ_∅`.
    pub mmse_lower_bound: f64,
}

/// Evaluates the correlation bound from a finished table.
pub fn corr_bound_from_table(lambda: f64, table: &RhoTable) -> CorrBound {
    let mut bound = table.empty * table.empty;
    let mut var = 0.0;
    for e in &table.entries {
        let weight = e.multiplicity * lambda.powi(2 * e.shape.num_edges() as i32);
        bound += weight * e.rho * e.rho;
        var += (weight * 2.0 * e.rho.abs() * e.stderr).powi(2);
    }
    CorrBound { corr_sq_bound: bound, stderr: var.sqrt(), mmse_lower_bound: (table.empty - bound).max(0.0) }
}

/// [`rho_table`] followed by [`corr_bound_from_table`].
pub fn corr_bound(params: &ModelParams, cfg: &LowDegConfig, rng: &RandomStream) -> Result<CorrBound> {
    Ok(corr_bound_from_table(params.lambda(), &rho_table(params, cfg, rng)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(d: usize, samples: u64) -> LowDegConfig {
        LowDegConfig::new(d, samples).unwrap()
    }

    #[test]
    fn single_pair_values_are_exact() {
        let params = ModelParams::new(50, 0.8, 0.3, 0.1).unwrap();
        let rng = RandomStream::from_seed(0);
        let e = EdgeSubset::new([(0, 1)]).unwrap();
        assert_eq!(p_alpha_beta_mc(&params, &e, &e, 10, &rng).unwrap(), McEstimate::exact(0.9));
        assert_eq!(p_alpha_beta_mc(&params, &e, &EdgeSubset::empty(), 10, &rng).unwrap(), McEstimate::exact(0.1));
        let other = EdgeSubset::new([(0, 2)]).unwrap();
        assert!(p_alpha_beta_mc(&params, &e, &other, 10, &rng).is_err());

        let table = rho_table(&params, &cfg(1, 100), &rng).unwrap();
        assert_eq!(table.rho(&e).unwrap(), (0.1, 0.0));
        assert_eq!(table.rho_empty(), 0.1);
        let bound = corr_bound_from_table(params.lambda(), &table);
        let expect = 0.01 + params.lambda().powi(2) * 0.01;
        assert!((bound.corr_sq_bound - expect).abs() < 1e-15);
    }

    #[test]
    fn vanishing_cases() {
        let params = ModelParams::new(50, 0.8, 0.3, 0.1).unwrap();
        let table = rho_table(&params, &cfg(3, 20_000), &RandomStream::from_seed(2)).unwrap();
        let disconnected = EdgeSubset::new([(0, 1), (2, 3)]).unwrap();
        let missing_root = EdgeSubset::triangle(0, 2, 3);
        assert_eq!(table.rho(&disconnected).unwrap(), (0.0, 0.0));
        assert_eq!(table.rho(&missing_root).unwrap(), (0.0, 0.0));
        assert!(table.rho(&EdgeSubset::path(&[0, 2, 3, 4, 1]).unwrap()).is_err());
    }

    #[test]
    fn two_step_path_matches_closed_form() {
        // For the path 1–3–2: P{13, 32 ∈ W} = τ² and P{13, 32, 12 ∈ W} = (3/4)τ²,
        // while the one-edge subsets miss a root. So
        // ρ = ((3/4)τ² − τ·τ²) / P{13, 32 ∉ W}, with P{both outside} = 1 − 2τ + τ².
        let tau = 0.1;
        let params = ModelParams::new(50, 0.8, 0.3, tau).unwrap();
        let table = rho_table(&params, &cfg(2, 2_000_000), &RandomStream::from_seed(4)).unwrap();
        let (rho, se) = table.rho(&EdgeSubset::path(&[0, 2, 1]).unwrap()).unwrap();
        let expect = (0.75 * tau * tau - tau.powi(3)) / (1.0 - tau).powi(2);
        assert!((rho - expect).abs() < 4.0 * se, "{rho} ± {se} vs {expect}");
        assert!(se > 0.0 && se < 0.05 * expect);
    }

    #[test]
    fn deterministic_given_seed() {
        let params = ModelParams::new(30, 0.8, 0.3, 0.1).unwrap();
        let a = rho_table(&params, &cfg(3, 50_000), &RandomStream::from_seed(6)).unwrap();
        let b = rho_table(&params, &cfg(3, 50_000), &RandomStream::from_seed(6)).unwrap();
        assert_eq!(a, b);
    }
}
