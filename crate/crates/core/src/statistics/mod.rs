//! Standardized adjacency and the polynomial statistics built from it.
//!
//! Entries are stored as raw residuals `A_ij − c`, which take only the two
//! values `1 − c` and `−c`, together with the global scale
//! `1 / sqrt(c(1 − c))`. Products over `k` edges are accumulated on residuals
//! and scaled once by `scale^k`.

mod edge_subset;
mod saw;

pub use edge_subset::EdgeSubset;
pub use saw::{saw_term_count, signed_saw_exact, signed_saw_exact_with_budget, signed_saw_exhaustive, signed_saw_mc, SawEstimate, SawSpec, DEFAULT_SAW_BUDGET};

use crate::error::{ensure, Error, Result};
use crate::graph::Graph;
use crate::numeric::{binomial, dot, pairwise_sum};
use crate::par;

/// Largest clique order accepted by [`signed_clique_count`].
pub const MAX_CLIQUE_ORDER: usize = 5;

/// Work budget (number of vertex subsets) for [`signed_clique_count`].
pub const CLIQUE_BUDGET: f64 = 1e9;

/// `(A − c) / sqrt(c(1 − c))` for a graph `A` and a centering `c ∈ (0, 1)`.
///
/// `c = r` gives the detection basis `Ā`; `c = q` gives the recovery basis `Ã`.
#[derive(Debug, Clone, PartialEq)]
pub struct StandardizedMatrix {
    n: usize,
    center: f64,
    scale: f64,
    residual: Vec<f64>,
}

/// Standardizes `a` around `center`.
pub fn standardize(a: &Graph, center: f64) -> Result<StandardizedMatrix> {
    ensure!(center > 0.0 && center < 1.0, "centering {center} must lie in (0, 1)");
    let n = a.n();
    let mut residual = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            if i != j {
                residual[i * n + j] = if a.has_edge(i, j) { 1.0 - center } else { -center };
            }
        }
    }
    Ok(StandardizedMatrix { n, center, scale: 1.0 / (center * (1.0 - center)).sqrt(), residual })
}

impl StandardizedMatrix {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn center(&self) -> f64 {
        self.center
    }

    /// `1 / sqrt(c(1 − c))`.
    pub fn scale(&self) -> f64 {
        self.scale
    }

    /// Standardized entry; zero on the diagonal.
    #[inline]
    pub fn entry(&self, i: usize, j: usize) -> f64 {
        self.residual[i * self.n + j] * self.scale
    }

    #[inline]
    pub fn residual(&self, i: usize, j: usize) -> f64 {
        self.residual[i * self.n + j]
    }

    #[inline]
    pub(crate) fn residual_row(&self, i: usize) -> &[f64] {
        &self.residual[i * self.n..(i + 1) * self.n]
    }

    /// The two values an off-diagonal entry can take: `(absent, present)`.
    pub fn levels(&self) -> (f64, f64) {
        (-(self.center / (1.0 - self.center)).sqrt(), ((1.0 - self.center) / self.center).sqrt())
    }
}

/// `φ_α = ∏_{(i,j) ∈ α} M_ij`, with `φ_∅ = 1`.
pub fn signed_subgraph(m: &StandardizedMatrix, alpha: &EdgeSubset) -> Result<f64> {
    if let Some(v) = alpha.max_vertex() {
        ensure!(v < m.n, "edge subset uses vertex {v} but the graph has {} vertices", m.n);
    }
    let prod: f64 = alpha.edges().iter().map(|&(i, j)| m.residual(i, j)).product();
    Ok(prod * m.scale.powi(alpha.len() as i32))
}

/// Signed triangle count `S₃`: the sum over vertex triples of the product of
/// their three standardized entries, evaluated as `trace(M³) / 6`.
pub fn signed_triangle(m: &StandardizedMatrix) -> Result<f64> {
    ensure!(m.n >= 3, "signed triangle count needs n >= 3 (n = {})", m.n);
    let n = m.n;
    // trace(R³) = Σ_{i,j} R_ij (R_i · R_j) = 2 Σ_{i<j} R_ij (R_i · R_j).
    let per_row = par::map_indexed(n, |i| {
        let ri = m.residual_row(i);
        let terms: Vec<f64> = (i + 1..n).map(|j| ri[j] * dot(ri, m.residual_row(j))).collect();
        pairwise_sum(&terms)
    });
    let trace = 2.0 * pairwise_sum(&per_row);
    Ok(trace / 6.0 * m.scale.powi(3))
}

/// Signed clique count `S_v`: sum over all `v`-subsets of the product over
/// their `C(v, 2)` pairs. Brute-force enumeration, `3 <= v <= 5`.
pub fn signed_clique_count(m: &StandardizedMatrix, v: usize) -> Result<f64> {
    ensure!((3..=MAX_CLIQUE_ORDER).contains(&v), "clique order {v} outside supported range 3..={MAX_CLIQUE_ORDER}");
    ensure!(v <= m.n, "clique order {v} exceeds n = {}", m.n);
    let needed = binomial(m.n as u64, v as u64);
    if needed > CLIQUE_BUDGET {
        return Err(Error::Budget { what: format!("S_{v} enumeration"), needed, budget: CLIQUE_BUDGET });
    }

    fn extend(m: &StandardizedMatrix, chosen: &mut Vec<usize>, start: usize, v: usize, partial: f64) -> f64 {
        if chosen.len() == v {
            return partial;
        }
        let mut acc = 0.0;
        for w in start..m.n {
            let factor: f64 = chosen.iter().map(|&u| m.residual(u, w)).product();
            chosen.push(w);
            acc += extend(m, chosen, w + 1, v, partial * factor);
            chosen.pop();
        }
        acc
    }

    let per_first = par::map_indexed(m.n, |first| extend(m, &mut vec![first], first + 1, v, 1.0));
    let pairs = (v * (v - 1) / 2) as i32;
    Ok(pairwise_sum(&per_first) * m.scale.powi(pairs))
}
