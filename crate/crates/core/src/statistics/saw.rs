//! The signed self-avoiding-walk count
//!
//! `T = Σ_{i_1, ..., i_ℓ distinct, ∉ {s, t}} M_{s i_1} M_{i_1 i_2} ⋯ M_{i_ℓ t}`
//!
//! over all ordered tuples of `ℓ` distinct intermediates between the endpoints
//! `s` and `t` (vertices 1 and 2 by default).

use crate::error::{ensure, Error, Result};
use crate::numeric::{dot3, falling_factorial, pairwise_sum, RunningStats};
use crate::par;
use crate::rng::RandomStream;

use super::StandardizedMatrix;

/// Default cap on `(n − 2)^ℓ` for exact enumeration.
pub const DEFAULT_SAW_BUDGET: f64 = 1e9;

/// Walk shape: `ℓ` intermediates (so `ℓ + 1` edges) from `source` to `target`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SawSpec {
    ell: usize,
    source: usize,
    target: usize,
}

impl SawSpec {
    /// Walks between vertices 1 and 2 (indices 0 and 1).
    pub fn new(ell: usize) -> Result<Self> {
        SawSpec::between(ell, 0, 1)
    }

    pub fn between(ell: usize, source: usize, target: usize) -> Result<Self> {
        ensure!(ell >= 1, "walk parameter ell must be at least 1");
        ensure!(source != target, "walk endpoints must differ");
        Ok(SawSpec { ell, source, target })
    }

    pub fn ell(&self) -> usize {
        self.ell
    }

    pub fn endpoints(&self) -> (usize, usize) {
        (self.source, self.target)
    }

    fn check(&self, n: usize) -> Result<()> {
        ensure!(n >= self.ell + 2, "walks with ell = {} need n >= {} (n = {n})", self.ell, self.ell + 2);
        ensure!(self.source < n && self.target < n, "walk endpoints out of range for n = {n}");
        Ok(())
    }
}

/// Number of walks, `(n − 2)(n − 3)⋯(n − 1 − ℓ)`.
pub fn saw_term_count(n: usize, ell: usize) -> f64 {
    falling_factorial(n.saturating_sub(2) as u64, ell as u64)
}

/// Exact `T` with the default budget.
pub fn signed_saw_exact(m: &StandardizedMatrix, spec: &SawSpec) -> Result<f64> {
    signed_saw_exact_with_budget(m, spec, DEFAULT_SAW_BUDGET)
}

/// Exact `T` by depth-first enumeration with a visited mask.
///
/// Refuses when `(n − 2)^ℓ` exceeds `budget`. The last intermediate is summed
/// as a masked dot product against the target's row, so the inner loop is
/// branch-free. Work is split by the first intermediate and the partial sums
/// are tree-reduced in vertex order, which makes the result independent of
/// the thread count.
pub fn signed_saw_exact_with_budget(m: &StandardizedMatrix, spec: &SawSpec, budget: f64) -> Result<f64> {
    let n = m.n();
    spec.check(n)?;
    let needed = ((n - 2) as f64).powi(spec.ell as i32);
    if needed > budget {
        return Err(Error::Budget { what: format!("exact SAW enumeration (n = {n}, ell = {})", spec.ell), needed, budget });
    }
    let (s, t) = spec.endpoints();
    let mut base_free = vec![1.0; n];
    base_free[s] = 0.0;
    base_free[t] = 0.0;
    let target_row = m.residual_row(t);

    let first_choices: Vec<usize> = (0..n).filter(|&v| v != s && v != t).collect();
    let ell = spec.ell;
    let partials = par::map_indexed(first_choices.len(), |k| {
        let first = first_choices[k];
        let edge = m.residual(s, first);
        if ell == 1 {
            return edge * m.residual(first, t);
        }
        let mut free = base_free.clone();
        free[first] = 0.0;
        edge * descend(m, target_row, &mut free, first, ell - 1)
    });

    Ok(pairwise_sum(&partials) * m.scale().powi(ell as i32 + 1))
}

/// Sum over walks of `remaining` further intermediates from `current` to the
/// target, with `free` marking unused vertices (1.0) and used ones (0.0).
fn descend(m: &StandardizedMatrix, target_row: &[f64], free: &mut [f64], current: usize, remaining: usize) -> f64 {
    let row = m.residual_row(current);
    if remaining == 1 {
        return dot3(row, target_row, free);
    }
    let mut acc = 0.0;
    for next in 0..m.n() {
        if free[next] == 0.0 {
            continue;
        }
        free[next] = 0.0;
        acc += row[next] * descend(m, target_row, free, next, remaining - 1);
        free[next] = 1.0;
    }
    acc
}

/// Monte Carlo estimate of `T` with its standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SawEstimate {
    pub estimate: f64,
    pub stderr: f64,
    pub samples: u64,
}

/// Unbiased estimate of `T` from uniformly random ordered tuples of distinct
/// intermediates: walk count × sample mean of the walk product.
pub fn signed_saw_mc(m: &StandardizedMatrix, spec: &SawSpec, samples: u64, rng: &mut RandomStream) -> Result<SawEstimate> {
    let n = m.n();
    spec.check(n)?;
    ensure!(samples >= 1, "need at least one Monte Carlo sample");
    let (s, t) = spec.endpoints();
    let ell = spec.ell;
    let mut pool: Vec<usize> = (0..n).filter(|&v| v != s && v != t).collect();
    let len = pool.len();
    let mut stats = RunningStats::new();
    for _ in 0..samples {
        // Partial Fisher–Yates: the first `ell` slots become a uniform ordered
        // tuple whatever the current arrangement of `pool`.
        let mut prev = s;
        let mut prod = 1.0;
        for d in 0..ell {
            let k = d + rng.index(len - d);
            pool.swap(d, k);
            prod *= m.residual(prev, pool[d]);
            prev = pool[d];
        }
        prod *= m.residual(prev, t);
        stats.push(prod);
    }
    let factor = saw_term_count(n, ell) * m.scale().powi(ell as i32 + 1);
    Ok(SawEstimate { estimate: factor * stats.mean(), stderr: factor * stats.stderr(), samples })
}

/// The exhaustive-sweep form of the estimator: every tuple visited once, so
/// the value is exact and the standard error is zero.
pub fn signed_saw_exhaustive(m: &StandardizedMatrix, spec: &SawSpec, budget: f64) -> Result<SawEstimate> {
    let estimate = signed_saw_exact_with_budget(m, spec, budget)?;
    Ok(SawEstimate { estimate, stderr: 0.0, samples: saw_term_count(m.n(), spec.ell) as u64 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Graph;
    use crate::statistics::standardize;

    fn random_graph(n: usize, density: f64, seed: u64) -> Graph {
        let mut rng = RandomStream::from_seed(seed);
        let mut g = Graph::empty(n);
        for i in 0..n {
            for j in i + 1..n {
                if rng.bernoulli(density) {
                    g.set_edge(i, j, true);
                }
            }
        }
        g
    }

    /// Independent oracle: odometer over all ℓ-tuples of {0..n}, skipping
    /// tuples that repeat a vertex or touch an endpoint.
    fn nested_loop_oracle(a: &Graph, c: f64, ell: usize) -> f64 {
        let n = a.n();
        let e = |i: usize, j: usize| if a.has_edge(i, j) { (1.0 - c) / (c * (1.0 - c)).sqrt() } else { -c / (c * (1.0 - c)).sqrt() };
        let mut idx = vec![0usize; ell];
        let mut total = 0.0;
        loop {
            let valid = idx.iter().all(|&v| v >= 2) && (0..ell).all(|x| (x + 1..ell).all(|y| idx[x] != idx[y]));
            if valid {
                let mut prod = e(0, idx[0]);
                for w in idx.windows(2) {
                    prod *= e(w[0], w[1]);
                }
                total += prod * e(idx[ell - 1], 1);
            }
            let mut pos = 0;
            loop {
                if pos == ell {
                    return total;
                }
                idx[pos] += 1;
                if idx[pos] < n {
                    break;
                }
                idx[pos] = 0;
                pos += 1;
            }
        }
    }

    #[test]
    fn tiny_examples() {
        let g = Graph::from_edges(3, &[(0, 2)]).unwrap();
        let m = standardize(&g, 0.3).unwrap();
        let t = signed_saw_exact(&m, &SawSpec::new(1).unwrap()).unwrap();
        assert!((t - m.entry(0, 2) * m.entry(2, 1)).abs() < 1e-14);

        let g = Graph::from_edges(4, &[(0, 2), (2, 1), (1, 3)]).unwrap();
        let m = standardize(&g, 0.3).unwrap();
        let t = signed_saw_exact(&m, &SawSpec::new(1).unwrap()).unwrap();
        let expect = m.entry(0, 2) * m.entry(2, 1) + m.entry(0, 3) * m.entry(3, 1);
        assert!((t - expect).abs() < 1e-14);
    }

    #[test]
    fn dfs_matches_nested_loops() {
        for (seed, (n, ell)) in [(10, 3), (12, 4), (12, 2), (8, 1), (6, 4), (9, 5)].into_iter().enumerate() {
            let g = random_graph(n, 0.4, seed as u64);
            let m = standardize(&g, 0.35).unwrap();
            let fast = signed_saw_exact(&m, &SawSpec::new(ell).unwrap()).unwrap();
            let slow = nested_loop_oracle(&g, 0.35, ell);
            assert!((fast - slow).abs() <= 1e-9 * slow.abs().max(1.0), "n={n} ell={ell}: {fast} vs {slow}");
        }
    }

    #[test]
    fn guards() {
        let m = standardize(&Graph::empty(4), 0.3).unwrap();
        assert!(signed_saw_exact(&m, &SawSpec::new(3).unwrap()).is_err());
        assert!(SawSpec::new(0).is_err());
        let big = standardize(&Graph::empty(40), 0.3).unwrap();
        let err = signed_saw_exact_with_budget(&big, &SawSpec::new(3).unwrap(), 1e4).unwrap_err();
        assert!(matches!(err, Error::Budget { .. }));
    }

    #[test]
    fn endpoints_can_be_relabeled() {
        let g = random_graph(9, 0.5, 3);
        let perm = [4, 7, 0, 1, 2, 3, 5, 6, 8];
        let direct = signed_saw_exact(&standardize(&g, 0.4).unwrap(), &SawSpec::between(3, 4, 7).unwrap()).unwrap();
        let inverse: Vec<usize> = {
            let mut inv = vec![0; 9];
            for (i, &p) in perm.iter().enumerate() {
                inv[p] = i;
            }
            inv
        };
        // Relabel so that 4 -> 0 and 7 -> 1, then use the default endpoints.
        let relabeled = g.permuted(&inverse);
        let via_default = signed_saw_exact(&standardize(&relabeled, 0.4).unwrap(), &SawSpec::new(3).unwrap()).unwrap();
        assert!((direct - via_default).abs() < 1e-9 * direct.abs().max(1.0));
    }

    #[test]
    fn mc_agrees_with_exact() {
        let g = random_graph(12, 0.5, 17);
        let m = standardize(&g, 0.3).unwrap();
        let spec = SawSpec::new(2).unwrap();
        let exact = signed_saw_exact(&m, &spec).unwrap();
        let est = signed_saw_mc(&m, &spec, 1_000_000, &mut RandomStream::from_seed(4)).unwrap();
        assert!((est.estimate - exact).abs() < 4.0 * est.stderr, "{est:?} vs {exact}");

        let sweep = signed_saw_exhaustive(&m, &spec, DEFAULT_SAW_BUDGET).unwrap();
        assert_eq!(sweep.estimate, exact);
        assert_eq!(sweep.stderr, 0.0);
        assert_eq!(sweep.samples, 90);
    }

    #[test]
    fn constant_summand_has_zero_stderr() {
        let q: f64 = 0.3;
        let m = standardize(&Graph::empty(10), q).unwrap();
        for ell in 1..=4 {
            let spec = SawSpec::new(ell).unwrap();
            let est = signed_saw_mc(&m, &spec, 500, &mut RandomStream::from_seed(ell as u64)).unwrap();
            let expect = (-(q / (1.0 - q)).sqrt()).powi(ell as i32 + 1) * saw_term_count(10, ell);
            assert!((est.estimate - expect).abs() < 1e-12 * expect.abs());
            assert_eq!(est.stderr, 0.0);
        }
    }
}
