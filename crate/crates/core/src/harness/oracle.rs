//! Brute-force equivalence checks behind `pdc oracle-check`.
//!
//! The oracles read the 0/1 adjacency directly and never touch the
//! residual storage, dot products or visited masks of the fast evaluators.

use crate::error::Result;
use crate::graph::Graph;
use crate::rng::{derive_stream, Label};
use crate::statistics::{signed_saw_exact, signed_triangle, standardize, SawSpec};

/// Relative tolerance `|fast − oracle| / max(|oracle|, 1)`.
pub const ORACLE_TOLERANCE: f64 = 1e-9;
/// Largest graph drawn by [`oracle_check`].
pub const ORACLE_MAX_N: usize = 12;
/// Largest walk length drawn by [`oracle_check`].
pub const ORACLE_MAX_ELL: usize = 4;

fn entry(a: &Graph, c: f64, i: usize, j: usize) -> f64 {
    let x = if a.has_edge(i, j) { 1.0 } else { 0.0 };
    (x - c) / (c * (1.0 - c)).sqrt()
}

/// `S₃` by the triple loop over `i < j < k`.
pub fn triangle_oracle(a: &Graph, center: f64) -> f64 {
    let n = a.n();
    let mut total = 0.0;
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                total += entry(a, center, i, j) * entry(a, center, j, k) * entry(a, center, i, k);
            }
        }
    }
    total
}

/// `T` between vertices 0 and 1 by stepping an odometer through all of
/// `{0..n}^ℓ` and keeping the tuples that are self-avoiding.
pub fn saw_oracle(a: &Graph, center: f64, ell: usize) -> f64 {
    let n = a.n();
    let mut digits = vec![0usize; ell];
    let mut total = 0.0;
    loop {
        let mut ok = true;
        for x in 0..ell {
            if digits[x] < 2 || digits[..x].contains(&digits[x]) {
                ok = false;
                break;
            }
        }
        if ok {
            let mut prod = entry(a, center, 0, digits[0]);
            for w in digits.windows(2) {
                prod *= entry(a, center, w[0], w[1]);
            }
            total += prod * entry(a, center, digits[ell - 1], 1);
        }
        let mut pos = 0;
        loop {
            if pos == ell {
                return total;
            }
            digits[pos] += 1;
            if digits[pos] < n {
                break;
            }
            digits[pos] = 0;
            pos += 1;
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleCase {
    pub kind: &'static str,
    pub n: usize,
    pub ell: usize,
    pub fast: f64,
    pub oracle: f64,
    pub rel_error: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleReport {
    pub cases: Vec<OracleCase>,
    pub max_rel_error: f64,
    pub passed: bool,
}

fn rel_error(fast: f64, oracle: f64) -> f64 {
    (fast - oracle).abs() / oracle.abs().max(1.0)
}

/// Compares the fast evaluators with the oracles on `graphs` random graphs
/// with `n ≤ 12`, random density and random centering. Each graph gets one
/// triangle case and one walk case with `ℓ ≤ min(4, n − 2)`.
pub fn oracle_check(seed: u64, graphs: usize) -> Result<OracleReport> {
    let mut cases = Vec::with_capacity(2 * graphs);
    for g in 0..graphs {
        let mut rng = derive_stream(seed, &[Label::Tag("oracle-check"), Label::Index(g as u64)]);
        let n = 3 + rng.index(ORACLE_MAX_N - 2);
        let density = rng.uniform();
        let center = 0.05 + 0.9 * rng.uniform();
        let mut a = Graph::empty(n);
        for i in 0..n {
            for j in i + 1..n {
                a.set_edge(i, j, rng.bernoulli(density));
            }
        }
        let m = standardize(&a, center)?;

        let fast = signed_triangle(&m)?;
        let oracle = triangle_oracle(&a, center);
        cases.push(OracleCase { kind: "triangle", n, ell: 0, fast, oracle, rel_error: rel_error(fast, oracle) });

        let ell = 1 + rng.index(ORACLE_MAX_ELL.min(n - 2));
        let fast = signed_saw_exact(&m, &SawSpec::new(ell)?)?;
        let oracle = saw_oracle(&a, center, ell);
        cases.push(OracleCase { kind: "saw", n, ell, fast, oracle, rel_error: rel_error(fast, oracle) });
    }
    let max_rel_error = cases.iter().map(|c| c.rel_error).fold(0.0, f64::max);
    Ok(OracleReport { passed: max_rel_error <= ORACLE_TOLERANCE, cases, max_rel_error })
}
