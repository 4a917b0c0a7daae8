//! Priors over the hidden index set `W` and the Monte Carlo pass shared by
//! the `P_αβ`, `ρ_α` and `E[φ_α]` estimators.

use crate::error::{ensure, Result};
use crate::geometry::circle_dist;
use crate::numeric::RunningStats;
use crate::par;
use crate::rng::{Label, RandomStream};
use crate::statistics::EdgeSubset;

/// Samples per parallel block. Blocks are seeded by index, so results do not
/// depend on how blocks are scheduled.
pub const MC_BLOCK: u64 = 1 << 15;

/// Largest vertex count of `α` that [`LatentPrior::draw`] must handle.
pub const MAX_DRAW_VERTICES: usize = 32;

/// One weighted draw of the hidden structure restricted to `α`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Draw {
    /// Bit `k` is set iff the `k`-th pair of `α` lies outside `W`.
    pub outside: u64,
    /// Whether the target pair `(0, 1)` lies in `W`. Only meaningful when both
    /// endpoints are vertices of `α`.
    pub target_inside: bool,
    /// Importance weight (1 for plain sampling).
    pub weight: f64,
}

/// A prior over `W ⊆ pairs`, observed through a set of pairs `α`.
pub trait LatentPrior: Sync {
    /// `P{(0, 1) ∈ W}`, which is also `P{e ∈ W}` for any single pair `e`.
    fn pair_probability(&self) -> f64;

    /// Draws the membership pattern of the pairs of `alpha`.
    fn draw(&self, alpha: &EdgeSubset, rng: &mut RandomStream) -> Draw;
}

/// `W = {(i, j) : d(z_i, z_j) ≤ τ/2}` with i.i.d. uniform latent positions.
///
/// By rotation invariance the first vertex of `α` is placed at 0. With
/// importance sampling the others are drawn from an even mixture of the
/// uniform law and the uniform law on the arc of half-width `(v − 1)τ/2`
/// around it, which is where all the "every pair close" events live.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CirclePrior {
    tau: f64,
    importance: bool,
}

impl CirclePrior {
    pub fn new(tau: f64, importance: bool) -> Result<Self> {
        ensure!(tau > 0.0 && tau <= 0.5, "bandwidth tau must lie in (0, 1/2], got {tau}");
        Ok(CirclePrior { tau, importance })
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    /// Fills `pos` (indexed like `alpha.vertices()`) and returns the weight.
    pub fn positions(&self, v: usize, pos: &mut [f64], rng: &mut RandomStream) -> f64 {
        pos[0] = 0.0;
        let h = (v.saturating_sub(1)) as f64 * self.tau / 2.0;
        if !self.importance || h >= 0.5 {
            for x in pos[1..v].iter_mut() {
                *x = rng.uniform();
            }
            return 1.0;
        }
        let local_density = 1.0 / (2.0 * h);
        let mut weight = 1.0;
        for x in pos[1..v].iter_mut() {
            let y = if rng.uniform() < 0.5 { rng.uniform() } else { (rng.uniform() * 2.0 - 1.0) * h };
            let y = y.rem_euclid(1.0);
            let inside = circle_dist(y, 0.0) <= h;
            let q = 0.5 + if inside { 0.5 * local_density } else { 0.0 };
            weight /= q;
            *x = y;
        }
        weight
    }
}

impl LatentPrior for CirclePrior {
    fn pair_probability(&self) -> f64 {
        self.tau
    }

    fn draw(&self, alpha: &EdgeSubset, rng: &mut RandomStream) -> Draw {
        let verts = alpha.vertices();
        let v = verts.len();
        let mut pos = [0.0f64; MAX_DRAW_VERTICES];
        let weight = if v == 0 { 1.0 } else { self.positions(v, &mut pos, rng) };
        let at = |x: usize| pos[verts.binary_search(&x).unwrap()];
        let half = self.tau / 2.0;
        let mut outside = 0u64;
        for (k, &(i, j)) in alpha.edges().iter().enumerate() {
            if circle_dist(at(i), at(j)) > half {
                outside |= 1 << k;
            }
        }
        let target_inside = alpha.contains_vertex(0) && alpha.contains_vertex(1) && circle_dist(at(0), at(1)) <= half;
        Draw { outside, target_inside, weight }
    }
}

/// Weighted histogram of the outside-pattern of `α` over `samples` draws.
#[derive(Debug, Clone, PartialEq)]
pub struct PatternHistogram {
    pub samples: u64,
    /// `Σ w` and `Σ w²` per outside-pattern.
    pub weight: Vec<f64>,
    pub weight_sq: Vec<f64>,
    /// `Σ w` and `Σ w²` over draws with no pair of `α` outside and the target inside.
    pub joint: f64,
    pub joint_sq: f64,
}

impl PatternHistogram {
    fn new(patterns: usize) -> Self {
        PatternHistogram { samples: 0, weight: vec![0.0; patterns], weight_sq: vec![0.0; patterns], joint: 0.0, joint_sq: 0.0 }
    }

    fn absorb(&mut self, other: &PatternHistogram) {
        self.samples += other.samples;
        for k in 0..self.weight.len() {
            self.weight[k] += other.weight[k];
            self.weight_sq[k] += other.weight_sq[k];
        }
        self.joint += other.joint;
        self.joint_sq += other.joint_sq;
    }

    /// Estimate and standard error of `P{α ∖ W = pattern}`.
    pub fn probability(&self, pattern: u64) -> (f64, f64) {
        let k = pattern as usize;
        mean_and_stderr(self.weight[k], self.weight_sq[k], self.samples)
    }

    /// Estimate and standard error of `P{α ∪ {(0,1)} ⊆ W}`.
    pub fn joint_probability(&self) -> (f64, f64) {
        mean_and_stderr(self.joint, self.joint_sq, self.samples)
    }
}

fn mean_and_stderr(sum: f64, sum_sq: f64, n: u64) -> (f64, f64) {
    let nf = n as f64;
    let mean = sum / nf;
    let var = if n > 1 { ((sum_sq / nf - mean * mean) * nf / (nf - 1.0)).max(0.0) } else { 0.0 };
    (mean, (var / nf).sqrt())
}

/// Splits `samples` into fixed blocks, runs `block` on each with its own
/// stream and returns the per-block results in block order.
pub(crate) fn blocked<T: Send>(samples: u64, rng: &RandomStream, block: impl Fn(u64, &mut RandomStream) -> T + Sync) -> Vec<T> {
    let blocks = samples.div_ceil(MC_BLOCK) as usize;
    par::map_indexed(blocks, |b| {
        let count = MC_BLOCK.min(samples - b as u64 * MC_BLOCK);
        let mut stream = rng.split(Label::Index(b as u64));
        block(count, &mut stream)
    })
}

/// One pass over the prior recording every outside-pattern of `α`.
pub fn pattern_histogram(prior: &dyn LatentPrior, alpha: &EdgeSubset, samples: u64, rng: &RandomStream) -> Result<PatternHistogram> {
    ensure!(samples >= 2, "need at least two Monte Carlo samples");
    ensure!(alpha.len() <= 16, "pattern histogram supports at most 16 pairs");
    ensure!(alpha.num_vertices() <= MAX_DRAW_VERTICES, "too many vertices for a latent draw");
    let patterns = 1usize << alpha.len();
    let parts = blocked(samples, rng, |count, stream| {
        let mut h = PatternHistogram::new(patterns);
        h.samples = count;
        for _ in 0..count {
            let d = prior.draw(alpha, stream);
            let w = d.weight;
            h.weight[d.outside as usize] += w;
            h.weight_sq[d.outside as usize] += w * w;
            if d.outside == 0 && d.target_inside {
                h.joint += w;
                h.joint_sq += w * w;
            }
        }
        h
    });
    let mut total = PatternHistogram::new(patterns);
    for p in &parts {
        total.absorb(p);
    }
    Ok(total)
}

/// Mean and spread of `f(draw)` over the prior, merged block by block.
pub(crate) fn draw_stats(
    prior: &dyn LatentPrior,
    alpha: &EdgeSubset,
    samples: u64,
    rng: &RandomStream,
    f: impl Fn(&Draw) -> f64 + Sync,
) -> RunningStats {
    let parts = blocked(samples, rng, |count, stream| {
        let mut s = RunningStats::new();
        for _ in 0..count {
            s.push(f(&prior.draw(alpha, stream)));
        }
        s
    });
    let mut total = RunningStats::new();
    for p in &parts {
        total.merge(p);
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn importance_weights_are_unbiased() {
        // E_q[w] = 1 and the single-pair closeness probability is τ.
        let prior = CirclePrior::new(0.02, true).unwrap();
        let alpha = EdgeSubset::new([(0, 1)]).unwrap();
        let rng = RandomStream::from_seed(8);
        let h = pattern_histogram(&prior, &alpha, 400_000, &rng).unwrap();
        let (inside, se_in) = h.probability(0);
        let (out, se_out) = h.probability(1);
        assert!((inside - 0.02).abs() < 4.0 * se_in, "{inside} ± {se_in}");
        assert!((inside + out - 1.0).abs() < 4.0 * (se_in + se_out));
        let (joint, _) = h.joint_probability();
        assert_eq!(joint, inside);
    }

    #[test]
    fn blocks_do_not_depend_on_scheduling() {
        let prior = CirclePrior::new(0.1, true).unwrap();
        let alpha = EdgeSubset::triangle(0, 1, 2);
        let rng = RandomStream::from_seed(1);
        let a = pattern_histogram(&prior, &alpha, 100_003, &rng).unwrap();
        let b = pattern_histogram(&prior, &alpha, 100_003, &rng).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.samples, 100_003);
    }

    #[test]
    fn rejects_degenerate_bandwidth() {
        assert!(CirclePrior::new(0.0, true).is_err());
        assert!(CirclePrior::new(0.6, false).is_err());
    }
}
