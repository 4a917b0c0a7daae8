//! Positions on the circle of circumference one and the geometric graph they
//! induce.
//!
//! Latent file format (text): a header `n <count>` followed by lines
//! `<index> <position>` with 1-based indices; positions are written with 17
//! significant digits so that reading them back is exact.

use std::io::{BufRead, Write};

use crate::error::{ensure, Error, Result};
use crate::graph::Graph;
use crate::rng::RandomStream;

/// A point on the unit-circumference circle, stored as a value in `[0, 1)`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct CirclePosition(f64);

impl CirclePosition {
    pub fn new(value: f64) -> Result<Self> {
        ensure!((0.0..1.0).contains(&value), "circle position {value} not in [0, 1)");
        Ok(CirclePosition(value))
    }

    /// Wraps any finite real onto the circle.
    pub fn wrapping(value: f64) -> Self {
        let v = value.rem_euclid(1.0);
        // rem_euclid can round up to exactly 1.0 for tiny negative inputs.
        CirclePosition(if v >= 1.0 { 0.0 } else { v })
    }

    #[inline]
    pub fn value(self) -> f64 {
        self.0
    }
}

/// Wrap-around distance `min(|a - b|, 1 - |a - b|)`, in `[0, 1/2]`.
#[inline]
pub fn circle_dist(a: f64, b: f64) -> f64 {
    let d = (a - b).abs();
    d.min(1.0 - d)
}

/// The latent vector `z`: one circle position per vertex.
#[derive(Debug, Clone, PartialEq)]
pub struct LatentAssignment {
    positions: Vec<f64>,
}

impl LatentAssignment {
    pub fn new(positions: Vec<f64>) -> Result<Self> {
        for (i, &z) in positions.iter().enumerate() {
            ensure!((0.0..1.0).contains(&z), "latent position {z} of vertex {} not in [0, 1)", i + 1);
        }
        Ok(LatentAssignment { positions })
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.positions.len()
    }

    #[inline]
    pub fn get(&self, i: usize) -> f64 {
        self.positions[i]
    }

    pub fn positions(&self) -> &[f64] {
        &self.positions
    }

    #[inline]
    pub fn dist(&self, i: usize, j: usize) -> f64 {
        circle_dist(self.positions[i], self.positions[j])
    }

    /// Overwrites one position; used to pin endpoints in conditional experiments.
    pub fn set(&mut self, i: usize, pos: CirclePosition) {
        self.positions[i] = pos.value();
    }

    /// Adds `shift` to every position, modulo one.
    pub fn rotated(&self, shift: f64) -> LatentAssignment {
        LatentAssignment { positions: self.positions.iter().map(|&z| CirclePosition::wrapping(z + shift).value()).collect() }
    }

    pub fn write<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "n {}", self.n())?;
        for (i, z) in self.positions.iter().enumerate() {
            writeln!(w, "{} {:.16e}", i + 1, z)?;
        }
        Ok(())
    }

    pub fn read<R: BufRead>(r: R) -> Result<LatentAssignment> {
        let mut expected: Option<usize> = None;
        let mut positions = Vec::new();
        for (idx, line) in r.lines().enumerate() {
            let line = line?;
            let lineno = idx + 1;
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let toks: Vec<&str> = line.split_whitespace().collect();
            let bad = |msg: String| Error::Parse { line: lineno, msg };
            match expected {
                None => {
                    if toks.len() != 2 || toks[0] != "n" {
                        return Err(bad("expected header `n <count>`".into()));
                    }
                    expected = Some(toks[1].parse().map_err(|e| bad(format!("{e}")))?);
                }
                Some(_) => {
                    if toks.len() != 2 {
                        return Err(bad("expected `<index> <position>`".into()));
                    }
                    let index: usize = toks[0].parse().map_err(|e| bad(format!("{e}")))?;
                    if index != positions.len() + 1 {
                        return Err(bad(format!("expected index {}, found {index}", positions.len() + 1)));
                    }
                    let z: f64 = toks[1].parse().map_err(|e| bad(format!("{e}")))?;
                    positions.push(z);
                }
            }
        }
        let n = expected.ok_or(Error::Parse { line: 0, msg: "empty input".into() })?;
        if n != positions.len() {
            return Err(Error::Parse { line: 0, msg: format!("header declares {n} positions, found {}", positions.len()) });
        }
        LatentAssignment::new(positions)
    }
}

/// `n` i.i.d. uniform positions drawn from `rng`.
pub fn sample_latents(n: usize, rng: &mut RandomStream) -> Result<LatentAssignment> {
    ensure!(n >= 1, "need at least one vertex");
    Ok(LatentAssignment { positions: (0..n).map(|_| rng.uniform()).collect() })
}

pub(crate) fn check_bandwidth(tau: f64) -> Result<()> {
    ensure!((0.0..=0.5).contains(&tau), "tau = {tau} must lie in [0, 1/2]");
    Ok(())
}

/// The geometric graph `X`: `{i, j}` is an edge iff `dist(z_i, z_j) <= tau / 2`.
pub fn geometric_graph(z: &LatentAssignment, tau: f64) -> Result<Graph> {
    check_bandwidth(tau)?;
    let n = z.n();
    let half = tau / 2.0;
    let mut g = Graph::empty(n);
    for i in 0..n {
        for j in i + 1..n {
            if z.dist(i, j) <= half {
                g.set_edge(i, j, true);
            }
        }
    }
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn dist_examples() {
        assert!((circle_dist(0.10, 0.90) - 0.20).abs() < 1e-15);
        assert_eq!(circle_dist(0.30, 0.30), 0.0);
        assert_eq!(circle_dist(0.0, 0.5), 0.5);
    }

    #[test]
    fn geometric_graph_examples() {
        let z = LatentAssignment::new(vec![0.0, 0.04, 0.5]).unwrap();
        let g = geometric_graph(&z, 0.1).unwrap();
        assert_eq!(g.edges().collect::<Vec<_>>(), vec![(0, 1)]);

        let z = LatentAssignment::new(vec![0.0, 0.25, 0.5, 0.75]).unwrap();
        let g = geometric_graph(&z, 0.5).unwrap();
        assert_eq!(g.edges().collect::<Vec<_>>(), vec![(0, 1), (0, 3), (1, 2), (2, 3)]);

        let mut rng = RandomStream::from_seed(1);
        let z = sample_latents(50, &mut rng).unwrap();
        assert_eq!(geometric_graph(&z, 0.0).unwrap().edge_count(), 0);
        assert!(geometric_graph(&z, 0.6).is_err());
        assert!(geometric_graph(&z, -0.1).is_err());
    }

    #[test]
    fn sampling_contract() {
        let a = sample_latents(3, &mut RandomStream::from_seed(11)).unwrap();
        let b = sample_latents(3, &mut RandomStream::from_seed(11)).unwrap();
        assert_eq!(a, b);
        assert!(sample_latents(0, &mut RandomStream::from_seed(11)).is_err());
        let one = sample_latents(1, &mut RandomStream::from_seed(2)).unwrap();
        assert!((0.0..1.0).contains(&one.get(0)));
    }

    #[test]
    fn large_sample_mean_is_one_half() {
        let n = 100_000;
        let z = sample_latents(n, &mut RandomStream::from_seed(3)).unwrap();
        let mean = z.positions().iter().sum::<f64>() / n as f64;
        let se = (1.0f64 / 12.0 / n as f64).sqrt();
        assert!((mean - 0.5).abs() < 6.0 * se, "mean = {mean}");
    }

    #[test]
    fn closeness_probability_is_tau() {
        let mut rng = RandomStream::from_seed(4);
        let tau = 0.13;
        let m = 1_000_000;
        let hits = (0..m).filter(|_| circle_dist(rng.uniform(), rng.uniform()) <= tau / 2.0).count();
        let est = hits as f64 / m as f64;
        let se = (tau * (1.0 - tau) / m as f64).sqrt();
        assert!((est - tau).abs() < 4.0 * se, "est = {est}");
    }

    #[test]
    fn triangle_inequality_on_random_triples() {
        let mut rng = RandomStream::from_seed(5);
        for _ in 0..100_000 {
            let (a, b, c) = (rng.uniform(), rng.uniform(), rng.uniform());
            assert!(circle_dist(a, c) <= circle_dist(a, b) + circle_dist(b, c) + 1e-15);
        }
    }

    #[test]
    fn latent_file_round_trip_is_exact() {
        let z = sample_latents(20, &mut RandomStream::from_seed(6)).unwrap();
        let mut buf = Vec::new();
        z.write(&mut buf).unwrap();
        assert_eq!(LatentAssignment::read(&buf[..]).unwrap(), z);
        assert!(LatentAssignment::read("n 2\n1 0.5\n".as_bytes()).is_err());
        assert!(LatentAssignment::read("n 1\n1 1.5\n".as_bytes()).is_err());
    }

    proptest! {
        #[test]
        fn dist_symmetric_and_bounded(a in 0.0f64..1.0, b in 0.0f64..1.0) {
            let d = circle_dist(a, b);
            prop_assert_eq!(d, circle_dist(b, a));
            prop_assert!((0.0..=0.5).contains(&d));
            prop_assert_eq!(circle_dist(a, a), 0.0);
        }

        #[test]
        fn geometric_graph_rotation_invariant(seed in any::<u64>(), shift in 0.0f64..1.0, tau in 0.0f64..0.5) {
            let z = sample_latents(30, &mut RandomStream::from_seed(seed)).unwrap();
            let g = geometric_graph(&z, tau).unwrap();
            let h = geometric_graph(&z.rotated(shift), tau).unwrap();
            prop_assert_eq!(g, h);
        }
    }
}
