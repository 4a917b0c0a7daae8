//! Isomorphism classes of small edge sets.
//!
//! A shape is an edge set up to relabeling of its vertices. Rooted shapes keep
//! vertices 0 and 1 fixed (they stand for the two endpoints of the estimand)
//! and only relabel the rest. Canonical forms are found by brute force over
//! permutations, which is cheap for the vertex counts allowed here.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{ensure, Result};
use crate::numeric::falling_factorial;
use crate::statistics::EdgeSubset;

/// Largest vertex count accepted by the canonicalizer.
pub const MAX_SHAPE_VERTICES: usize = 8;

/// A canonical representative of an isomorphism class.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Shape {
    edges: EdgeSubset,
    num_vertices: usize,
    roots: usize,
    automorphisms: u64,
}

impl Shape {
    /// Edges in canonical labeling, vertices `0..num_vertices`.
    pub fn edges(&self) -> &EdgeSubset {
        &self.edges
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    /// Vertex count, including isolated roots.
    pub fn num_vertices(&self) -> usize {
        self.num_vertices
    }

    pub fn components(&self) -> usize {
        self.edges.components()
    }

    pub fn is_connected(&self) -> bool {
        self.edges.is_connected()
    }

    pub fn has_dangling_edge(&self) -> bool {
        self.edges.has_dangling_edge()
    }

    /// 0 for plain shapes, 2 for shapes rooted at vertices 0 and 1.
    pub fn roots(&self) -> usize {
        self.roots
    }

    /// Size of the automorphism group (fixing the roots pointwise).
    pub fn automorphisms(&self) -> u64 {
        self.automorphisms
    }

    /// Number of edge sets of this shape in the complete graph on `n`
    /// vertices; for rooted shapes the roots are pinned to vertices 1 and 2.
    pub fn embedding_count(&self, n: usize) -> f64 {
        let free = (self.num_vertices - self.roots) as u64;
        let pool = n.saturating_sub(self.roots) as u64;
        falling_factorial(pool, free) / self.automorphisms as f64
    }

    /// Stable identifier, e.g. `0-1;0-2;1-2`.
    pub fn id(&self) -> String {
        if self.edges.is_empty() {
            return "empty".into();
        }
        self.edges.edges().iter().map(|(i, j)| format!("{i}-{j}")).collect::<Vec<_>>().join(";")
    }
}

impl fmt::Display for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.id())
    }
}

/// Canonical shape of `alpha`. With `rooted`, vertices 0 and 1 must keep their
/// labels and are always counted as vertices of the shape.
pub fn canonical_shape(alpha: &EdgeSubset, rooted: bool) -> Result<Shape> {
    let roots = if rooted { 2 } else { 0 };
    // Compact labels: roots first, then the remaining vertices in order.
    let mut labels: Vec<usize> = if rooted { vec![0, 1] } else { Vec::new() };
    labels.extend(alpha.vertices().iter().copied().filter(|&v| !(rooted && v < 2)));
    let v = labels.len();
    ensure!(v <= MAX_SHAPE_VERTICES, "shape has {v} vertices, at most {MAX_SHAPE_VERTICES} supported");
    let index = |x: usize| labels.iter().position(|&l| l == x).unwrap();
    let compact: Vec<(usize, usize)> = alpha.edges().iter().map(|&(i, j)| (index(i), index(j))).collect();
    let (best, automorphisms) = canonicalize(&compact, v, roots);
    Ok(Shape { edges: EdgeSubset::new(best).expect("relabeling keeps pairs distinct"), num_vertices: v, roots, automorphisms })
}

fn relabel(edges: &[(usize, usize)], perm: &[usize]) -> Vec<(usize, usize)> {
    let mut out: Vec<(usize, usize)> = edges
        .iter()
        .map(|&(i, j)| {
            let (a, b) = (perm[i], perm[j]);
            (a.min(b), a.max(b))
        })
        .collect();
    out.sort_unstable();
    out
}

/// Lexicographically smallest relabeling and the number of permutations
/// that fix the edge set.
fn canonicalize(edges: &[(usize, usize)], v: usize, fixed: usize) -> (Vec<(usize, usize)>, u64) {
    let identity = relabel(edges, &(0..v).collect::<Vec<_>>());
    let mut best: Option<Vec<(usize, usize)>> = None;
    let mut automorphisms = 0u64;
    let mut perm: Vec<usize> = (0..v).collect();

    fn visit(
        perm: &mut Vec<usize>,
        k: usize,
        edges: &[(usize, usize)],
        identity: &[(usize, usize)],
        best: &mut Option<Vec<(usize, usize)>>,
        automorphisms: &mut u64,
    ) {
        if k == perm.len() {
            let image = relabel(edges, perm);
            if image == identity {
                *automorphisms += 1;
            }
            if best.as_ref().is_none_or(|b| image < *b) {
                *best = Some(image);
            }
            return;
        }
        for i in k..perm.len() {
            perm.swap(k, i);
            visit(perm, k + 1, edges, identity, best, automorphisms);
            perm.swap(k, i);
        }
    }

    visit(&mut perm, fixed.min(v), edges, &identity, &mut best, &mut automorphisms);
    (best.unwrap_or_default(), automorphisms)
}

fn grow(seeds: Vec<Shape>, max_edges: usize, vertex_budget: usize, rooted: bool, new_new: bool) -> Result<Vec<Shape>> {
    let mut all: BTreeSet<Shape> = seeds.iter().cloned().collect();
    let mut frontier = seeds;
    for _ in 0..max_edges {
        let mut next = BTreeSet::new();
        for shape in &frontier {
            let v = shape.num_vertices;
            let edges = shape.edges.edges();
            let mut candidates: Vec<(usize, usize)> = Vec::new();
            for i in 0..v {
                for j in i + 1..v {
                    candidates.push((i, j));
                }
                if v < vertex_budget {
                    candidates.push((i, v));
                }
            }
            if new_new && v + 2 <= vertex_budget {
                candidates.push((v, v + 1));
            }
            for e in candidates {
                if edges.contains(&e) {
                    continue;
                }
                let grown = EdgeSubset::new(edges.iter().copied().chain(std::iter::once(e)))?;
                let s = canonical_shape(&grown, rooted)?;
                if !all.contains(&s) {
                    next.insert(s);
                }
            }
        }
        all.extend(next.iter().cloned());
        frontier = next.into_iter().collect();
    }
    Ok(all.into_iter().collect())
}

fn check_sizes(max_edges: usize, vertex_budget: usize) -> Result<()> {
    ensure!(max_edges <= 6, "shape enumeration supports at most 6 edges, got {max_edges}");
    ensure!(
        (2..=MAX_SHAPE_VERTICES).contains(&vertex_budget),
        "vertex budget must lie in 2..={MAX_SHAPE_VERTICES}, got {vertex_budget}"
    );
    Ok(())
}

fn order(mut shapes: Vec<Shape>) -> Vec<Shape> {
    shapes.sort_by(|a, b| (a.num_edges(), a.num_vertices, &a.edges).cmp(&(b.num_edges(), b.num_vertices, &b.edges)));
    shapes
}

/// All shapes with `1..=max_edges` edges and at most `vertex_budget`
/// vertices, ordered by edge count then vertex count.
pub fn enumerate_shapes(max_edges: usize, vertex_budget: usize) -> Result<Vec<Shape>> {
    check_sizes(max_edges, vertex_budget)?;
    let empty = Shape { edges: EdgeSubset::empty(), num_vertices: 0, roots: 0, automorphisms: 1 };
    let shapes = grow(vec![empty], max_edges, vertex_budget, false, true)?;
    Ok(order(shapes.into_iter().filter(|s| !s.edges.is_empty()).collect()))
}

/// Connected rooted shapes with `1..=max_edges` edges that contain both roots.
pub fn enumerate_rooted_shapes(max_edges: usize, vertex_budget: usize) -> Result<Vec<Shape>> {
    check_sizes(max_edges, vertex_budget)?;
    let bare = Shape { edges: EdgeSubset::empty(), num_vertices: 2, roots: 2, automorphisms: 1 };
    // Growing from root 0 along a spanning search order reaches every
    // connected rooted shape without ever adding two new vertices at once.
    let shapes = grow(vec![bare], max_edges, vertex_budget, true, false)?;
    Ok(order(
        shapes.into_iter().filter(|s| s.is_connected() && s.edges.contains_vertex(0) && s.edges.contains_vertex(1)).collect(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn count_with(shapes: &[Shape], m: usize) -> usize {
        shapes.iter().filter(|s| s.num_edges() == m).count()
    }

    #[test]
    fn small_graph_counts() {
        // Graphs without isolated vertices: 1, 2, 5, 11 classes with 1..4 edges.
        let shapes = enumerate_shapes(4, 8).unwrap();
        assert_eq!([1, 2, 3, 4].map(|m| count_with(&shapes, m)), [1, 2, 5, 11]);
        let tri = shapes.iter().find(|s| s.num_edges() == 3 && s.num_vertices() == 3).unwrap();
        assert_eq!(tri.automorphisms(), 6);
        assert_eq!(tri.embedding_count(100), 161700.0);
        let survivors: Vec<&Shape> = shapes.iter().filter(|s| !s.has_dangling_edge()).collect();
        assert_eq!(survivors.len(), 2);
        let c4 = survivors.iter().find(|s| s.num_edges() == 4).unwrap();
        assert_eq!(c4.automorphisms(), 8);
        assert_eq!(c4.embedding_count(10), 5040.0 / 8.0);
    }

    #[test]
    fn vertex_budget_limits_disjoint_unions() {
        let shapes = enumerate_shapes(3, 5).unwrap();
        assert!(shapes.iter().all(|s| s.num_vertices() <= 5));
        assert_eq!(count_with(&shapes, 3), 4);
    }

    #[test]
    fn labeled_counts_by_brute_force() {
        // Σ over shapes of embedding counts equals the number of labeled edge
        // sets of that size in K_n (all of which have ≤ 2m ≤ 8 vertices).
        let n = 7;
        let shapes = enumerate_shapes(4, 8).unwrap();
        let pairs = n * (n - 1) / 2;
        for m in 1..=4 {
            let total: f64 = shapes.iter().filter(|s| s.num_edges() == m).map(|s| s.embedding_count(n)).sum();
            assert!((total - crate::numeric::binomial(pairs as u64, m as u64)).abs() < 1e-9, "m = {m}");
        }
    }

    #[test]
    fn rooted_shapes() {
        let rooted = enumerate_rooted_shapes(2, 8).unwrap();
        let ids: Vec<String> = rooted.iter().map(Shape::id).collect();
        assert_eq!(ids, ["0-1", "0-1;0-2", "0-1;1-2", "0-2;1-2"]);
        let path = &rooted[3];
        assert_eq!(path.automorphisms(), 1);
        assert_eq!(path.embedding_count(50), 48.0);

        // Labeled check: connected edge sets in K_6 containing vertices 0, 1.
        let n = 6;
        let all_pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
        let rooted3 = enumerate_rooted_shapes(3, 8).unwrap();
        for m in 1..=3usize {
            let mut labeled = 0u64;
            let k = all_pairs.len();
            for mask in 0u64..1 << k {
                if mask.count_ones() as usize != m {
                    continue;
                }
                let a = EdgeSubset::new((0..k).filter(|b| mask >> b & 1 == 1).map(|b| all_pairs[b])).unwrap();
                if a.is_connected() && a.contains_vertex(0) && a.contains_vertex(1) {
                    labeled += 1;
                }
            }
            let counted: f64 = rooted3.iter().filter(|s| s.num_edges() == m).map(|s| s.embedding_count(n)).sum();
            assert_eq!(counted, labeled as f64, "m = {m}");
        }
    }

    #[test]
    fn canonical_form_is_label_free() {
        let a = EdgeSubset::new([(3, 9), (9, 4), (4, 3), (4, 12)]).unwrap();
        let b = EdgeSubset::new([(0, 1), (1, 2), (0, 2), (0, 3)]).unwrap();
        assert_eq!(canonical_shape(&a, false).unwrap(), canonical_shape(&b, false).unwrap());
        let r1 = EdgeSubset::new([(0, 5), (5, 1)]).unwrap();
        let r2 = EdgeSubset::new([(0, 2), (2, 1)]).unwrap();
        let r3 = EdgeSubset::new([(0, 2), (2, 3)]).unwrap();
        assert_eq!(canonical_shape(&r1, true).unwrap(), canonical_shape(&r2, true).unwrap());
        assert_ne!(canonical_shape(&r1, true).unwrap(), canonical_shape(&r3, true).unwrap());
        assert_eq!(canonical_shape(&r3, true).unwrap().num_vertices(), 4);
    }
}
