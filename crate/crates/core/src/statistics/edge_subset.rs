use std::collections::BTreeSet;

use crate::error::{ensure, Result};

/// A set of vertex pairs `α`, viewed as a graph on its own vertex set `V(α)`.
///
/// Pairs are stored normalized (`i < j`) and sorted; vertex set, component
/// count and the dangling-edge flag are computed once at construction.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EdgeSubset {
    edges: Vec<(usize, usize)>,
    vertices: Vec<usize>,
    components: usize,
    dangling: bool,
}

impl EdgeSubset {
    pub fn new(edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut set = BTreeSet::new();
        for (i, j) in edges {
            ensure!(i != j, "self-loop ({i}, {i}) in edge subset");
            let e = (i.min(j), i.max(j));
            ensure!(set.insert(e), "duplicate pair ({}, {}) in edge subset", e.0, e.1);
        }
        Ok(Self::from_normalized(set.into_iter().collect()))
    }

    pub fn empty() -> Self {
        Self::from_normalized(Vec::new())
    }

    pub fn triangle(a: usize, b: usize, c: usize) -> Self {
        EdgeSubset::new([(a, b), (b, c), (a, c)]).expect("triangle needs distinct vertices")
    }

    /// The path visiting `vertices` in order.
    pub fn path(vertices: &[usize]) -> Result<Self> {
        EdgeSubset::new(vertices.windows(2).map(|w| (w[0], w[1])))
    }

    fn from_normalized(edges: Vec<(usize, usize)>) -> Self {
        let vertices: Vec<usize> = edges.iter().flat_map(|&(i, j)| [i, j]).collect::<BTreeSet<_>>().into_iter().collect();
        let idx = |v: usize| vertices.binary_search(&v).unwrap();

        let mut parent: Vec<usize> = (0..vertices.len()).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        let mut degree = vec![0usize; vertices.len()];
        let mut components = vertices.len();
        for &(i, j) in &edges {
            let (a, b) = (idx(i), idx(j));
            degree[a] += 1;
            degree[b] += 1;
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            if ra != rb {
                parent[ra] = rb;
                components -= 1;
            }
        }
        let dangling = degree.contains(&1);
        EdgeSubset { edges, vertices, components, dangling }
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// `|α|`, the number of pairs (the polynomial degree of `φ_α`).
    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    /// `V(α)` in increasing order.
    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn components(&self) -> usize {
        self.components
    }

    /// True for the empty set and for single-component graphs.
    pub fn is_connected(&self) -> bool {
        self.components <= 1
    }

    /// Some vertex of `α` has degree one.
    pub fn has_dangling_edge(&self) -> bool {
        self.dangling
    }

    pub fn contains_vertex(&self, v: usize) -> bool {
        self.vertices.binary_search(&v).is_ok()
    }

    pub fn contains_edge(&self, i: usize, j: usize) -> bool {
        self.edges.binary_search(&(i.min(j), i.max(j))).is_ok()
    }

    /// Largest vertex label, if any.
    pub fn max_vertex(&self) -> Option<usize> {
        self.vertices.last().copied()
    }

    /// The sub-subset selected by the bits of `mask` (bit `k` keeps edge `k`).
    pub fn select(&self, mask: u64) -> EdgeSubset {
        Self::from_normalized(self.edges.iter().enumerate().filter(|(k, _)| mask >> k & 1 == 1).map(|(_, &e)| e).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn caches() {
        let t = EdgeSubset::triangle(0, 1, 2);
        assert_eq!(t.len(), 3);
        assert_eq!(t.vertices(), &[0, 1, 2]);
        assert!(t.is_connected() && !t.has_dangling_edge());

        let p = EdgeSubset::path(&[0, 2, 1]).unwrap();
        assert!(p.has_dangling_edge());
        assert_eq!(p.edges(), &[(0, 2), (1, 2)]);

        let two = EdgeSubset::new([(0, 1), (2, 3)]).unwrap();
        assert_eq!(two.components(), 2);
        assert!(!two.is_connected());

        let e = EdgeSubset::empty();
        assert!(e.is_empty() && e.is_connected() && !e.has_dangling_edge());
    }

    #[test]
    fn rejects_loops_and_duplicates() {
        assert!(EdgeSubset::new([(1, 1)]).is_err());
        assert!(EdgeSubset::new([(1, 2), (2, 1)]).is_err());
    }

    #[test]
    fn select_subsets() {
        let t = EdgeSubset::triangle(0, 1, 2);
        assert_eq!(t.select(0), EdgeSubset::empty());
        assert_eq!(t.select(0b111), t);
        assert_eq!(t.select(0b001).edges(), &[(0, 1)]);
    }
}
