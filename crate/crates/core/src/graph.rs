//! Dense symmetric adjacency with bit-packed rows, plus the edge-list file
//! format shared by observed graphs, geometric graphs and reconstructions.
//!
//! Edge-list format (text): a header line `n <count> m <edges>` followed by one
//! line `<i> <j>` per edge with `i < j`, vertices numbered from 1. Blank lines
//! and lines starting with `#` are ignored by the reader.

use std::fmt;
use std::io::{BufRead, Write};

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    words: usize,
    bits: Vec<u64>,
}

impl Graph {
    pub fn empty(n: usize) -> Self {
        let words = n.div_ceil(64).max(1);
        Graph { n, words, bits: vec![0; n * words] }
    }

    pub fn complete(n: usize) -> Self {
        let mut g = Graph::empty(n);
        for i in 0..n {
            for j in i + 1..n {
                g.set_edge(i, j, true);
            }
        }
        g
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = Graph::empty(n);
        for &(i, j) in edges {
            if i >= n || j >= n {
                return Err(Error::invalid(format!("edge ({i}, {j}) out of range for n = {n}")));
            }
            if i == j {
                return Err(Error::invalid(format!("self-loop at vertex {i}")));
            }
            g.set_edge(i, j, true);
        }
        Ok(g)
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.bits[i * self.words + j / 64] >> (j % 64) & 1 == 1
    }

    /// Sets or clears the undirected edge `{i, j}`. Panics on a self-loop.
    pub fn set_edge(&mut self, i: usize, j: usize, present: bool) {
        assert!(i != j, "self-loops are not allowed");
        for (a, b) in [(i, j), (j, i)] {
            let w = &mut self.bits[a * self.words + b / 64];
            if present {
                *w |= 1 << (b % 64);
            } else {
                *w &= !(1 << (b % 64));
            }
        }
    }

    pub fn degree(&self, i: usize) -> usize {
        self.row(i).iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn edge_count(&self) -> usize {
        self.bits.iter().map(|w| w.count_ones() as usize).sum::<usize>() / 2
    }

    /// Fraction of the `C(n, 2)` pairs that are edges.
    pub fn density(&self) -> f64 {
        if self.n < 2 {
            return 0.0;
        }
        self.edge_count() as f64 / (self.n * (self.n - 1) / 2) as f64
    }

    pub fn row(&self, i: usize) -> &[u64] {
        &self.bits[i * self.words..(i + 1) * self.words]
    }

    /// Edges as `(i, j)` with `i < j`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |i| (i + 1..self.n).filter(move |&j| self.has_edge(i, j)).map(move |j| (i, j)))
    }

    /// Relabels vertex `i` as `perm[i]`.
    pub fn permuted(&self, perm: &[usize]) -> Graph {
        assert_eq!(perm.len(), self.n);
        let mut g = Graph::empty(self.n);
        for (i, j) in self.edges() {
            g.set_edge(perm[i], perm[j], true);
        }
        g
    }

    pub fn complement(&self) -> Graph {
        let mut g = Graph::empty(self.n);
        for i in 0..self.n {
            for j in i + 1..self.n {
                if !self.has_edge(i, j) {
                    g.set_edge(i, j, true);
                }
            }
        }
        g
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.n).all(|i| !self.has_edge(i, i) && (0..self.n).all(|j| self.has_edge(i, j) == self.has_edge(j, i)))
    }

    pub fn write_edge_list<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "n {} m {}", self.n, self.edge_count())?;
        for (i, j) in self.edges() {
            writeln!(w, "{} {}", i + 1, j + 1)?;
        }
        Ok(())
    }

    pub fn read_edge_list<R: BufRead>(r: R) -> Result<Graph> {
        let mut graph: Option<(Graph, usize)> = None;
        let mut seen = 0usize;
        for (idx, line) in r.lines().enumerate() {
            let line = line?;
            let lineno = idx + 1;
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let toks: Vec<&str> = line.split_whitespace().collect();
            let parse = |s: &str| s.parse::<usize>().map_err(|e| Error::Parse { line: lineno, msg: format!("{s:?}: {e}") });
            match &mut graph {
                None => {
                    if toks.len() != 4 || toks[0] != "n" || toks[2] != "m" {
                        return Err(Error::Parse { line: lineno, msg: "expected header `n <count> m <edges>`".into() });
                    }
                    graph = Some((Graph::empty(parse(toks[1])?), parse(toks[3])?));
                }
                Some((g, _)) => {
                    if toks.len() != 2 {
                        return Err(Error::Parse { line: lineno, msg: "expected `<i> <j>`".into() });
                    }
                    let (i, j) = (parse(toks[0])?, parse(toks[1])?);
                    if i == 0 || j == 0 || i > g.n || j > g.n {
                        return Err(Error::Parse { line: lineno, msg: format!("vertex out of range 1..={}", g.n) });
                    }
                    if i == j {
                        return Err(Error::Parse { line: lineno, msg: format!("self-loop at vertex {i}") });
                    }
                    if g.has_edge(i - 1, j - 1) {
                        return Err(Error::Parse { line: lineno, msg: format!("duplicate edge {i} {j}") });
                    }
                    g.set_edge(i - 1, j - 1, true);
                    seen += 1;
                }
            }
        }
        let (g, m) = graph.ok_or(Error::Parse { line: 0, msg: "empty input".into() })?;
        if m != seen {
            return Err(Error::Parse { line: 0, msg: format!("header declares {m} edges, found {seen}") });
        }
        Ok(g)
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Graph {{ n: {}, edges: {:?} }}", self.n, self.edges().collect::<Vec<_>>())
    }
}
