//! Simple undirected graphs on up to 64 vertices, stored as adjacency bit rows.
//!
//! Vertices are 0-based everywhere in the API; the 1-based convention of the
//! text formats (DIMACS, edge lists) is converted at the I/O boundary only.

mod io;
mod named;
mod random;

pub use io::{format_edge_list, parse_auto, parse_dimacs, parse_edge_list};
pub use named::{named_graph, parse_named_spec, GraphFamily};
pub use random::{
    gen_erdos_renyi, labeled_graphs, random_bipartite, random_forest, random_graph, random_tree,
    random_weights,
};

use thiserror::Error;

/// Largest vertex count supported by the bit-row representation.
pub const MAX_VERTICES: usize = 64;

#[derive(Debug, Error, PartialEq)]
pub enum GraphError {
    #[error("vertex {0} out of range 1..={1}")]
    VertexOutOfRange(usize, usize),
    #[error("self-loop at vertex {0} rejected (simple graphs only)")]
    SelfLoop(usize),
    #[error("graph order {0} exceeds supported maximum {MAX_VERTICES}")]
    TooLarge(usize),
    #[error("graph must have at least one vertex")]
    Empty,
    #[error("parse error: {0}")]
    Parse(String),
    #[error("unknown graph family `{0}`")]
    UnknownFamily(String),
    #[error("edge probability {0} outside [0, 1]")]
    BadProbability(f64),
    #[error("negative weight {1} at vertex {0}")]
    NegativeWeight(usize, f64),
}

/// A simple undirected graph: symmetric adjacency, zero diagonal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    rows: Vec<u64>,
}

impl Graph {
    /// Edgeless graph on `n` vertices.
    pub fn empty(n: usize) -> Result<Self, GraphError> {
        if n == 0 {
            return Err(GraphError::Empty);
        }
        if n > MAX_VERTICES {
            return Err(GraphError::TooLarge(n));
        }
        Ok(Self {
            n,
            rows: vec![0; n],
        })
    }

    /// Builds a graph from 1-based edge pairs. Duplicate edges collapse.
    pub fn from_edge_list(n: usize, edges: &[(usize, usize)]) -> Result<Self, GraphError> {
        let mut g = Self::empty(n)?;
        for &(u, v) in edges {
            if u < 1 || u > n {
                return Err(GraphError::VertexOutOfRange(u, n));
            }
            if v < 1 || v > n {
                return Err(GraphError::VertexOutOfRange(v, n));
            }
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            g.add_edge(u - 1, v - 1);
        }
        Ok(g)
    }

    /// Adds an undirected edge between 0-based vertices.
    pub(crate) fn add_edge(&mut self, u: usize, v: usize) {
        debug_assert!(u != v && u < self.n && v < self.n);
        self.rows[u] |= 1 << v;
        self.rows[v] |= 1 << u;
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u != v && (self.rows[u] >> v) & 1 == 1
    }

    /// Neighbor bitmask of `v`.
    pub fn neighbors(&self, v: usize) -> u64 {
        self.rows[v]
    }

    /// Closed neighborhood bitmask: `v` together with its neighbors.
    pub fn closed_neighbors(&self, v: usize) -> u64 {
        self.rows[v] | (1 << v)
    }

    pub fn degree(&self, v: usize) -> usize {
        self.rows[v].count_ones() as usize
    }

    pub fn degrees(&self) -> Vec<usize> {
        (0..self.n).map(|v| self.degree(v)).collect()
    }

    pub fn max_degree(&self) -> usize {
        (0..self.n).map(|v| self.degree(v)).max().unwrap_or(0)
    }

    /// True when every vertex has the same degree `d`; returns that degree.
    pub fn regular_degree(&self) -> Option<usize> {
        let d = self.degree(0);
        (1..self.n).all(|v| self.degree(v) == d).then_some(d)
    }

    pub fn edge_count(&self) -> usize {
        self.rows.iter().map(|r| r.count_ones() as usize).sum::<usize>() / 2
    }

    /// Edges as 0-based pairs `(u, v)` with `u < v`, sorted.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for u in 0..self.n {
            let mut bits = self.rows[u] & !((1u64 << (u + 1)) - 1);
            while bits != 0 {
                let v = bits.trailing_zeros() as usize;
                out.push((u, v));
                bits &= bits - 1;
            }
        }
        out
    }

    /// Bitmask with one bit per vertex.
    pub fn full_mask(&self) -> u64 {
        if self.n == 64 {
            u64::MAX
        } else {
            (1u64 << self.n) - 1
        }
    }

    /// Subgraph induced by the 0-based vertices in `s`, relabeled in the
    /// order given.
    pub fn induced_subgraph(&self, s: &[usize]) -> Result<Self, GraphError> {
        for &v in s {
            if v >= self.n {
                return Err(GraphError::VertexOutOfRange(v + 1, self.n));
            }
        }
        let mut g = Self::empty(s.len().max(1))?;
        if s.is_empty() {
            // A graph needs a vertex; callers guard against empty subsets.
            return Err(GraphError::Empty);
        }
        for (i, &u) in s.iter().enumerate() {
            for (j, &v) in s.iter().enumerate().skip(i + 1) {
                if self.has_edge(u, v) {
                    g.add_edge(i, j);
                }
            }
        }
        Ok(g)
    }

    /// Subgraph induced by a vertex bitmask, relabeled in increasing order.
    pub fn induced_by_mask(&self, mask: u64) -> Result<Self, GraphError> {
        let vs: Vec<usize> = (0..self.n).filter(|&v| (mask >> v) & 1 == 1).collect();
        self.induced_subgraph(&vs)
    }

    /// Complement graph (used to enumerate independent sets as cliques).
    pub fn complement(&self) -> Self {
        let full = self.full_mask();
        let rows = (0..self.n)
            .map(|v| (!self.rows[v]) & full & !(1u64 << v))
            .collect();
        Self { n: self.n, rows }
    }

    /// Disjoint union; vertices of `other` are relabeled after `self`.
    pub fn disjoint_union(&self, other: &Self) -> Result<Self, GraphError> {
        let n = self.n + other.n;
        let mut g = Self::empty(n)?;
        g.rows[..self.n].copy_from_slice(&self.rows);
        for v in 0..other.n {
            g.rows[self.n + v] = other.rows[v] << self.n;
        }
        Ok(g)
    }

    /// Connected components as sorted vertex lists, ordered by smallest member.
    pub fn connected_components(&self) -> Vec<Vec<usize>> {
        let mut seen = 0u64;
        let mut comps = Vec::new();
        for start in 0..self.n {
            if (seen >> start) & 1 == 1 {
                continue;
            }
            let mut comp = 1u64 << start;
            loop {
                let mut grown = comp;
                let mut bits = comp;
                while bits != 0 {
                    let v = bits.trailing_zeros() as usize;
                    grown |= self.rows[v];
                    bits &= bits - 1;
                }
                if grown == comp {
                    break;
                }
                comp = grown;
            }
            seen |= comp;
            comps.push((0..self.n).filter(|&v| (comp >> v) & 1 == 1).collect());
        }
        comps
    }

    /// True iff the graph is acyclic.
    pub fn is_forest(&self) -> bool {
        // A graph is a forest iff |E| = n - (#components).
        let c = self.connected_components().len();
        self.edge_count() == self.n - c
    }

    /// Adjacency matrix as nested 0/1 rows.
    pub fn adjacency_matrix(&self) -> Vec<Vec<f64>> {
        (0..self.n)
            .map(|u| (0..self.n).map(|v| if self.has_edge(u, v) { 1.0 } else { 0.0 }).collect())
            .collect()
    }
}

/// Non-negative per-vertex weights.
#[derive(Debug, Clone, PartialEq)]
pub struct VertexWeights(Vec<f64>);

impl VertexWeights {
    pub fn new(w: Vec<f64>) -> Result<Self, GraphError> {
        for (i, &wi) in w.iter().enumerate() {
            if wi < 0.0 || !wi.is_finite() {
                return Err(GraphError::NegativeWeight(i + 1, wi));
            }
        }
        Ok(Self(w))
    }

    pub fn uniform(n: usize) -> Self {
        Self(vec![1.0; n])
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Total weight of the vertices selected by `mask`.
    pub fn mask_weight(&self, mask: u64) -> f64 {
        let mut s = 0.0;
        let mut bits = mask;
        while bits != 0 {
            let v = bits.trailing_zeros() as usize;
            s += self.0[v];
            bits &= bits - 1;
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn path_adjacency() {
        let g = Graph::from_edge_list(3, &[(1, 2), (2, 3)]).unwrap();
        assert_eq!(g.adjacency_matrix(), vec![
            vec![0.0, 1.0, 0.0],
            vec![1.0, 0.0, 1.0],
            vec![0.0, 1.0, 0.0],
        ]);
    }

    #[test]
    fn empty_graph_has_no_edges() {
        let g = Graph::from_edge_list(2, &[]).unwrap();
        assert_eq!(g.edge_count(), 0);
    }

    #[test]
    fn self_loop_rejected() {
        assert_eq!(
            Graph::from_edge_list(3, &[(1, 1)]),
            Err(GraphError::SelfLoop(1))
        );
    }

    #[test]
    fn out_of_range_rejected() {
        assert_eq!(
            Graph::from_edge_list(3, &[(1, 4)]),
            Err(GraphError::VertexOutOfRange(4, 3))
        );
    }

    #[test]
    fn duplicate_edges_collapse() {
        let g = Graph::from_edge_list(3, &[(1, 2), (2, 1), (1, 2)]).unwrap();
        assert_eq!(g.edge_count(), 1);
    }

    #[test]
    fn induced_subgraph_cases() {
        let c4 = named_graph(GraphFamily::Cycle, 4).unwrap();
        let pair = c4.induced_subgraph(&[0, 1]).unwrap();
        assert_eq!(pair.edge_count(), 1);

        let p3 = named_graph(GraphFamily::Path, 3).unwrap();
        let ends = p3.induced_subgraph(&[0, 2]).unwrap();
        assert_eq!(ends.edge_count(), 0);

        let all: Vec<usize> = (0..4).collect();
        assert_eq!(c4.induced_subgraph(&all).unwrap(), c4);
    }

    #[test]
    fn forest_and_components() {
        let p3 = named_graph(GraphFamily::Path, 3).unwrap();
        assert!(p3.is_forest());
        assert_eq!(p3.connected_components(), vec![vec![0, 1, 2]]);

        let c8 = named_graph(GraphFamily::Cycle, 8).unwrap();
        assert!(!c8.is_forest());

        let e4 = Graph::empty(4).unwrap();
        assert!(e4.is_forest());
        assert_eq!(e4.connected_components().len(), 4);
    }

    #[test]
    fn forest_edge_count_identity() {
        let g = Graph::from_edge_list(6, &[(1, 2), (2, 3), (5, 6)]).unwrap();
        assert!(g.is_forest());
        let c = g.connected_components().len();
        assert_eq!(g.edge_count(), g.n() - c);
    }

    #[test]
    fn disjoint_union_relabels() {
        let k2 = named_graph(GraphFamily::Complete, 2).unwrap();
        let g = k2.disjoint_union(&k2).unwrap();
        assert_eq!(g.n(), 4);
        assert!(g.has_edge(0, 1) && g.has_edge(2, 3));
        assert!(!g.has_edge(1, 2));
    }

    #[test]
    fn weights_reject_negative() {
        assert!(VertexWeights::new(vec![1.0, -0.5]).is_err());
        let w = VertexWeights::new(vec![3.0, 1.0, 3.0]).unwrap();
        assert_eq!(w.mask_weight(0b101), 6.0);
    }
}
