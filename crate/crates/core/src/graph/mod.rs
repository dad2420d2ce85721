//! Finite multigraphs in the half-edge (dart) model.
//!
//! A graph is a set of darts, each with a tail vertex, together with an
//! involution pairing every dart with its reversal. Fixed points of the
//! involution are half-loops; they contribute one to the degree of their
//! vertex and one to the diagonal of the adjacency matrix.

mod covering;
pub mod families;
mod marked;

use std::collections::BTreeMap;

use nalgebra::DMatrix;

use crate::error::{Error, Result};

pub use covering::{validate_covering, CoveringMap, CoveringViolation};
pub use marked::{marked_distance, marked_isometric, MarkedDistance, MarkedGraph, MarkedIsomorphism};

/// Dense integer matrix used for adjacency, degree and Hashimoto operators.
pub type IntMatrix = DMatrix<i64>;

#[derive(Debug, Clone)]
pub struct HalfEdgeGraph {
    vertex_count: usize,
    tails: Vec<usize>,
    involution: Vec<usize>,
    labels: BTreeMap<usize, String>,
    // CSR incidence: darts with tail v are incidence[offsets[v]..offsets[v + 1]]
    offsets: Vec<usize>,
    incidence: Vec<usize>,
}

impl PartialEq for HalfEdgeGraph {
    fn eq(&self, other: &Self) -> bool {
        self.vertex_count == other.vertex_count
            && self.tails == other.tails
            && self.involution == other.involution
    }
}

impl Eq for HalfEdgeGraph {}

impl HalfEdgeGraph {
    /// Builds a graph from dart tails and the dart involution, rejecting
    /// out-of-range tails and involutions that are not self-inverse.
    pub fn new(vertex_count: usize, tails: Vec<usize>, involution: Vec<usize>) -> Result<Self> {
        if tails.len() != involution.len() {
            return Err(Error::graph(format!(
                "{} darts but involution has {} entries",
                tails.len(),
                involution.len()
            )));
        }
        for (d, &t) in tails.iter().enumerate() {
            if t >= vertex_count {
                return Err(Error::graph(format!(
                    "dart {d} has tail {t} but the graph has {vertex_count} vertices"
                )));
            }
        }
        for (d, &r) in involution.iter().enumerate() {
            if r >= tails.len() {
                return Err(Error::graph(format!(
                    "involution maps dart {d} to nonexistent dart {r}"
                )));
            }
            if involution[r] != d {
                return Err(Error::graph(format!(
                    "involution is not self-inverse at dart {d}: {d} -> {r} -> {}",
                    involution[r]
                )));
            }
        }
        let mut counts = vec![0usize; vertex_count + 1];
        for &t in &tails {
            counts[t + 1] += 1;
        }
        for v in 0..vertex_count {
            counts[v + 1] += counts[v];
        }
        let offsets = counts;
        let mut fill = offsets.clone();
        let mut incidence = vec![0; tails.len()];
        for (d, &t) in tails.iter().enumerate() {
            incidence[fill[t]] = d;
            fill[t] += 1;
        }
        Ok(Self {
            vertex_count,
            tails,
            involution,
            labels: BTreeMap::new(),
            offsets,
            incidence,
        })
    }

    /// Graph with `vertex_count` isolated vertices.
    pub fn empty(vertex_count: usize) -> Self {
        Self::new(vertex_count, Vec::new(), Vec::new()).expect("edgeless graph is valid")
    }

    /// Builds a graph from undirected edges. An edge `(u, u)` is a full loop
    /// (two darts at `u`, reversals of each other).
    pub fn from_edges(vertex_count: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut builder = GraphBuilder::new(vertex_count);
        for &(u, v) in edges {
            builder.add_edge(u, v);
        }
        builder.build()
    }

    pub fn with_labels(mut self, labels: BTreeMap<usize, String>) -> Self {
        self.labels = labels;
        self
    }

    pub fn labels(&self) -> &BTreeMap<usize, String> {
        &self.labels
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn dart_count(&self) -> usize {
        self.tails.len()
    }

    pub fn tails(&self) -> &[usize] {
        &self.tails
    }

    pub fn involution(&self) -> &[usize] {
        &self.involution
    }

    pub fn tail(&self, dart: usize) -> usize {
        self.tails[dart]
    }

    /// Head of a dart, i.e. the tail of its reversal.
    pub fn head(&self, dart: usize) -> usize {
        self.tails[self.involution[dart]]
    }

    pub fn reverse(&self, dart: usize) -> usize {
        self.involution[dart]
    }

    pub fn is_half_loop(&self, dart: usize) -> bool {
        self.involution[dart] == dart
    }

    /// Darts whose tail is `v`, in increasing dart order.
    pub fn darts_at(&self, v: usize) -> &[usize] {
        &self.incidence[self.offsets[v]..self.offsets[v + 1]]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.offsets[v + 1] - self.offsets[v]
    }

    pub fn degrees(&self) -> Vec<usize> {
        (0..self.vertex_count).map(|v| self.degree(v)).collect()
    }

    pub fn max_degree(&self) -> usize {
        (0..self.vertex_count).map(|v| self.degree(v)).max().unwrap_or(0)
    }

    /// Common degree when every vertex has the same degree.
    pub fn regular_degree(&self) -> Option<usize> {
        let first = if self.vertex_count == 0 { 0 } else { self.degree(0) };
        (0..self.vertex_count)
            .all(|v| self.degree(v) == first)
            .then_some(first)
    }

    pub fn half_loop_count(&self) -> usize {
        (0..self.dart_count()).filter(|&d| self.is_half_loop(d)).count()
    }

    pub fn has_half_loops(&self) -> bool {
        (0..self.dart_count()).any(|d| self.is_half_loop(d))
    }

    /// Number of undirected edges: 2-orbits of the involution plus half-loops.
    pub fn edge_count(&self) -> usize {
        let fixed = self.half_loop_count();
        (self.dart_count() - fixed) / 2 + fixed
    }

    /// Multigraph adjacency: entry `(u, v)` counts darts from `u` to `v`.
    pub fn adjacency_matrix(&self) -> IntMatrix {
        let n = self.vertex_count;
        let mut a = IntMatrix::zeros(n, n);
        for d in 0..self.dart_count() {
            a[(self.tail(d), self.head(d))] += 1;
        }
        a
    }

    /// Diagonal matrix with entries `deg(v) - 1`.
    pub fn degree_matrix_q(&self) -> IntMatrix {
        let n = self.vertex_count;
        let mut q = IntMatrix::zeros(n, n);
        for v in 0..n {
            q[(v, v)] = self.degree(v) as i64 - 1;
        }
        q
    }

    /// Number of darts from `u` to `v`.
    pub fn multiplicity(&self, u: usize, v: usize) -> usize {
        self.darts_at(u).iter().filter(|&&d| self.head(d) == v).count()
    }

    /// Breadth-first distances from `source`; unreachable vertices are `None`.
    pub fn distances_from(&self, source: usize) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.vertex_count];
        let mut queue = std::collections::VecDeque::new();
        dist[source] = Some(0);
        queue.push_back(source);
        while let Some(u) = queue.pop_front() {
            let du = dist[u].unwrap();
            for &d in self.darts_at(u) {
                let w = self.head(d);
                if dist[w].is_none() {
                    dist[w] = Some(du + 1);
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    pub fn is_connected(&self) -> bool {
        self.vertex_count == 0 || self.distances_from(0).iter().all(Option::is_some)
    }

    /// Relabels vertices: vertex `v` of `self` becomes `perm[v]`. Dart order is kept.
    pub fn relabel_vertices(&self, perm: &[usize]) -> Result<Self> {
        if perm.len() != self.vertex_count {
            return Err(Error::input("vertex relabeling has wrong length"));
        }
        let tails = self.tails.iter().map(|&t| perm[t]).collect();
        Self::new(self.vertex_count, tails, self.involution.clone())
    }
}

/// Incremental construction of a [`HalfEdgeGraph`].
#[derive(Debug, Clone, Default)]
pub struct GraphBuilder {
    vertex_count: usize,
    tails: Vec<usize>,
    involution: Vec<usize>,
}

impl GraphBuilder {
    pub fn new(vertex_count: usize) -> Self {
        Self {
            vertex_count,
            ..Default::default()
        }
    }

    /// Adds an undirected edge and returns its dart from `u` to `v`.
    pub fn add_edge(&mut self, u: usize, v: usize) -> usize {
        let d = self.tails.len();
        self.tails.extend([u, v]);
        self.involution.extend([d + 1, d]);
        d
    }

    pub fn add_half_loop(&mut self, v: usize) -> usize {
        let d = self.tails.len();
        self.tails.push(v);
        self.involution.push(d);
        d
    }

    pub fn build(self) -> Result<HalfEdgeGraph> {
        HalfEdgeGraph::new(self.vertex_count, self.tails, self.involution)
    }
}

#[cfg(test)]
mod tests {
    use super::families::*;
    use super::*;

    #[test]
    fn empty_graph_has_empty_adjacency() {
        let g = HalfEdgeGraph::empty(0);
        assert_eq!(g.adjacency_matrix().shape(), (0, 0));
    }

    #[test]
    fn single_edge_adjacency() {
        let g = path(2);
        assert_eq!(g.adjacency_matrix(), IntMatrix::from_row_slice(2, 2, &[0, 1, 1, 0]));
    }

    #[test]
    fn triangle_adjacency() {
        let a = cycle(3).adjacency_matrix();
        for u in 0..3 {
            for v in 0..3 {
                assert_eq!(a[(u, v)], i64::from(u != v));
            }
            assert_eq!(a.row(u).sum(), 2);
        }
    }

    #[test]
    fn degree_matrix_examples() {
        assert_eq!(cycle(3).degree_matrix_q(), IntMatrix::identity(3, 3));
        assert_eq!(complete(4).degree_matrix_q(), IntMatrix::identity(4, 4) * 2);
        let q = star(3).degree_matrix_q();
        assert_eq!(q.diagonal().as_slice(), &[2, 0, 0, 0]);
    }

    #[test]
    fn half_loop_counts_once() {
        let mut b = GraphBuilder::new(1);
        b.add_half_loop(0);
        let g = b.build().unwrap();
        assert_eq!(g.degree(0), 1);
        assert_eq!(g.adjacency_matrix()[(0, 0)], 1);
        assert_eq!(g.edge_count(), 1);

        let full = HalfEdgeGraph::from_edges(1, &[(0, 0)]).unwrap();
        assert_eq!(full.degree(0), 2);
        assert_eq!(full.adjacency_matrix()[(0, 0)], 2);
        assert_eq!(full.edge_count(), 1);
    }

    #[test]
    fn rejects_non_involution() {
        let err = HalfEdgeGraph::new(2, vec![0, 1, 1], vec![1, 2, 0]).unwrap_err();
        assert!(err.to_string().contains("self-inverse"));
        assert!(HalfEdgeGraph::new(1, vec![3], vec![0]).is_err());
    }

    #[test]
    fn edge_count_matches_dart_structure() {
        let g = petersen();
        assert_eq!(g.edge_count(), 15);
        assert_eq!(g.dart_count(), 30);
    }
}
