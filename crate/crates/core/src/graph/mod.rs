//! Finite connected simple graphs with a root vertex and a reference edge.
//!
//! Edges are stored in canonical order: each edge is the pair `(u, v)` of
//! vertex indices with `u < v`, and the list is sorted lexicographically.
//! Every per-edge vector in the crate is indexed by this order.

mod counts;
pub mod fixtures;
mod io;
mod spanning;
mod subsets;

pub use counts::{endpoint_from_counts, endpoint_from_undirected, path_counts, CountVector};
pub use io::{EdgeSpec, GraphSpec};
pub use spanning::{count_spanning_trees, log_tree_polynomial, tree_polynomial};
pub use subsets::{for_each_proper_subset, subset_stats, SubsetStats, MAX_SUBSET_EDGES};

use crate::error::{Error, Result};
use std::collections::HashMap;

pub const MAX_VERTICES: usize = 64;

#[derive(Debug, Clone, PartialEq)]
pub struct Graph {
    labels: Vec<String>,
    edges: Vec<(usize, usize)>,
    root: usize,
    reference_edge: usize,
    adjacency: Vec<Vec<usize>>,
    edge_lookup: HashMap<(usize, usize), usize>,
}

impl Graph {
    /// Builds a graph from labels, labelled edge pairs, a root label and an
    /// optional reference edge (defaults to the first canonical edge).
    pub fn new(
        labels: Vec<String>,
        edges: &[(String, String)],
        root: &str,
        reference_edge: Option<(&str, &str)>,
    ) -> Result<Self> {
        let mut index = HashMap::new();
        for (i, l) in labels.iter().enumerate() {
            if index.insert(l.clone(), i).is_some() {
                return Err(Error::DuplicateVertex(l.clone()));
            }
        }
        let lookup = |l: &str| index.get(l).copied().ok_or_else(|| Error::UnknownVertex(l.to_string()));
        let mut pairs = Vec::with_capacity(edges.len());
        for (u, v) in edges {
            pairs.push((lookup(u)?, lookup(v)?));
        }
        let root = lookup(root)?;
        let refe = match reference_edge {
            Some((u, v)) => Some((lookup(u)?, lookup(v)?)),
            None => None,
        };
        Self::from_indices(labels, &pairs, root, refe)
    }

    /// Builds a graph from vertex indices `0..labels.len()`.
    pub fn from_indices(
        labels: Vec<String>,
        pairs: &[(usize, usize)],
        root: usize,
        reference_edge: Option<(usize, usize)>,
    ) -> Result<Self> {
        let n = labels.len();
        if n < 2 {
            return Err(Error::InvalidGraph("need at least two vertices".into()));
        }
        if n > MAX_VERTICES {
            return Err(Error::TooLarge {
                what: "vertices",
                value: n,
                limit: MAX_VERTICES,
            });
        }
        if pairs.is_empty() {
            return Err(Error::InvalidGraph("need at least one edge".into()));
        }
        if root >= n {
            return Err(Error::UnknownVertex(format!("#{root}")));
        }
        let mut edges = Vec::with_capacity(pairs.len());
        for &(u, v) in pairs {
            if u >= n {
                return Err(Error::UnknownVertex(format!("#{u}")));
            }
            if v >= n {
                return Err(Error::UnknownVertex(format!("#{v}")));
            }
            if u == v {
                return Err(Error::SelfLoop(labels[u].clone()));
            }
            edges.push((u.min(v), u.max(v)));
        }
        edges.sort_unstable();
        for w in edges.windows(2) {
            if w[0] == w[1] {
                return Err(Error::DuplicateEdge(labels[w[0].0].clone(), labels[w[0].1].clone()));
            }
        }
        let mut adjacency = vec![Vec::new(); n];
        let mut edge_lookup = HashMap::with_capacity(edges.len());
        for (i, &(u, v)) in edges.iter().enumerate() {
            adjacency[u].push(i);
            adjacency[v].push(i);
            edge_lookup.insert((u, v), i);
        }
        let g = Graph {
            labels,
            edges,
            root,
            reference_edge: 0,
            adjacency,
            edge_lookup,
        };
        if !g.is_connected() {
            return Err(Error::Disconnected);
        }
        let reference_edge = match reference_edge {
            Some((u, v)) => g.edge_between(u, v).ok_or_else(|| {
                Error::InvalidGraph(format!(
                    "reference edge {{{}, {}}} is not an edge",
                    g.label(u),
                    g.label(v)
                ))
            })?,
            None => 0,
        };
        Ok(Graph { reference_edge, ..g })
    }

    /// Graph on vertices labelled `v0, v1, ...` with root `v0`.
    pub fn with_default_labels(n: usize, pairs: &[(usize, usize)]) -> Result<Self> {
        let labels = (0..n).map(|i| format!("v{i}")).collect();
        Self::from_indices(labels, pairs, 0, None)
    }

    fn is_connected(&self) -> bool {
        let mut seen = vec![false; self.num_vertices()];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(u) = stack.pop() {
            for (v, _) in self.neighbors(u) {
                if !seen[v] {
                    seen[v] = true;
                    stack.push(v);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// Same graph with a different root.
    pub fn with_root(&self, root: usize) -> Result<Self> {
        if root >= self.num_vertices() {
            return Err(Error::UnknownVertex(format!("#{root}")));
        }
        Ok(Graph { root, ..self.clone() })
    }

    pub fn num_vertices(&self) -> usize {
        self.labels.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, v: usize) -> &str {
        &self.labels[v]
    }

    pub fn vertex_index(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn reference_edge(&self) -> usize {
        self.reference_edge
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge(&self, e: usize) -> (usize, usize) {
        self.edges[e]
    }

    /// Incident edge indices of `v`.
    pub fn incident(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    /// `(neighbor, edge index)` pairs around `v`.
    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adjacency[v].iter().map(move |&e| {
            let (a, b) = self.edges[e];
            (if a == v { b } else { a }, e)
        })
    }

    pub fn edge_between(&self, u: usize, v: usize) -> Option<usize> {
        self.edge_lookup.get(&(u.min(v), u.max(v))).copied()
    }

    /// Vertex sums `x_v = Σ_{e∋v} x_e` of a per-edge vector.
    pub fn vertex_sums(&self, x: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.num_vertices()];
        for (e, &(u, v)) in self.edges.iter().enumerate() {
            out[u] += x[e];
            out[v] += x[e];
        }
        out
    }

    /// True if the graph is a star whose center is the root.
    pub fn is_star_at_root(&self) -> bool {
        self.degree(self.root) == self.num_edges()
            && (0..self.num_vertices()).all(|v| v == self.root || self.degree(v) == 1)
    }

    pub(crate) fn check_len(&self, got: usize) -> Result<()> {
        if got == self.num_edges() {
            Ok(())
        } else {
            Err(Error::LengthMismatch {
                expected: self.num_edges(),
                got,
            })
        }
    }
}

/// Positive per-edge weights in canonical edge order.
#[derive(Debug, Clone, PartialEq)]
pub struct EdgeWeights(Vec<f64>);

impl EdgeWeights {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidParameter("empty weight vector".into()));
        }
        for (index, &value) in values.iter().enumerate() {
            if !(value > 0.0 && value.is_finite()) {
                return Err(Error::NonPositiveWeight { index, value });
            }
        }
        Ok(Self(values))
    }

    pub fn constant(m: usize, a: f64) -> Result<Self> {
        Self::new(vec![a; m])
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Smallest entry `a̲`.
    pub fn min(&self) -> f64 {
        self.0.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// `A + N`.
    pub fn plus_counts(&self, n: &[u64]) -> Self {
        Self(self.0.iter().zip(n).map(|(a, &k)| a + k as f64).collect())
    }
}

impl std::ops::Index<usize> for EdgeWeights {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

/// A vertex sequence `X_0, ..., X_T` along edges of a graph.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Trajectory {
    states: Vec<usize>,
}

impl Trajectory {
    /// Validates that `states` starts at `start` and follows edges of `g`.
    pub fn new(g: &Graph, start: usize, states: Vec<usize>) -> Result<Self> {
        match states.first() {
            None => return Err(Error::InvalidTrajectory("empty state list".into())),
            Some(&s) if s != start => {
                return Err(Error::InvalidTrajectory(format!(
                    "starts at {} instead of {}",
                    g.label(s),
                    g.label(start)
                )))
            }
            _ => {}
        }
        for w in states.windows(2) {
            if w[1] >= g.num_vertices() || g.edge_between(w[0], w[1]).is_none() {
                return Err(Error::InvalidTrajectory(format!("no edge from #{} to #{}", w[0], w[1])));
            }
        }
        Ok(Self { states })
    }

    /// Builds a trajectory from a root-started sequence of vertex labels.
    pub fn from_labels(g: &Graph, labels: &[&str]) -> Result<Self> {
        let states = labels
            .iter()
            .map(|l| g.vertex_index(l).ok_or_else(|| Error::UnknownVertex(l.to_string())))
            .collect::<Result<Vec<_>>>()?;
        Self::new(g, g.root(), states)
    }

    pub(crate) fn from_states_unchecked(states: Vec<usize>) -> Self {
        Self { states }
    }

    pub fn states(&self) -> &[usize] {
        &self.states
    }

    /// Number of steps `T`.
    pub fn len(&self) -> usize {
        self.states.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn start(&self) -> usize {
        self.states[0]
    }

    pub fn last(&self) -> usize {
        *self.states.last().expect("nonempty")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(x: &str) -> String {
        x.to_string()
    }

    #[test]
    fn triangle_builds() {
        let g = Graph::new(
            vec![s("v0"), s("v1"), s("v2")],
            &[(s("v1"), s("v2")), (s("v0"), s("v1")), (s("v2"), s("v0"))],
            "v0",
            None,
        )
        .unwrap();
        assert_eq!(g.num_vertices(), 3);
        assert_eq!(g.edges(), &[(0, 1), (0, 2), (1, 2)]);
        assert_eq!(g.reference_edge(), 0);
    }

    #[test]
    fn rejects_bad_graphs() {
        assert_eq!(
            Graph::with_default_labels(4, &[(0, 1), (2, 3)]).unwrap_err(),
            Error::Disconnected
        );
        assert!(matches!(
            Graph::with_default_labels(2, &[(0, 0), (0, 1)]).unwrap_err(),
            Error::SelfLoop(_)
        ));
        assert!(matches!(
            Graph::with_default_labels(2, &[(0, 1), (1, 0)]).unwrap_err(),
            Error::DuplicateEdge(..)
        ));
        assert!(matches!(
            Graph::new(vec![s("a"), s("b")], &[(s("a"), s("b"))], "c", None).unwrap_err(),
            Error::UnknownVertex(_)
        ));
    }

    #[test]
    fn reference_edge_lookup() {
        let g = Graph::from_indices(vec![s("a"), s("b"), s("c")], &[(0, 1), (1, 2)], 0, Some((2, 1))).unwrap();
        assert_eq!(g.reference_edge(), 1);
        assert!(Graph::from_indices(vec![s("a"), s("b"), s("c")], &[(0, 1), (1, 2)], 0, Some((0, 2))).is_err());
    }

    #[test]
    fn weights_validate() {
        assert!(EdgeWeights::new(vec![1.0, 0.0]).is_err());
        assert!(EdgeWeights::new(vec![1.0, f64::NAN]).is_err());
        assert_eq!(EdgeWeights::new(vec![2.0, 0.5]).unwrap().min(), 0.5);
    }

    #[test]
    fn trajectory_validation() {
        let g = fixtures::path(3);
        assert!(Trajectory::new(&g, 0, vec![0, 1, 2]).is_ok());
        assert!(Trajectory::new(&g, 0, vec![0, 2]).is_err());
        assert!(Trajectory::new(&g, 0, vec![1, 0]).is_err());
    }
}
