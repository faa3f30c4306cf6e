use super::{Graph, Trajectory};
use crate::error::{Error, Result};

/// Transition counts of a trajectory.
///
/// `directed[2e]` counts steps `u → v` and `directed[2e + 1]` counts steps
/// `v → u` for the canonical edge `e = (u, v)`, `u < v`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CountVector {
    pub directed: Vec<u64>,
    pub departures: Vec<u64>,
    pub undirected: Vec<u64>,
    pub total: u64,
}

impl CountVector {
    pub fn zeros(g: &Graph) -> Self {
        Self {
            directed: vec![0; 2 * g.num_edges()],
            departures: vec![0; g.num_vertices()],
            undirected: vec![0; g.num_edges()],
            total: 0,
        }
    }

    /// Records one step `from → to`; the caller guarantees adjacency.
    pub fn push_step(&mut self, g: &Graph, from: usize, to: usize, e: usize) {
        let dir = usize::from(from != g.edge(e).0);
        debug_assert_eq!(g.edge_between(from, to), Some(e));
        self.directed[2 * e + dir] += 1;
        self.departures[from] += 1;
        self.undirected[e] += 1;
        self.total += 1;
    }

    /// `N_uv`, or `None` if `u` and `v` are not adjacent.
    pub fn directed_count(&self, g: &Graph, u: usize, v: usize) -> Option<u64> {
        let e = g.edge_between(u, v)?;
        Some(self.directed[2 * e + usize::from(u != g.edge(e).0)])
    }

    /// `d_v(N) = Σ_{e∋v} N_e`.
    pub fn vertex_degrees(&self, g: &Graph) -> Vec<u64> {
        undirected_degrees(g, &self.undirected)
    }

    /// Componentwise sum.
    pub fn add(&self, other: &CountVector) -> CountVector {
        let sum = |a: &[u64], b: &[u64]| a.iter().zip(b).map(|(x, y)| x + y).collect();
        CountVector {
            directed: sum(&self.directed, &other.directed),
            departures: sum(&self.departures, &other.departures),
            undirected: sum(&self.undirected, &other.undirected),
            total: self.total + other.total,
        }
    }
}

pub(crate) fn undirected_degrees(g: &Graph, n: &[u64]) -> Vec<u64> {
    let mut d = vec![0; g.num_vertices()];
    for (e, &(u, v)) in g.edges().iter().enumerate() {
        d[u] += n[e];
        d[v] += n[e];
    }
    d
}

pub fn path_counts(g: &Graph, path: &Trajectory) -> CountVector {
    let mut c = CountVector::zeros(g);
    for w in path.states().windows(2) {
        let e = g.edge_between(w[0], w[1]).expect("trajectory follows edges");
        c.push_step(g, w[0], w[1], e);
    }
    c
}

pub fn endpoint_from_counts(g: &Graph, counts: &CountVector, root: usize) -> Result<usize> {
    endpoint_from_undirected(g, &counts.undirected, root)
}

/// Endpoint `x_T` of any path from `root` with undirected counts `n`, by the
/// parity rule `d_v(N) ≡ 1(v = root) + 1(v = x_T) (mod 2)`.
pub fn endpoint_from_undirected(g: &Graph, n: &[u64], root: usize) -> Result<usize> {
    g.check_len(n.len())?;
    let odd: Vec<usize> = undirected_degrees(g, n)
        .iter()
        .enumerate()
        .filter(|(_, d)| *d % 2 == 1)
        .map(|(v, _)| v)
        .collect();
    match odd.as_slice() {
        [] => Ok(root),
        [a, b] if *a == root => Ok(*b),
        [a, b] if *b == root => Ok(*a),
        _ => Err(Error::Parity(format!(
            "odd-degree vertices {:?} inconsistent with a path from {}",
            odd.iter().map(|&v| g.label(v)).collect::<Vec<_>>(),
            g.label(root)
        ))),
    }
}
