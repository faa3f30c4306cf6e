use super::Graph;
use crate::error::{Error, Result};

/// Exhaustive subset enumeration is refused beyond this many edges.
pub const MAX_SUBSET_EDGES: usize = 20;

/// Statistics of a nonempty proper edge subset `F`:
/// `A(F) = a(F) − Σ_{v∈S(F)} b_v + (κ(G∖F) − 1)/2`, together with the
/// factors `B_out(F) = Σ_{v∉S(F)} b_v` and
/// `M_edge(F) = Π_{h∉F} max{1, δ₀^{a_h−1}}`, `δ₀ = 1/(2|E|)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SubsetStats {
    pub subset: Vec<usize>,
    pub a_f: f64,
    /// Vertices all of whose incident edges lie in `F`.
    pub s_f: Vec<usize>,
    pub kappa: usize,
    pub big_a: f64,
    pub b_out: f64,
    pub m_edge: f64,
}

struct UnionFind {
    parent: Vec<usize>,
    components: usize,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
            components: n,
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra] = rb;
            self.components -= 1;
        }
    }
}

pub fn subset_stats(g: &Graph, a: &[f64], subset: &[usize], b: &[f64]) -> Result<SubsetStats> {
    g.check_len(a.len())?;
    if b.len() != g.num_vertices() {
        return Err(Error::LengthMismatch {
            expected: g.num_vertices(),
            got: b.len(),
        });
    }
    let m = g.num_edges();
    let mut member = vec![false; m];
    for &e in subset {
        if e >= m {
            return Err(Error::InvalidSubset(format!("edge index {e} out of range")));
        }
        member[e] = true;
    }
    let size = member.iter().filter(|&&x| x).count();
    if size == 0 {
        return Err(Error::InvalidSubset("F is empty".into()));
    }
    if size == m {
        return Err(Error::InvalidSubset("F equals the full edge set".into()));
    }
    Ok(stats_from_membership(g, a, &member, b))
}

pub(crate) fn stats_from_membership(g: &Graph, a: &[f64], member: &[bool], b: &[f64]) -> SubsetStats {
    let m = g.num_edges();
    let delta0 = 1.0 / (2.0 * m as f64);
    let subset: Vec<usize> = (0..m).filter(|&e| member[e]).collect();
    let a_f: f64 = subset.iter().map(|&e| a[e]).sum();
    let s_f: Vec<usize> = (0..g.num_vertices())
        .filter(|&v| g.incident(v).iter().all(|&e| member[e]))
        .collect();
    let mut uf = UnionFind::new(g.num_vertices());
    for (e, &(u, v)) in g.edges().iter().enumerate() {
        if !member[e] {
            uf.union(u, v);
        }
    }
    let kappa = uf.components;
    let in_s = |v: usize| s_f.binary_search(&v).is_ok();
    let b_s: f64 = s_f.iter().map(|&v| b[v]).sum();
    let b_out: f64 = (0..g.num_vertices()).filter(|&v| !in_s(v)).map(|v| b[v]).sum();
    let m_edge: f64 = (0..m)
        .filter(|&h| !member[h])
        .map(|h| 1f64.max(delta0.powf(a[h] - 1.0)))
        .product();
    SubsetStats {
        big_a: a_f - b_s + (kappa as f64 - 1.0) / 2.0,
        subset,
        a_f,
        s_f,
        kappa,
        b_out,
        m_edge,
    }
}

/// Calls `f` on the statistics of every nonempty proper subset `F ⊊ E`.
pub fn for_each_proper_subset<F: FnMut(&SubsetStats)>(g: &Graph, a: &[f64], b: &[f64], mut f: F) -> Result<()> {
    let m = g.num_edges();
    if m > MAX_SUBSET_EDGES {
        return Err(Error::TooLarge {
            what: "edges for subset enumeration",
            value: m,
            limit: MAX_SUBSET_EDGES,
        });
    }
    g.check_len(a.len())?;
    let mut member = vec![false; m];
    for mask in 1u64..((1u64 << m) - 1) {
        for (e, slot) in member.iter_mut().enumerate() {
            *slot = mask >> e & 1 == 1;
        }
        f(&stats_from_membership(g, a, &member, b));
    }
    Ok(())
}
