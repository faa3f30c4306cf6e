//! The magic-formula mixing measure `μ_{v0,A}` of edge-reinforced random walk.
//!
//! With `b_v = (a_v + 1 − 1(v = v0))/2` the log normalizer is
//!
//! ```text
//! Φ(A) = Σ_e log Γ(a_e) − Σ_v log Γ(b_v) + ((|V| − 1)/2) log π − (1 − |V| + Σ_e a_e) log 2
//! ```
//!
//! and `μ_{v0,A}` is an exponential family in `A` with sufficient statistics
//! `T_e(w) = log(w_e / √(w_u w_v))`. Path probabilities of the walk are ratios
//! of normalizers (posterior conjugacy), and the KL divergence between two
//! laws with the same root is the Bregman divergence of `Φ`.

mod environment;
mod field;

pub use environment::{
    log_density_pinned, log_density_simplex, log_unnormalized_density, sufficient_statistics, Environment, Gauge,
};
pub use field::{normalized_field, reconstruct_environment, NormalizedField};

use crate::error::{Error, Result};
use crate::graph::{endpoint_from_counts, path_counts, CountVector, EdgeWeights, Graph, Trajectory};
use crate::numerics::kahan_sum;
use crate::specfun::{digamma_unchecked, lambda_kl_unchecked, log_gamma_unchecked};
use std::f64::consts::{LN_2, PI};

/// A root vertex together with edge weights: the index `(v0, A)` of `μ_{v0,A}`.
#[derive(Debug, Clone, PartialEq)]
pub struct RootedParams {
    pub root: usize,
    pub weights: EdgeWeights,
}

impl RootedParams {
    pub fn new(g: &Graph, root: usize, weights: EdgeWeights) -> Result<Self> {
        if root >= g.num_vertices() {
            return Err(Error::UnknownVertex(format!("#{root}")));
        }
        g.check_len(weights.len())?;
        Ok(Self { root, weights })
    }

    /// Parameters rooted at the graph's root.
    pub fn at_root(g: &Graph, weights: EdgeWeights) -> Result<Self> {
        Self::new(g, g.root(), weights)
    }

    /// Constant weights `a` rooted at the graph's root.
    pub fn uniform(g: &Graph, a: f64) -> Result<Self> {
        Self::at_root(g, EdgeWeights::constant(g.num_edges(), a)?)
    }

    pub fn a(&self) -> &[f64] {
        self.weights.values()
    }

    /// `b_v = (a_v + 1 − 1(v = root))/2`.
    pub fn half_weights(&self, g: &Graph) -> Vec<f64> {
        half_weights(g, self.a(), self.root)
    }
}

/// `b_v = (a_v + 1 − 1(v = root))/2` with `a_v = Σ_{e∋v} a_e`.
pub fn half_weights(g: &Graph, a: &[f64], root: usize) -> Vec<f64> {
    g.vertex_sums(a)
        .into_iter()
        .enumerate()
        .map(|(v, av)| 0.5 * (av + 1.0 - if v == root { 1.0 } else { 0.0 }))
        .collect()
}

/// `Φ(A) = log Z_{v0,A}`.
pub fn log_z(g: &Graph, p: &RootedParams) -> f64 {
    let a = p.a();
    let b = p.half_weights(g);
    let nv = g.num_vertices() as f64;
    kahan_sum(a.iter().map(|&x| log_gamma_unchecked(x))) - kahan_sum(b.iter().map(|&x| log_gamma_unchecked(x)))
        + 0.5 * (nv - 1.0) * PI.ln()
        - (1.0 - nv + kahan_sum(a.iter().copied())) * LN_2
}

/// `∂Φ/∂a_e = Ψ(a_e) − ½Ψ(b_u) − ½Ψ(b_v) − log 2`.
pub fn grad_log_z(g: &Graph, p: &RootedParams) -> Vec<f64> {
    let b = p.half_weights(g);
    g.edges()
        .iter()
        .enumerate()
        .map(|(e, &(u, v))| {
            digamma_unchecked(p.a()[e]) - 0.5 * digamma_unchecked(b[u]) - 0.5 * digamma_unchecked(b[v]) - LN_2
        })
        .collect()
}

/// Posterior after observing a path with counts `N`: root `x_T(N)`, weights `A + N`.
pub fn posterior_update(g: &Graph, p: &RootedParams, counts: &CountVector) -> Result<RootedParams> {
    posterior_from_undirected(g, p, &counts.undirected)
}

pub fn posterior_from_undirected(g: &Graph, p: &RootedParams, n: &[u64]) -> Result<RootedParams> {
    let root = crate::graph::endpoint_from_undirected(g, n, p.root)?;
    Ok(RootedParams {
        root,
        weights: p.weights.plus_counts(n),
    })
}

/// `log P(X_0^T = path) = Φ(x_T, A + N) − Φ(v0, A)`.
pub fn log_path_probability(g: &Graph, p: &RootedParams, path: &Trajectory) -> Result<f64> {
    if path.start() != p.root {
        return Err(Error::RootMismatch(path.start(), p.root));
    }
    let counts = path_counts(g, path);
    debug_assert_eq!(endpoint_from_counts(g, &counts, p.root).ok(), Some(path.last()));
    let post = posterior_update(g, p, &counts)?;
    Ok(log_z(g, &post) - log_z(g, p))
}

/// Path log-probability as the product of reinforced step probabilities.
pub fn sequential_log_probability(g: &Graph, p: &RootedParams, path: &Trajectory) -> Result<f64> {
    if path.start() != p.root {
        return Err(Error::RootMismatch(path.start(), p.root));
    }
    let mut local = p.a().to_vec();
    let mut acc = 0.0;
    for w in path.states().windows(2) {
        let e = g.edge_between(w[0], w[1]).expect("validated trajectory");
        let total: f64 = g.incident(w[0]).iter().map(|&h| local[h]).sum();
        acc += (local[e] / total).ln();
        local[e] += 1.0;
    }
    Ok(acc)
}

/// Environment KL divergence with its edge and vertex parts:
/// `value = edge_term − vertex_term`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnvKl {
    pub value: f64,
    /// `Σ_e Λ(a0_e, a1_e)`
    pub edge_term: f64,
    /// `Σ_v Λ(b0_v, b1_v)`
    pub vertex_term: f64,
}

fn check_same_root(p0: &RootedParams, p1: &RootedParams) -> Result<()> {
    if p0.root != p1.root {
        return Err(Error::RootMismatch(p0.root, p1.root));
    }
    Ok(())
}

/// `D(μ_{v0,A0} ‖ μ_{v0,A1}) = Σ_e Λ(a0_e, a1_e) − Σ_v Λ(b0_v, b1_v)`.
pub fn env_kl(g: &Graph, p0: &RootedParams, p1: &RootedParams) -> Result<EnvKl> {
    check_same_root(p0, p1)?;
    Ok(env_kl_terms(g, p0.a(), p1.a(), p0.root))
}

pub(crate) fn env_kl_terms(g: &Graph, a0: &[f64], a1: &[f64], root: usize) -> EnvKl {
    let b0 = half_weights(g, a0, root);
    let b1 = half_weights(g, a1, root);
    let edge_term = kahan_sum(a0.iter().zip(a1).map(|(&x, &y)| lambda_kl_unchecked(x, y)));
    let vertex_term = kahan_sum(b0.iter().zip(&b1).map(|(&x, &y)| lambda_kl_unchecked(x, y)));
    EnvKl {
        value: (edge_term - vertex_term).max(0.0),
        edge_term,
        vertex_term,
    }
}

/// `Φ(A1) − Φ(A0) − ⟨∇Φ(A0), A1 − A0⟩`.
pub fn env_kl_bregman(g: &Graph, p0: &RootedParams, p1: &RootedParams) -> Result<f64> {
    check_same_root(p0, p1)?;
    let grad = grad_log_z(g, p0);
    let lin = kahan_sum(
        grad.iter()
            .zip(p0.a().iter().zip(p1.a()))
            .map(|(gr, (x, y))| gr * (y - x)),
    );
    Ok(log_z(g, p1) - log_z(g, p0) - lin)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures;

    fn params(g: &Graph, a: &[f64]) -> RootedParams {
        RootedParams::at_root(g, EdgeWeights::new(a.to_vec()).unwrap()).unwrap()
    }

    #[test]
    fn single_edge_normalizer_vanishes() {
        let g = fixtures::single_edge();
        for a in [0.5, 1.0, 2.0, 7.0] {
            assert!(log_z(&g, &params(&g, &[a])).abs() < 1e-13);
            assert!(grad_log_z(&g, &params(&g, &[a]))[0].abs() < 1e-13);
        }
    }

    #[test]
    fn hand_values() {
        let t = fixtures::triangle();
        assert!((log_z(&t, &params(&t, &[1.0; 3])) - LN_2).abs() < 1e-14);
        assert!((grad_log_z(&t, &params(&t, &[1.0; 3]))[0] + 1.0).abs() < 1e-14);
        let s = fixtures::star(3);
        assert!((log_z(&s, &params(&s, &[2.0; 3])) + LN_2).abs() < 1e-14);
    }

    #[test]
    fn triangle_path_probability() {
        let g = fixtures::triangle();
        let p = params(&g, &[1.0; 3]);
        let path = Trajectory::from_labels(&g, &["v0", "v1", "v2"]).unwrap();
        let lp = log_path_probability(&g, &p, &path).unwrap();
        assert!((lp - (1.0f64 / 6.0).ln()).abs() < 1e-13);
        assert!((sequential_log_probability(&g, &p, &path).unwrap() - lp).abs() < 1e-13);
        let empty = Trajectory::from_labels(&g, &["v0"]).unwrap();
        assert_eq!(log_path_probability(&g, &p, &empty).unwrap(), 0.0);
    }

    #[test]
    fn posterior_of_triangle_path() {
        let g = fixtures::triangle();
        let p = params(&g, &[1.0; 3]);
        let path = Trajectory::from_labels(&g, &["v0", "v1", "v2"]).unwrap();
        let post = posterior_update(&g, &p, &path_counts(&g, &path)).unwrap();
        assert_eq!(post.root, 2);
        assert_eq!(post.a(), &[2.0, 1.0, 2.0]);
        let same = posterior_update(&g, &p, &CountVector::zeros(&g)).unwrap();
        assert_eq!(same, p);
    }

    #[test]
    fn triangle_env_kl() {
        let g = fixtures::triangle();
        let kl = env_kl(&g, &params(&g, &[1.0; 3]), &params(&g, &[2.0; 3])).unwrap();
        let expect = 4.0 - 2.0 * 6f64.ln();
        assert!((kl.value - expect).abs() < 1e-12);
        let br = env_kl_bregman(&g, &params(&g, &[1.0; 3]), &params(&g, &[2.0; 3])).unwrap();
        assert!((br - expect).abs() < 1e-12);
    }

    #[test]
    fn env_kl_rejects_root_mismatch() {
        let g = fixtures::triangle();
        let p0 = params(&g, &[1.0; 3]);
        let p1 = RootedParams::new(&g, 1, EdgeWeights::constant(3, 1.0).unwrap()).unwrap();
        assert!(env_kl(&g, &p0, &p1).is_err());
    }
}
