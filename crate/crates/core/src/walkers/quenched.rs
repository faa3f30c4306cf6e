use super::RngSeed;
use crate::error::{Error, Result};
use crate::graph::{Graph, Trajectory};
use crate::numerics::{kahan_sum, symmetric_eigenvalues};
use rand::Rng;

/// Reversible Markov chain `p_ij = w_ij / w_i` with stationary law
/// `π_i = w_i / Σ_v w_v`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuenchedChain {
    /// Edge conductances the chain was built from (any gauge).
    pub conductances: Vec<f64>,
    /// `w_v = Σ_{e∋v} w_e`.
    pub vertex_weights: Vec<f64>,
    /// Dense row-stochastic matrix.
    pub transition: Vec<Vec<f64>>,
    pub stationary: Vec<f64>,
    /// Per-vertex `(neighbor, edge, p)` lists in adjacency order.
    moves: Vec<Vec<(usize, usize, f64)>>,
}

pub fn quenched_chain(g: &Graph, w: &[f64]) -> Result<QuenchedChain> {
    g.check_len(w.len())?;
    for (index, &value) in w.iter().enumerate() {
        if !(value > 0.0 && value.is_finite()) {
            return Err(Error::NonPositiveWeight { index, value });
        }
    }
    let n = g.num_vertices();
    let wv = g.vertex_sums(w);
    let total = kahan_sum(wv.iter().copied());
    let mut transition = vec![vec![0.0; n]; n];
    let mut moves = vec![Vec::new(); n];
    for (i, row) in transition.iter_mut().enumerate() {
        for (j, e) in g.neighbors(i) {
            let p = w[e] / wv[i];
            row[j] = p;
            moves[i].push((j, e, p));
        }
    }
    Ok(QuenchedChain {
        conductances: w.to_vec(),
        stationary: wv.iter().map(|x| x / total).collect(),
        vertex_weights: wv,
        transition,
        moves,
    })
}

impl QuenchedChain {
    pub fn num_vertices(&self) -> usize {
        self.stationary.len()
    }

    /// One-step entropy `h_i = −Σ_j p_ij log p_ij`.
    pub fn local_entropy(&self, i: usize) -> f64 {
        -kahan_sum(self.moves[i].iter().map(|&(_, _, p)| p * p.ln()))
    }

    fn step<R: Rng + ?Sized>(&self, at: usize, rng: &mut R) -> (usize, usize) {
        let mut u = rng.random::<f64>();
        let row = &self.moves[at];
        for &(v, e, p) in row {
            u -= p;
            if u < 0.0 {
                return (v, e);
            }
        }
        let &(v, e, _) = row.last().expect("nonempty");
        (v, e)
    }

    /// `log Π_t p_{x_{t−1} x_t}`.
    pub fn log_likelihood(&self, path: &Trajectory) -> f64 {
        kahan_sum(path.states().windows(2).map(|w| self.transition[w[0]][w[1]].ln()))
    }
}

pub fn simulate_quenched_with<R: Rng + ?Sized>(
    chain: &QuenchedChain,
    start: usize,
    t: usize,
    rng: &mut R,
) -> Trajectory {
    let mut states = Vec::with_capacity(t + 1);
    let mut at = start;
    states.push(at);
    for _ in 0..t {
        at = chain.step(at, rng).0;
        states.push(at);
    }
    Trajectory::from_states_unchecked(states)
}

pub fn simulate_quenched(chain: &QuenchedChain, start: usize, t: usize, seed: RngSeed) -> Trajectory {
    simulate_quenched_with(chain, start, t, &mut seed.rng())
}

/// `r(P) = −Σ_i π_i Σ_j p_ij log p_ij`.
pub fn quenched_entropy_rate(chain: &QuenchedChain) -> f64 {
    kahan_sum((0..chain.num_vertices()).map(|i| chain.stationary[i] * chain.local_entropy(i)))
}

/// `r(P_w) = −Σ_e (w_e/Σ_g w_g) log(w_e / √(w_u w_v))`.
pub fn entropy_rate_edge_form(g: &Graph, w: &[f64]) -> f64 {
    let wv = g.vertex_sums(w);
    let total = kahan_sum(w.iter().copied());
    -kahan_sum(
        g.edges()
            .iter()
            .enumerate()
            .map(|(e, &(u, v))| w[e] / total * (w[e].ln() - 0.5 * (wv[u].ln() + wv[v].ln()))),
    )
}

/// `h_T(w) = Σ_{t<T} E[h_{X_t}(w)]` by propagating the law of `X_t`.
pub fn quenched_path_entropy(chain: &QuenchedChain, start: usize, t: usize) -> f64 {
    let n = chain.num_vertices();
    let h: Vec<f64> = (0..n).map(|i| chain.local_entropy(i)).collect();
    let mut dist = vec![0.0; n];
    dist[start] = 1.0;
    let mut acc = crate::numerics::KahanSum::new();
    for _ in 0..t {
        acc.add(kahan_sum(dist.iter().zip(&h).map(|(p, hi)| p * hi)));
        let mut next = vec![0.0; n];
        for (i, &p) in dist.iter().enumerate() {
            if p == 0.0 {
                continue;
            }
            for &(j, _, q) in &chain.moves[i] {
                next[j] += p * q;
            }
        }
        dist = next;
    }
    acc.value()
}

/// `1 − λ₂`, with `λ₂` the second largest eigenvalue of
/// `D^{1/2} P D^{−1/2}` (entries `w_ij / √(w_i w_j)`).
pub fn spectral_gap(chain: &QuenchedChain) -> f64 {
    let n = chain.num_vertices();
    let mut s = vec![vec![0.0; n]; n];
    for i in 0..n {
        for &(j, e, _) in &chain.moves[i] {
            s[i][j] = chain.conductances[e] / (chain.vertex_weights[i] * chain.vertex_weights[j]).sqrt();
        }
    }
    1.0 - symmetric_eigenvalues(&s)[1]
}

/// `m(w) = min_e w_e / Σ_g w_g`.
pub fn min_edge_mass(w: &[f64]) -> f64 {
    let total = kahan_sum(w.iter().copied());
    w.iter().copied().fold(f64::INFINITY, f64::min) / total
}

/// Conductance `min_{0<π(S)≤½} Q(S, S^c)/π(S)` by exhaustive enumeration of
/// vertex cuts.
pub fn conductance(g: &Graph, chain: &QuenchedChain) -> Result<f64> {
    let n = g.num_vertices();
    if n > 20 {
        return Err(Error::TooLarge {
            what: "vertices for cut enumeration",
            value: n,
            limit: 20,
        });
    }
    let mut best = f64::INFINITY;
    for mask in 1u64..((1u64 << n) - 1) {
        let inside = |v: usize| mask >> v & 1 == 1;
        let pi_s: f64 = (0..n).filter(|&v| inside(v)).map(|v| chain.stationary[v]).sum();
        if pi_s > 0.5 + 1e-15 {
            continue;
        }
        let mut flow = 0.0;
        for i in (0..n).filter(|&v| inside(v)) {
            for &(j, _, p) in &chain.moves[i] {
                if !inside(j) {
                    flow += chain.stationary[i] * p;
                }
            }
        }
        best = best.min(flow / pi_s);
    }
    Ok(best)
}

/// Exact law of `N_e(T)` for the chain started from `init`:
/// `out[k] = P(N_e(T) = k)`.
pub fn edge_count_distribution(chain: &QuenchedChain, init: &[f64], e: usize, t: usize) -> Vec<f64> {
    let n = chain.num_vertices();
    // state[v][k] = P(X_s = v, N_e(s) = k)
    let mut state = vec![vec![0.0; t + 1]; n];
    for v in 0..n {
        state[v][0] = init[v];
    }
    for s in 0..t {
        let mut next = vec![vec![0.0; t + 1]; n];
        for i in 0..n {
            for k in 0..=s {
                let p = state[i][k];
                if p == 0.0 {
                    continue;
                }
                for &(j, h, q) in &chain.moves[i] {
                    let k2 = if h == e { k + 1 } else { k };
                    next[j][k2] += p * q;
                }
            }
        }
        state = next;
    }
    (0..=t).map(|k| kahan_sum((0..n).map(|v| state[v][k]))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures;
    use std::f64::consts::LN_2;

    #[test]
    fn triangle_uniform_chain() {
        let g = fixtures::triangle();
        let c = quenched_chain(&g, &[1.0; 3]).unwrap();
        assert_eq!(c.transition[0], vec![0.0, 0.5, 0.5]);
        for p in &c.stationary {
            assert!((p - 1.0 / 3.0).abs() < 1e-15);
        }
        assert!((quenched_entropy_rate(&c) - LN_2).abs() < 1e-15);
        assert!((entropy_rate_edge_form(&g, &[1.0; 3]) - LN_2).abs() < 1e-15);
        assert!((quenched_path_entropy(&c, 0, 7) - 7.0 * LN_2).abs() < 1e-13);
        assert!((spectral_gap(&c) - 1.5).abs() < 1e-12);
    }

    #[test]
    fn single_edge_chain() {
        let g = fixtures::single_edge();
        let c = quenched_chain(&g, &[3.0]).unwrap();
        assert_eq!(quenched_entropy_rate(&c), 0.0);
        assert!((spectral_gap(&c) - 2.0).abs() < 1e-12);
        let path = simulate_quenched(&c, 0, 5, RngSeed::new(0, 0));
        assert_eq!(path.states(), &[0, 1, 0, 1, 0, 1]);
    }

    #[test]
    fn star_center_has_half_mass() {
        let g = fixtures::star(4);
        let c = quenched_chain(&g, &[0.3, 2.0, 1.1, 0.05]).unwrap();
        assert!((c.stationary[0] - 0.5).abs() < 1e-15);
    }

    #[test]
    fn one_step_path_entropy() {
        let g = fixtures::paw();
        let c = quenched_chain(&g, &[1.0, 2.0, 0.5, 3.0]).unwrap();
        assert!((quenched_path_entropy(&c, 2, 1) - c.local_entropy(2)).abs() < 1e-15);
    }

    #[test]
    fn edge_count_law_sums_to_one() {
        let g = fixtures::triangle();
        let c = quenched_chain(&g, &[1.0, 2.0, 3.0]).unwrap();
        let d = edge_count_distribution(&c, &[1.0, 0.0, 0.0], 1, 6);
        assert!((d.iter().sum::<f64>() - 1.0).abs() < 1e-14);
    }
}
