use super::RngSeed;
use crate::graph::{Graph, Trajectory};
use crate::magic::RootedParams;
use rand::Rng;

/// Undirected counts and final position of an ERRW run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ErrwRun {
    pub counts: Vec<u64>,
    pub end: usize,
}

fn step<R: Rng + ?Sized>(g: &Graph, local: &[f64], at: usize, rng: &mut R) -> (usize, usize) {
    let total: f64 = g.incident(at).iter().map(|&e| local[e]).sum();
    let mut u = rng.random::<f64>() * total;
    let mut last = None;
    for (v, e) in g.neighbors(at) {
        u -= local[e];
        last = Some((v, e));
        if u < 0.0 {
            break;
        }
    }
    last.expect("connected graph has neighbors")
}

/// Runs `t` steps of ERRW and records only the undirected edge counts.
pub fn simulate_errw_counts<R: Rng + ?Sized>(g: &Graph, p: &RootedParams, t: usize, rng: &mut R) -> ErrwRun {
    let mut local = p.a().to_vec();
    let mut counts = vec![0u64; g.num_edges()];
    let mut at = p.root;
    for _ in 0..t {
        let (v, e) = step(g, &local, at, rng);
        local[e] += 1.0;
        counts[e] += 1;
        at = v;
    }
    ErrwRun { counts, end: at }
}

pub fn simulate_errw_with<R: Rng + ?Sized>(g: &Graph, p: &RootedParams, t: usize, rng: &mut R) -> Trajectory {
    let mut local = p.a().to_vec();
    let mut states = Vec::with_capacity(t + 1);
    let mut at = p.root;
    states.push(at);
    for _ in 0..t {
        let (v, e) = step(g, &local, at, rng);
        local[e] += 1.0;
        at = v;
        states.push(at);
    }
    Trajectory::from_states_unchecked(states)
}

/// Samples `X_0, ..., X_T` of ERRW on `(G, root, A)`: each step picks an
/// incident edge with probability proportional to its current local time
/// `a_e + N_e`.
pub fn simulate_errw(g: &Graph, p: &RootedParams, t: usize, seed: RngSeed) -> Trajectory {
    simulate_errw_with(g, p, t, &mut seed.rng())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures;

    #[test]
    fn single_edge_alternates() {
        let g = fixtures::single_edge();
        let p = RootedParams::uniform(&g, 0.7).unwrap();
        let path = simulate_errw(&g, &p, 7, RngSeed::new(1, 0));
        assert_eq!(path.states(), &[0, 1, 0, 1, 0, 1, 0, 1]);
    }

    #[test]
    fn determinism() {
        let g = fixtures::k4();
        let p = RootedParams::uniform(&g, 1.0).unwrap();
        let a = simulate_errw(&g, &p, 50, RngSeed::new(9, 3));
        let b = simulate_errw(&g, &p, 50, RngSeed::new(9, 3));
        let c = simulate_errw(&g, &p, 50, RngSeed::new(9, 4));
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn counts_match_trajectory() {
        let g = fixtures::triangle();
        let p = RootedParams::uniform(&g, 1.3).unwrap();
        let path = simulate_errw(&g, &p, 40, RngSeed::new(5, 5));
        let run = simulate_errw_counts(&g, &p, 40, &mut RngSeed::new(5, 5).rng());
        let c = crate::graph::path_counts(&g, &path);
        assert_eq!(run.counts, c.undirected);
        assert_eq!(run.end, path.last());
    }
}
