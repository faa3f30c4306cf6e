use super::entropy::Estimate;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::magic::{env_kl_terms, half_weights, RootedParams};
use crate::numerics::{mean_and_se, GaussLegendre};
use crate::specfun::trigamma_unchecked;
use crate::walkers::{simulate_errw_counts, ErrwRun, RngSeed};
use rayon::prelude::*;
use serde::Serialize;

/// Evaluates `f` on trials `0..trials`, trial `i` drawing from stream
/// `seed.stream + i`. Results come back in trial order regardless of
/// scheduling.
pub fn run_trials<T, F>(trials: usize, seed: RngSeed, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(RngSeed) -> T + Sync,
{
    (0..trials as u64).into_par_iter().map(|i| f(seed.trial(i))).collect()
}

fn errw_runs(g: &Graph, p: &RootedParams, t: usize, trials: usize, seed: RngSeed) -> Result<Vec<ErrwRun>> {
    if trials == 0 {
        return Err(Error::InvalidParameter("trials must be at least 1".into()));
    }
    Ok(run_trials(trials, seed, |s| {
        simulate_errw_counts(g, p, t, &mut s.rng())
    }))
}

fn estimate(values: &[f64]) -> Estimate {
    let (value, std_error) = mean_and_se(values);
    Estimate { value, std_error }
}

fn check_pair(g: &Graph, p0: &RootedParams, p1: &RootedParams) -> Result<()> {
    if p0.root != p1.root {
        return Err(Error::RootMismatch(p0.root, p1.root));
    }
    g.check_len(p0.weights.len())?;
    g.check_len(p1.weights.len())
}

/// Monte Carlo gap with its edge and vertex parts.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GapMc {
    pub value: f64,
    pub std_error: f64,
    pub edge_term: f64,
    pub vertex_term: f64,
}

/// Per-trajectory bracket
/// `Σ_e Λ(a0_e+N_e, a1_e+N_e) − Σ_v Λ(b0_v^{(N)}, b1_v^{(N)})`; depends on the
/// path only through `N` and its endpoint.
pub fn gap_bracket(g: &Graph, p0: &RootedParams, p1: &RootedParams, run: &ErrwRun) -> (f64, f64) {
    let a0 = p0.weights.plus_counts(&run.counts);
    let a1 = p1.weights.plus_counts(&run.counts);
    let kl = env_kl_terms(g, a0.values(), a1.values(), run.end);
    (kl.edge_term, kl.vertex_term)
}

/// `Gap_T = E[bracket]` averaged over ERRW trajectories under `p0`.
pub fn gap_formula_mc(
    g: &Graph,
    p0: &RootedParams,
    p1: &RootedParams,
    t: usize,
    trials: usize,
    seed: RngSeed,
) -> Result<GapMc> {
    check_pair(g, p0, p1)?;
    let runs = errw_runs(g, p0, t, trials, seed)?;
    let terms: Vec<(f64, f64)> = runs.par_iter().map(|r| gap_bracket(g, p0, p1, r)).collect();
    let values: Vec<f64> = terms.iter().map(|(e, v)| e - v).collect();
    let est = estimate(&values);
    Ok(GapMc {
        value: est.value,
        std_error: est.std_error,
        edge_term: mean_and_se(&terms.iter().map(|x| x.0).collect::<Vec<_>>()).0,
        vertex_term: mean_and_se(&terms.iter().map(|x| x.1).collect::<Vec<_>>()).0,
    })
}

fn weight_floor(p0: &RootedParams, p1: &RootedParams) -> f64 {
    p0.weights.min().min(p1.weights.min())
}

/// `½(1 + 1/a̲) Σ_e δ_e² E[1/(N_e + a̲)]`, `a̲` the smallest entry of either
/// weight vector.
pub fn gap_upper(
    g: &Graph,
    p0: &RootedParams,
    p1: &RootedParams,
    t: usize,
    trials: usize,
    seed: RngSeed,
) -> Result<Estimate> {
    check_pair(g, p0, p1)?;
    let amin = weight_floor(p0, p1);
    let d2: Vec<f64> = p0.a().iter().zip(p1.a()).map(|(x, y)| (y - x) * (y - x)).collect();
    let runs = errw_runs(g, p0, t, trials, seed)?;
    let factor = 0.5 * (1.0 + 1.0 / amin);
    let values: Vec<f64> = runs
        .iter()
        .map(|r| {
            factor
                * d2.iter()
                    .zip(&r.counts)
                    .map(|(d, &n)| d / (n as f64 + amin))
                    .sum::<f64>()
        })
        .collect();
    Ok(estimate(&values))
}

/// Taylor-remainder form
/// `∫₀¹ (1−t)(Σ_e δ_e² Ψ₁(a0_e+N_e+tδ_e) − ¼Σ_v δ_v² Ψ₁(b0_v+tδ_v/2)) dt`,
/// by Gauss–Legendre quadrature in `t` per trajectory, then averaged.
pub fn gap_integral(
    g: &Graph,
    p0: &RootedParams,
    p1: &RootedParams,
    t: usize,
    trials: usize,
    seed: RngSeed,
    quad_nodes: usize,
) -> Result<Estimate> {
    check_pair(g, p0, p1)?;
    if quad_nodes < 8 {
        return Err(Error::InvalidParameter(format!(
            "need at least 8 quadrature nodes, got {quad_nodes}"
        )));
    }
    let rule = GaussLegendre::new(quad_nodes);
    let delta: Vec<f64> = p0.a().iter().zip(p1.a()).map(|(x, y)| y - x).collect();
    let delta_v = g.vertex_sums(&delta);
    let runs = errw_runs(g, p0, t, trials, seed)?;
    let values: Vec<f64> = runs
        .par_iter()
        .map(|r| {
            let a0 = p0.weights.plus_counts(&r.counts);
            let b0 = half_weights(g, a0.values(), r.end);
            rule.integrate(0.0, 1.0, |s| {
                let edge: f64 = delta
                    .iter()
                    .zip(a0.values())
                    .filter(|(d, _)| **d != 0.0)
                    .map(|(d, a)| d * d * trigamma_unchecked(a + s * d))
                    .sum();
                let vert: f64 = delta_v
                    .iter()
                    .zip(&b0)
                    .filter(|(d, _)| **d != 0.0)
                    .map(|(d, b)| d * d * trigamma_unchecked(b + 0.5 * s * d))
                    .sum();
                (1.0 - s) * (edge - 0.25 * vert)
            })
        })
        .collect();
    Ok(estimate(&values))
}

/// `E[1/(N_e(T) + γ)]` under ERRW.
pub fn inverse_local_time_mc(
    g: &Graph,
    p: &RootedParams,
    edge: usize,
    gamma: f64,
    t: usize,
    trials: usize,
    seed: RngSeed,
) -> Result<Estimate> {
    if edge >= g.num_edges() {
        return Err(Error::InvalidParameter(format!("edge index {edge} out of range")));
    }
    if !(gamma > 0.0) {
        return Err(Error::InvalidParameter(format!("gamma must be positive, got {gamma}")));
    }
    let runs = errw_runs(g, p, t, trials, seed)?;
    let values: Vec<f64> = runs.iter().map(|r| 1.0 / (r.counts[edge] as f64 + gamma)).collect();
    Ok(estimate(&values))
}
