use super::law::TrajectoryLaw;
use crate::envsampler::{SampleMethod, SampleSet};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::magic::RootedParams;
use crate::numerics::{effective_sample_size, kahan_sum, mean_and_se, KahanSum};
use crate::specfun::{digamma_unchecked, log_gamma_unchecked, log_multivariate_beta};
use crate::walkers::{entropy_rate_edge_form, quenched_chain, quenched_path_entropy};
use serde::Serialize;
use std::f64::consts::LN_2;

/// Monte Carlo estimate with its standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Estimate {
    pub value: f64,
    pub std_error: f64,
}

/// Mean and standard error over per-sample values; MCMC sets are corrected
/// for autocorrelation.
pub(crate) fn summarize(values: &[f64], method: SampleMethod) -> Estimate {
    let (value, mut std_error) = mean_and_se(values);
    if method == SampleMethod::Mcmc && values.len() > 1 {
        let ess = effective_sample_size(values).max(1.0);
        std_error *= (values.len() as f64 / ess).sqrt();
    }
    Estimate { value, std_error }
}

/// `I(W; X_0^T) ≤ (2|E| − 1) log(T + 1)`.
pub fn mi_upper_bound(t: u64, edge_count: usize) -> f64 {
    (2.0 * edge_count as f64 - 1.0) * (t as f64 + 1.0).ln()
}

/// `r(v0, A) = E[r(P_W)]` averaged over environment samples.
pub fn entropy_rate_mc(g: &Graph, set: &SampleSet) -> Result<Estimate> {
    if set.is_empty() {
        return Err(Error::EmptySamples);
    }
    let rates: Vec<f64> = set.samples.iter().map(|x| entropy_rate_edge_form(g, x)).collect();
    Ok(summarize(&rates, set.method))
}

/// Upper bound on the annealed entropy rate:
/// `Σ_e (a_e/2)·Γ(b_i)/Γ(b_i+½)·Γ(b_j)/Γ(b_j+½)·(log 2 + ½Ψ(b_i+½) + ½Ψ(b_j+½) − Ψ(a_e+1))`.
pub fn entropy_rate_upper(g: &Graph, p: &RootedParams) -> f64 {
    let b = p.half_weights(g);
    let ratio = |x: f64| (log_gamma_unchecked(x) - log_gamma_unchecked(x + 0.5)).exp();
    kahan_sum(g.edges().iter().enumerate().map(|(e, &(i, j))| {
        let ae = p.a()[e];
        0.5 * ae
            * ratio(b[i])
            * ratio(b[j])
            * (LN_2 + 0.5 * digamma_unchecked(b[i] + 0.5) + 0.5 * digamma_unchecked(b[j] + 0.5)
                - digamma_unchecked(ae + 1.0))
    }))
}

/// `I(W; X_0^T) = H(X_0^T) − H(X_0^T | W)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MutualInformation {
    pub value: f64,
    /// Standard error inherited from the `H(X_0^T | W)` average.
    pub std_error: f64,
    pub path_entropy: f64,
    pub conditional_entropy: f64,
}

/// Exact `H(X_0^T)` from the trajectory law, minus the sample average of the
/// exact quenched path entropies `h_T(W)`.
pub fn mutual_information_exact(g: &Graph, p: &RootedParams, t: usize, set: &SampleSet) -> Result<MutualInformation> {
    if set.is_empty() {
        return Err(Error::EmptySamples);
    }
    let h = TrajectoryLaw::new(g, p, t)?.entropy();
    let cond = set
        .samples
        .iter()
        .map(|x| Ok(quenched_path_entropy(&quenched_chain(g, x)?, p.root, t)))
        .collect::<Result<Vec<f64>>>()?;
    let c = summarize(&cond, set.method);
    Ok(MutualInformation {
        value: h - c.value,
        std_error: c.std_error,
        path_entropy: h,
        conditional_entropy: c.value,
    })
}

/// Differential entropy of `Dir(β)`:
/// `log B(β) + (β₀ − n)Ψ(β₀) − Σ(β_i − 1)Ψ(β_i)`.
pub fn dirichlet_entropy(beta: &[f64]) -> Result<f64> {
    let lb = log_multivariate_beta(beta)?;
    let b0 = kahan_sum(beta.iter().copied());
    let n = beta.len() as f64;
    Ok(lb + (b0 - n) * digamma_unchecked(b0) - kahan_sum(beta.iter().map(|&b| (b - 1.0) * digamma_unchecked(b))))
}

/// Number of compositions of `m` into `n` nonnegative parts, `C(m+n−1, n−1)`.
pub fn composition_count(m: u64, n: usize) -> f64 {
    if n == 0 {
        return 0.0;
    }
    crate::specfun::log_binomial(m + n as u64 - 1, n as u64 - 1)
        .exp()
        .round()
}

/// Composition enumeration is refused beyond this many terms.
pub const COMPOSITION_BUDGET: f64 = 1e6;

/// Exact `I(P; K)` on the `n`-star with constant weight `a` after `m`
/// excursions: `h(Dir(α)) − E[h(Dir(α + K))]` with `α_i = a/2` and `K`
/// Dirichlet-multinomial.
pub fn mi_nstar_exact(n: usize, a: f64, m: u64) -> Result<f64> {
    if n < 1 || !(a > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "need n ≥ 1 and a > 0, got n={n}, a={a}"
        )));
    }
    let count = composition_count(m, n);
    if count > COMPOSITION_BUDGET {
        return Err(Error::BudgetExceeded {
            count,
            budget: COMPOSITION_BUDGET,
        });
    }
    let alpha = vec![0.5 * a; n];
    let prior = dirichlet_entropy(&alpha)?;
    if m == 0 || n == 1 {
        return Ok(0.0);
    }
    let lb_alpha = log_multivariate_beta(&alpha)?;
    let lm = log_gamma_unchecked(m as f64 + 1.0);
    let mut k = vec![0u64; n];
    let mut acc = KahanSum::new();
    let mut beta = vec![0.0; n];
    visit_compositions(&mut k, 0, m, &mut |k: &[u64]| {
        for (bi, &ki) in beta.iter_mut().zip(k) {
            *bi = 0.5 * a + ki as f64;
        }
        let lb = log_multivariate_beta(&beta).expect("positive");
        let lpmf = lm - k.iter().map(|&ki| log_gamma_unchecked(ki as f64 + 1.0)).sum::<f64>() + lb - lb_alpha;
        acc.add(lpmf.exp() * dirichlet_entropy(&beta).expect("positive"));
    });
    Ok((prior - acc.value()).max(0.0))
}

fn visit_compositions<F: FnMut(&[u64])>(k: &mut Vec<u64>, i: usize, left: u64, f: &mut F) {
    if i == k.len() - 1 {
        k[i] = left;
        f(k);
        return;
    }
    for v in 0..=left {
        k[i] = v;
        visit_compositions(k, i + 1, left - v, f);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures;

    #[test]
    fn upper_bound_formula() {
        assert!((mi_upper_bound(1, 1) - LN_2).abs() < 1e-15);
        assert!((mi_upper_bound(9, 3) - 5.0 * 10f64.ln()).abs() < 1e-14);
    }

    #[test]
    fn triangle_entropy_upper_hand_value() {
        let g = fixtures::triangle();
        let p = RootedParams::uniform(&g, 1.0).unwrap();
        let expect = 0.5 + std::f64::consts::PI / 8.0 * LN_2;
        assert!((entropy_rate_upper(&g, &p) - expect).abs() < 1e-13);
    }

    #[test]
    fn dirichlet_entropy_uniform() {
        // Dir(1,1,1) is uniform with density 2 on the 2-simplex
        assert!((dirichlet_entropy(&[1.0, 1.0, 1.0]).unwrap() + LN_2).abs() < 1e-14);
        assert!(dirichlet_entropy(&[1.0, 1.0]).unwrap().abs() < 1e-14);
    }

    #[test]
    fn nstar_mi_basics() {
        assert_eq!(mi_nstar_exact(3, 1.0, 0).unwrap(), 0.0);
        let a = mi_nstar_exact(3, 1.0, 5).unwrap();
        let b = mi_nstar_exact(3, 1.0, 10).unwrap();
        assert!(a > 0.0 && b > a);
        assert_eq!(composition_count(4, 3), 15.0);
        assert!(mi_nstar_exact(10, 1.0, 1000).is_err());
    }
}
