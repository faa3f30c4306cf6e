use super::entropy::Estimate;
use super::gap::run_trials;
use crate::envsampler::Parametrization;
use crate::error::{Error, Result};
use crate::numerics::KahanSum;
use crate::numerics::{integrate_adaptive, log_sum_exp, mean_and_se};
use crate::specfun::{lambda_kl_unchecked, log_binomial, log_gamma_unchecked};
use crate::walkers::RngSeed;
use rand::Rng;
use serde::Serialize;

fn log_beta(a: f64, b: f64) -> f64 {
    log_gamma_unchecked(a) + log_gamma_unchecked(b) - log_gamma_unchecked(a + b)
}

fn check(n: usize, a: f64, gamma: f64) -> Result<()> {
    if n < 1 {
        return Err(Error::InvalidParameter("the star needs at least one leaf".into()));
    }
    if !(a > 0.0 && a.is_finite()) || !(gamma > 0.0 && gamma.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "need a, gamma > 0, got a={a}, gamma={gamma}"
        )));
    }
    Ok(())
}

/// Beta parameters `(α, (n−1)α)` of one leaf's limiting excursion frequency.
pub fn star_beta_parameters(n: usize, a: f64, parametrization: Parametrization) -> (f64, f64) {
    let alpha = parametrization.alpha(a);
    (alpha, (n as f64 - 1.0) * alpha)
}

/// `E[1/(K + γ)]` for `K` the number of the first `m` excursions from the
/// center of the `n`-star that use a fixed leaf, by summing the
/// beta-binomial pmf in log-domain.
pub fn nstar_inverse_exact(n: usize, a: f64, gamma: f64, m: u64, parametrization: Parametrization) -> Result<f64> {
    check(n, a, gamma)?;
    if m == 0 {
        return Ok(1.0 / gamma);
    }
    let (alpha, beta) = star_beta_parameters(n, a, parametrization);
    if n == 1 {
        return Ok(1.0 / (m as f64 + gamma));
    }
    let lb = log_beta(alpha, beta);
    let terms: Vec<f64> = (0..=m)
        .map(|k| log_binomial(m, k) + log_beta(k as f64 + alpha, (m - k) as f64 + beta) - lb - (k as f64 + gamma).ln())
        .collect();
    Ok(log_sum_exp(&terms).exp())
}

/// Same quantity as [`nstar_inverse_exact`], as the mixture integral
/// `B(α,β)^{-1} ∫ x^{α−1}(1−x)^{β−1} g_m(x) dx` evaluated by adaptive
/// quadrature. The endpoint singularities are removed by the substitutions
/// `u = x^α` on `[0, ½]` and `v = (1−x)^β` on `[½, 1]`.
pub fn nstar_inverse_quadrature(n: usize, a: f64, gamma: f64, m: u64, parametrization: Parametrization) -> Result<f64> {
    check(n, a, gamma)?;
    if n == 1 {
        return Ok(1.0 / (m as f64 + gamma));
    }
    let (alpha, beta) = star_beta_parameters(n, a, parametrization);
    let lbin: Vec<f64> = (0..=m).map(|k| log_binomial(m, k)).collect();
    let lgam: Vec<f64> = (0..=m).map(|k| (k as f64 + gamma).ln()).collect();
    let g = |x: f64| -> f64 {
        if x <= 0.0 {
            return 1.0 / gamma;
        }
        if x >= 1.0 {
            return 1.0 / (m as f64 + gamma);
        }
        let (lx, l1x) = (x.ln(), (-x).ln_1p());
        let terms: Vec<f64> = (0..=m as usize)
            .map(|k| lbin[k] + k as f64 * lx + (m as f64 - k as f64) * l1x - lgam[k])
            .collect();
        log_sum_exp(&terms).exp()
    };
    let left = |u: f64| {
        let x = u.powf(1.0 / alpha);
        (1.0 - x).powf(beta - 1.0) * g(x) / alpha
    };
    let right = |v: f64| {
        let y = v.powf(1.0 / beta);
        (1.0 - y).powf(alpha - 1.0) * g(1.0 - y) / beta
    };
    let (l, _) = integrate_adaptive(left, 0.0, 0.5f64.powf(alpha), 1e-15, 1e-12, 4000);
    let (r, _) = integrate_adaptive(right, 0.0, 0.5f64.powf(beta), 1e-15, 1e-12, 4000);
    Ok((l + r) / log_beta(alpha, beta).exp())
}

/// One run of the excursion urn: `n` colors of initial weight `a`, each draw
/// adding 2 to the drawn color. Returns how often color 0 was drawn in `m`
/// draws.
pub fn urn_draws<R: Rng + ?Sized>(n: usize, a: f64, m: u64, rng: &mut R) -> u64 {
    let mut w = vec![a; n];
    let mut total = a * n as f64;
    let mut k = 0;
    for _ in 0..m {
        let mut u = rng.random::<f64>() * total;
        let mut pick = n - 1;
        for (i, wi) in w.iter().enumerate() {
            u -= wi;
            if u < 0.0 {
                pick = i;
                break;
            }
        }
        w[pick] += 2.0;
        total += 2.0;
        if pick == 0 {
            k += 1;
        }
    }
    k
}

/// Monte Carlo `E[1/(K + γ)]` from the excursion urn.
pub fn nstar_urn_mc(n: usize, a: f64, gamma: f64, m: u64, trials: usize, seed: RngSeed) -> Result<Estimate> {
    check(n, a, gamma)?;
    if trials == 0 {
        return Err(Error::InvalidParameter("trials must be at least 1".into()));
    }
    let values = run_trials(trials, seed, |s| {
        1.0 / (urn_draws(n, a, m, &mut s.rng()) as f64 + gamma)
    });
    let (value, std_error) = mean_and_se(&values);
    Ok(Estimate { value, std_error })
}

/// Converts the walk-step quantity `E[1/(N_e(2m) + γ)]` on a star started at
/// its center into excursion form: `N_e(2m) = 2K`, so the value is
/// `½ E[1/(K + γ/2)]`.
pub fn nstar_inverse_steps(n: usize, a: f64, gamma: f64, steps: u64, parametrization: Parametrization) -> Result<f64> {
    if steps % 2 == 1 {
        return Err(Error::InvalidParameter("step count on a star must be even".into()));
    }
    Ok(0.5 * nstar_inverse_exact(n, a, 0.5 * gamma, steps / 2, parametrization)?)
}

/// Exact gap on a star after `m` excursions from its center.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StarGap {
    pub gap: f64,
    pub edge_term: f64,
    pub vertex_term: f64,
}

/// `Gap_{2m}` on the star rooted at its center, leaf weights `a0` versus `a1`.
///
/// After `m` excursions the walk is back at the center, whose posterior
/// half-weight `(Σa + 2m)/2` is deterministic, and every other term of the
/// bracket depends on a single leaf count `K_e`, whose marginal law is
/// beta-binomial `(m, α_e, Σα − α_e)`. The expectation is therefore a sum of
/// one-dimensional sums.
pub fn nstar_gap_exact(a0: &[f64], a1: &[f64], m: u64, parametrization: Parametrization) -> Result<StarGap> {
    if a0.is_empty() || a0.len() != a1.len() {
        return Err(Error::LengthMismatch {
            expected: a0.len().max(1),
            got: a1.len(),
        });
    }
    if a0.iter().chain(a1).any(|&x| !(x > 0.0 && x.is_finite())) {
        return Err(Error::InvalidParameter("star weights must be positive".into()));
    }
    let alpha: Vec<f64> = a0.iter().map(|&x| parametrization.alpha(x)).collect();
    let alpha_total: f64 = alpha.iter().sum();
    let (mut edge, mut vertex) = (KahanSum::new(), KahanSum::new());
    for (e, (&x0, &x1)) in a0.iter().zip(a1).enumerate() {
        let (al, be) = (alpha[e], alpha_total - alpha[e]);
        let law: Vec<f64> = if a0.len() == 1 {
            (0..=m).map(|k| if k == m { 1.0 } else { 0.0 }).collect()
        } else {
            let lb = log_beta(al, be);
            (0..=m)
                .map(|k| (log_binomial(m, k) + log_beta(k as f64 + al, (m - k) as f64 + be) - lb).exp())
                .collect()
        };
        for (k, &pk) in law.iter().enumerate() {
            if pk == 0.0 {
                continue;
            }
            let n = 2.0 * k as f64;
            edge.add(pk * lambda_kl_unchecked(x0 + n, x1 + n));
            vertex.add(pk * lambda_kl_unchecked(0.5 * (x0 + n + 1.0), 0.5 * (x1 + n + 1.0)));
        }
    }
    let (s0, s1): (f64, f64) = (a0.iter().sum(), a1.iter().sum());
    let n = 2.0 * m as f64;
    vertex.add(lambda_kl_unchecked(0.5 * (s0 + n), 0.5 * (s1 + n)));
    let (edge_term, vertex_term) = (edge.value(), vertex.value());
    Ok(StarGap {
        gap: edge_term - vertex_term,
        edge_term,
        vertex_term,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_excursions() {
        assert_eq!(nstar_inverse_exact(3, 1.0, 2.0, 0, Parametrization::Half).unwrap(), 0.5);
    }

    #[test]
    fn two_routes_agree() {
        for (a, m) in [(1.0, 10), (2.0, 64), (3.0, 300), (0.6, 128)] {
            for par in [Parametrization::Half, Parametrization::Full] {
                let x = nstar_inverse_exact(3, a, 1.0, m, par).unwrap();
                let y = nstar_inverse_quadrature(3, a, 1.0, m, par).unwrap();
                assert!((x - y).abs() < 1e-8, "a={a} m={m}: {x} vs {y}");
            }
        }
    }

    #[test]
    fn star_gap_matches_enumeration() {
        use crate::graph::{fixtures, EdgeWeights};
        use crate::infoquant::gap_exact;
        use crate::magic::RootedParams;
        let g = fixtures::star(3);
        let a0 = [0.7, 1.3, 2.2];
        let a1 = [1.5, 1.0, 3.0];
        let p0 = RootedParams::at_root(&g, EdgeWeights::new(a0.to_vec()).unwrap()).unwrap();
        let p1 = RootedParams::at_root(&g, EdgeWeights::new(a1.to_vec()).unwrap()).unwrap();
        for m in 0..=5u64 {
            let star = nstar_gap_exact(&a0, &a1, m, Parametrization::Half).unwrap();
            let full = gap_exact(&g, &p0, &p1, 2 * m as usize).unwrap();
            assert!(
                (star.gap - full.gap).abs() < 1e-10,
                "m={m}: {} vs {}",
                star.gap,
                full.gap
            );
            assert!((star.edge_term - full.edge_term).abs() < 1e-10);
        }
    }

    #[test]
    fn single_draw_by_hand() {
        // K ~ Bernoulli(1/n) after one draw
        let v = nstar_inverse_exact(4, 1.3, 1.0, 1, Parametrization::Half).unwrap();
        assert!((v - (0.75 + 0.25 * 0.5)).abs() < 1e-14);
    }
}
