use super::{McmcDiagnostics, SampleMethod, SampleSet};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::magic::log_unnormalized_density;
use crate::magic::RootedParams;
use crate::numerics::effective_sample_size;
use crate::walkers::RngSeed;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct McmcSettings {
    pub n: usize,
    pub burn_in: usize,
    pub thin: usize,
    pub step_scale: f64,
    /// Adapt `step_scale` during burn-in toward 30% acceptance.
    pub auto_tune: bool,
}

impl Default for McmcSettings {
    fn default() -> Self {
        Self {
            n: 10_000,
            burn_in: 5_000,
            thin: 5,
            step_scale: 0.5,
            auto_tune: true,
        }
    }
}

const TUNE_BATCH: usize = 50;

/// Softmax of `(y_1, ..., y_{m−1}, 0)`.
fn to_simplex(y: &[f64], x: &mut [f64]) {
    let m = y.iter().copied().fold(0.0, f64::max);
    let mut s = (-m).exp();
    for (xi, &yi) in x.iter_mut().zip(y) {
        *xi = (yi - m).exp();
        s += *xi;
    }
    let last = x.len() - 1;
    x[last] = (-m).exp();
    for xi in x.iter_mut() {
        *xi /= s;
    }
}

struct Target<'a> {
    g: &'a Graph,
    p: &'a RootedParams,
    x: Vec<f64>,
}

impl Target<'_> {
    /// Log density in log-ratio coordinates: `log ρ(x) + Σ_i log x_i`, the
    /// second term being the Jacobian of the softmax map.
    fn log_density(&mut self, y: &[f64]) -> f64 {
        to_simplex(y, &mut self.x);
        if self.x.iter().any(|&v| !(v > 0.0)) {
            return f64::NEG_INFINITY;
        }
        match log_unnormalized_density(self.g, self.p, &self.x) {
            Ok(l) => l + self.x.iter().map(|v| v.ln()).sum::<f64>(),
            Err(_) => f64::NEG_INFINITY,
        }
    }
}

/// Random-walk Metropolis on the simplex density of `μ_{v0,A}`.
///
/// The chain moves in `y_i = log(x_i / x_m)`, `i < m = |E|`, with isotropic
/// Gaussian proposals. With `auto_tune`, the scale is doubled or halved per
/// batch of burn-in iterations whose acceptance falls outside `[0.2, 0.4]`,
/// with the adjustment factor shrinking toward 1 as tuning proceeds; the scale
/// is frozen after burn-in.
pub fn mcmc_sample_env(g: &Graph, p: &RootedParams, settings: &McmcSettings, seed: RngSeed) -> Result<SampleSet> {
    if !(settings.step_scale > 0.0 && settings.step_scale.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "step_scale must be positive, got {}",
            settings.step_scale
        )));
    }
    if settings.thin == 0 {
        return Err(Error::InvalidParameter("thin must be at least 1".into()));
    }
    let m = g.num_edges();
    let mut rng = seed.rng();
    let dims = m - 1;
    let mut target = Target { g, p, x: vec![0.0; m] };
    let mut y = vec![0.0; dims];
    let mut cur = target.log_density(&y);
    let mut scale = settings.step_scale;
    let mut proposal = vec![0.0; dims];

    let mut step = |y: &mut Vec<f64>, cur: &mut f64, scale: f64, rng: &mut rand_chacha::ChaCha8Rng| -> bool {
        if dims == 0 {
            return true;
        }
        for (q, &yi) in proposal.iter_mut().zip(y.iter()) {
            let z: f64 = rng.sample(StandardNormal);
            *q = yi + scale * z;
        }
        let next = target.log_density(&proposal);
        let u: f64 = rng.random();
        if u.ln() < next - *cur {
            y.copy_from_slice(&proposal);
            *cur = next;
            true
        } else {
            false
        }
    };

    let mut factor: f64 = 2.0;
    let mut batch_accepts = 0usize;
    for i in 0..settings.burn_in {
        if step(&mut y, &mut cur, scale, &mut rng) {
            batch_accepts += 1;
        }
        if settings.auto_tune && (i + 1) % TUNE_BATCH == 0 {
            let rate = batch_accepts as f64 / TUNE_BATCH as f64;
            if rate > 0.4 {
                scale *= factor;
            } else if rate < 0.2 {
                scale /= factor;
            }
            factor = 1.0 + (factor - 1.0) * 0.95;
            batch_accepts = 0;
        }
    }

    let mut samples = Vec::with_capacity(settings.n);
    let mut accepts = 0usize;
    let mut x = vec![0.0; m];
    for _ in 0..settings.n {
        for _ in 0..settings.thin {
            if step(&mut y, &mut cur, scale, &mut rng) {
                accepts += 1;
            }
        }
        if dims == 0 {
            samples.push(vec![1.0]);
        } else {
            to_simplex(&y, &mut x);
            samples.push(x.clone());
        }
    }
    let total = (settings.n * settings.thin).max(1);
    let ess = if dims == 0 || samples.is_empty() {
        samples.len() as f64
    } else {
        (0..m)
            .map(|e| effective_sample_size(&samples.iter().map(|s| s[e]).collect::<Vec<_>>()))
            .fold(f64::INFINITY, f64::min)
    };
    Ok(SampleSet {
        samples,
        method: SampleMethod::Mcmc,
        diagnostics: Some(McmcDiagnostics {
            acceptance_rate: accepts as f64 / total as f64,
            ess,
            burn_in: settings.burn_in,
            thin: settings.thin,
            step_scale: scale,
        }),
        seed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures;

    #[test]
    fn softmax_round_trip() {
        let mut x = vec![0.0; 3];
        to_simplex(&[0.0, 0.0], &mut x);
        for v in &x {
            assert!((v - 1.0 / 3.0).abs() < 1e-15);
        }
        to_simplex(&[2f64.ln(), 0.0], &mut x);
        assert!((x[0] - 0.5).abs() < 1e-15 && (x[1] - 0.25).abs() < 1e-15);
    }

    #[test]
    fn rejects_bad_settings() {
        let g = fixtures::triangle();
        let p = RootedParams::uniform(&g, 1.0).unwrap();
        let s = McmcSettings {
            step_scale: 0.0,
            ..Default::default()
        };
        assert!(mcmc_sample_env(&g, &p, &s, RngSeed::new(0, 0)).is_err());
    }

    #[test]
    fn tuned_acceptance_in_range() {
        let g = fixtures::triangle();
        let p = RootedParams::uniform(&g, 1.0).unwrap();
        let s = McmcSettings {
            n: 2000,
            burn_in: 2000,
            thin: 2,
            step_scale: 20.0,
            auto_tune: true,
        };
        let set = mcmc_sample_env(&g, &p, &s, RngSeed::new(1, 0)).unwrap();
        let d = set.diagnostics.unwrap();
        assert!(d.acceptance_rate > 0.1 && d.acceptance_rate < 0.6, "{d:?}");
    }

    #[test]
    fn single_edge_is_trivial() {
        let g = fixtures::single_edge();
        let p = RootedParams::uniform(&g, 1.0).unwrap();
        let s = McmcSettings {
            n: 5,
            ..Default::default()
        };
        let set = mcmc_sample_env(&g, &p, &s, RngSeed::new(1, 0)).unwrap();
        assert!(set.samples.iter().all(|x| x == &vec![1.0]));
    }
}
