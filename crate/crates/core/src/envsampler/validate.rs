use super::{SampleMethod, SampleSet};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::magic::{grad_log_z, sufficient_statistics, RootedParams};
use crate::numerics::{effective_sample_size, mean_and_se};
use serde::Serialize;

#[derive(Debug, Clone, Serialize)]
pub struct EdgeCheck {
    pub edge: usize,
    /// Sample mean of `T_e(W)`.
    pub mean: f64,
    pub std_error: f64,
    /// `∂Φ/∂a_e`.
    pub expected: f64,
    pub z: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ValidationReport {
    pub edges: Vec<EdgeCheck>,
    pub max_abs_z: f64,
    /// True if some `|z| > 4`.
    pub flagged: bool,
}

/// Compares per-edge sample means of `T_e(W) = log(W_e/√(W_u W_v))` with
/// the gradient `∂Φ/∂a_e`. Standard errors of MCMC sets are inflated by the
/// autocorrelation of each statistic.
pub fn validate_sampler(g: &Graph, set: &SampleSet, p: &RootedParams) -> Result<ValidationReport> {
    if set.is_empty() {
        return Err(Error::EmptySamples);
    }
    let stats: Vec<Vec<f64>> = set.samples.iter().map(|x| sufficient_statistics(g, x)).collect();
    let grad = grad_log_z(g, p);
    let mut edges = Vec::with_capacity(g.num_edges());
    for (e, &expected) in grad.iter().enumerate() {
        let col: Vec<f64> = stats.iter().map(|s| s[e]).collect();
        let (mean, mut se) = mean_and_se(&col);
        if set.method == SampleMethod::Mcmc && col.len() > 1 {
            let ess = effective_sample_size(&col).max(1.0);
            se *= (col.len() as f64 / ess).sqrt();
        }
        let z = if se > 0.0 {
            (mean - expected) / se
        } else if (mean - expected).abs() < 1e-12 {
            0.0
        } else {
            f64::INFINITY
        };
        edges.push(EdgeCheck {
            edge: e,
            mean,
            std_error: se,
            expected,
            z,
        });
    }
    let max_abs_z = edges.iter().map(|c| c.z.abs()).fold(0.0, f64::max);
    Ok(ValidationReport {
        edges,
        max_abs_z,
        flagged: max_abs_z > 4.0,
    })
}
