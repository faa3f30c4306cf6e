//! Draws from the environment law `μ_{v0,A}` in the simplex gauge.
//!
//! Stars rooted at their center are sampled exactly: the simplex density
//! reduces to a Dirichlet law. Every other graph uses random-walk Metropolis
//! in additive log-ratio coordinates.

mod mcmc;
mod star;
mod validate;

pub use mcmc::{mcmc_sample_env, McmcSettings};
pub use star::{sample_env_star, Parametrization};
pub use validate::{validate_sampler, EdgeCheck, ValidationReport};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::magic::Environment;
use crate::walkers::RngSeed;
use serde::{Deserialize, Serialize};
use std::fmt::Write;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SampleMethod {
    ExactStar(Parametrization),
    Mcmc,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct McmcDiagnostics {
    pub acceptance_rate: f64,
    /// Smallest per-coordinate effective sample size.
    pub ess: f64,
    pub burn_in: usize,
    pub thin: usize,
    /// Proposal scale after tuning.
    pub step_scale: f64,
}

/// Simplex-gauge environment draws with their provenance.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleSet {
    pub samples: Vec<Vec<f64>>,
    pub method: SampleMethod,
    pub diagnostics: Option<McmcDiagnostics>,
    pub seed: RngSeed,
}

impl SampleSet {
    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn environments(&self) -> impl Iterator<Item = Result<Environment>> + '_ {
        self.samples.iter().map(|x| Environment::simplex(x.clone()))
    }

    /// Values of coordinate `e` across samples.
    pub fn marginal(&self, e: usize) -> Vec<f64> {
        self.samples.iter().map(|x| x[e]).collect()
    }

    /// Concatenates independent sets drawn by the same method.
    pub fn concat(sets: Vec<SampleSet>) -> Result<SampleSet> {
        let mut it = sets.into_iter();
        let mut first = it.next().ok_or(Error::EmptySamples)?;
        let mut acc_sum = first.diagnostics.map(|d| d.acceptance_rate * first.len() as f64);
        let mut ess = first.diagnostics.map(|d| d.ess);
        for s in it {
            if s.method != first.method {
                return Err(Error::InvalidParameter(
                    "cannot merge sample sets of different methods".into(),
                ));
            }
            if let (Some(a), Some(d)) = (acc_sum.as_mut(), s.diagnostics) {
                *a += d.acceptance_rate * s.len() as f64;
                *ess.as_mut().expect("paired") += d.ess;
            }
            first.samples.extend(s.samples);
        }
        if let (Some(d), Some(a), Some(e)) = (first.diagnostics.as_mut(), acc_sum, ess) {
            d.acceptance_rate = a / first.samples.len() as f64;
            d.ess = e;
        }
        Ok(first)
    }

    /// CSV with `#` metadata lines, a header of edge names, and one row per sample.
    pub fn to_csv(&self, g: &Graph) -> String {
        let mut out = String::new();
        let method = match self.method {
            SampleMethod::ExactStar(Parametrization::Half) => "exact_star_half",
            SampleMethod::ExactStar(Parametrization::Full) => "exact_star_full",
            SampleMethod::Mcmc => "mcmc",
        };
        let _ = writeln!(out, "# method={method}");
        let _ = writeln!(out, "# seed={} stream={}", self.seed.seed, self.seed.stream);
        if let Some(d) = &self.diagnostics {
            let _ = writeln!(
                out,
                "# acceptance={} ess={} burn_in={} thin={} step_scale={}",
                d.acceptance_rate, d.ess, d.burn_in, d.thin, d.step_scale
            );
        }
        let header: Vec<String> = g
            .edges()
            .iter()
            .map(|&(u, v)| format!("{}-{}", g.label(u), g.label(v)))
            .collect();
        let _ = writeln!(out, "{}", header.join(","));
        for x in &self.samples {
            let row: Vec<String> = x.iter().map(|v| format!("{v}")).collect();
            let _ = writeln!(out, "{}", row.join(","));
        }
        out
    }
}
