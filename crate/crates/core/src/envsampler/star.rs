use super::{SampleMethod, SampleSet};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::magic::RootedParams;
use crate::walkers::RngSeed;
use rand_distr::{Distribution, Gamma};
use serde::{Deserialize, Serialize};

/// Dirichlet parameter convention on a star: `α_e = a_e/2` (`Half`, the law
/// the simplex density reduces to) or `α_e = a_e` (`Full`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Parametrization {
    #[default]
    Half,
    Full,
}

impl Parametrization {
    pub fn alpha(self, a: f64) -> f64 {
        match self {
            Parametrization::Half => 0.5 * a,
            Parametrization::Full => a,
        }
    }
}

/// Exact Dirichlet draws of the normalized conductances of a star rooted at
/// its center, via normalized Gamma variates.
pub fn sample_env_star(
    g: &Graph,
    p: &RootedParams,
    n: usize,
    seed: RngSeed,
    parametrization: Parametrization,
) -> Result<SampleSet> {
    if !g.with_root(p.root)?.is_star_at_root() {
        return Err(Error::NotAStar);
    }
    let gammas = p
        .a()
        .iter()
        .map(|&a| Gamma::new(parametrization.alpha(a), 1.0))
        .collect::<std::result::Result<Vec<_>, _>>()
        .map_err(|e| Error::InvalidParameter(e.to_string()))?;
    let mut rng = seed.rng();
    let mut samples = Vec::with_capacity(n);
    while samples.len() < n {
        let y: Vec<f64> = gammas.iter().map(|d| d.sample(&mut rng)).collect();
        let s: f64 = y.iter().sum();
        if y.iter().any(|&v| v <= 0.0) || !s.is_finite() {
            continue;
        }
        samples.push(y.iter().map(|v| v / s).collect());
    }
    Ok(SampleSet {
        samples,
        method: SampleMethod::ExactStar(parametrization),
        diagnostics: None,
        seed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures;

    #[test]
    fn rejects_non_star() {
        let g = fixtures::triangle();
        let p = RootedParams::uniform(&g, 1.0).unwrap();
        assert_eq!(
            sample_env_star(&g, &p, 10, RngSeed::new(0, 0), Parametrization::Half).unwrap_err(),
            Error::NotAStar
        );
        let s = fixtures::star(3);
        let leaf = RootedParams::new(&s, 1, crate::graph::EdgeWeights::constant(3, 1.0).unwrap()).unwrap();
        assert!(sample_env_star(&s, &leaf, 10, RngSeed::new(0, 0), Parametrization::Half).is_err());
    }

    #[test]
    fn deterministic_and_on_simplex() {
        let g = fixtures::star(3);
        let p = RootedParams::uniform(&g, 2.0).unwrap();
        let a = sample_env_star(&g, &p, 100, RngSeed::new(4, 1), Parametrization::Half).unwrap();
        let b = sample_env_star(&g, &p, 100, RngSeed::new(4, 1), Parametrization::Half).unwrap();
        assert_eq!(a, b);
        for x in &a.samples {
            assert!((x.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        }
    }
}
