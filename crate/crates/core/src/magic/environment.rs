use super::{log_z, RootedParams};
use crate::error::{domain, Error, Result};
use crate::graph::{log_tree_polynomial, Graph};
use crate::numerics::kahan_sum;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Gauge {
    /// Reference-edge conductance fixed to 1.
    Pinned,
    /// Conductances sum to 1.
    Simplex,
}

/// Positive edge conductances in a fixed gauge.
#[derive(Debug, Clone, PartialEq)]
pub struct Environment {
    gauge: Gauge,
    values: Vec<f64>,
}

fn check_positive(values: &[f64]) -> Result<()> {
    for (index, &value) in values.iter().enumerate() {
        if !(value > 0.0 && value.is_finite()) {
            return Err(Error::NonPositiveWeight { index, value });
        }
    }
    Ok(())
}

impl Environment {
    pub fn pinned(g: &Graph, values: Vec<f64>) -> Result<Self> {
        g.check_len(values.len())?;
        check_positive(&values)?;
        let r = values[g.reference_edge()];
        if (r - 1.0).abs() > 1e-12 {
            return Err(Error::Gauge(format!("reference edge carries {r}, expected 1")));
        }
        Ok(Self {
            gauge: Gauge::Pinned,
            values,
        })
    }

    pub fn simplex(values: Vec<f64>) -> Result<Self> {
        check_positive(&values)?;
        let s = kahan_sum(values.iter().copied());
        if (s - 1.0).abs() > 1e-12 {
            return Err(Error::Gauge(format!("simplex coordinates sum to {s}")));
        }
        if values.len() > 1 && values.iter().any(|&x| x >= 1.0) {
            return Err(domain("Environment::simplex", "coordinate on the simplex boundary"));
        }
        Ok(Self {
            gauge: Gauge::Simplex,
            values,
        })
    }

    /// Pins an arbitrary positive conductance vector by dividing by `w_{e0}`.
    pub fn pin(g: &Graph, raw: &[f64]) -> Result<Self> {
        g.check_len(raw.len())?;
        check_positive(raw)?;
        let r = raw[g.reference_edge()];
        let mut values: Vec<f64> = raw.iter().map(|x| x / r).collect();
        values[g.reference_edge()] = 1.0;
        Ok(Self {
            gauge: Gauge::Pinned,
            values,
        })
    }

    /// Projects an arbitrary positive conductance vector onto the simplex.
    pub fn normalize(raw: &[f64]) -> Result<Self> {
        check_positive(raw)?;
        let s = kahan_sum(raw.iter().copied());
        Ok(Self {
            gauge: Gauge::Simplex,
            values: raw.iter().map(|x| x / s).collect(),
        })
    }

    pub fn gauge(&self) -> Gauge {
        self.gauge
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn to_simplex(&self) -> Self {
        Self::normalize(&self.values).expect("positive")
    }

    pub fn to_pinned(&self, g: &Graph) -> Self {
        Self::pin(g, &self.values).expect("positive")
    }
}

/// `T_e(w) = log(w_e / √(w_u w_v))`; invariant under rescaling of `w`.
pub fn sufficient_statistics(g: &Graph, w: &[f64]) -> Vec<f64> {
    let wv = g.vertex_sums(w);
    g.edges()
        .iter()
        .enumerate()
        .map(|(e, &(u, v))| w[e].ln() - 0.5 * (wv[u].ln() + wv[v].ln()))
        .collect()
}

/// Log of the unnormalized magic density
/// `w_{v0}^{1/2} Π_e w_e^{a_e−1} / Π_v w_v^{(a_v+1)/2} · √τ(w)`,
/// homogeneous of degree `−|E|` in `w`.
pub fn log_unnormalized_density(g: &Graph, p: &RootedParams, w: &[f64]) -> Result<f64> {
    g.check_len(w.len())?;
    for &x in w {
        if !(x > 0.0 && x.is_finite()) {
            return Err(domain("log_density", format!("coordinate {x} outside the open domain")));
        }
    }
    let a = p.a();
    let wv = g.vertex_sums(w);
    let av = g.vertex_sums(a);
    let edge = kahan_sum(a.iter().zip(w).map(|(&ae, &we)| (ae - 1.0) * we.ln()));
    let vert = kahan_sum(av.iter().zip(&wv).map(|(&x, &y)| 0.5 * (x + 1.0) * y.ln()));
    Ok(0.5 * wv[p.root].ln() + edge - vert + 0.5 * log_tree_polynomial(g, w)?)
}

/// Log density of `μ_{v0,A}` on `{w_{e0} = 1}` with respect to `dw_{−e0}`.
pub fn log_density_pinned(g: &Graph, p: &RootedParams, w: &Environment) -> Result<f64> {
    if w.gauge != Gauge::Pinned {
        return Err(Error::Gauge("expected a pinned environment".into()));
    }
    Ok(log_unnormalized_density(g, p, &w.values)? - log_z(g, p))
}

/// Log density of the simplex image `X = w/Σw` with respect to Lebesgue
/// measure on any `|E| − 1` of the simplex coordinates.
///
/// The normalizer of the unnormalized density over the simplex is `Z_{v0,A}`
/// itself, so this differs from the pinned density at `w = x/x_{e0}` by
/// `|E|·log(Σw)`, the Jacobian of the gauge change.
pub fn log_density_simplex(g: &Graph, p: &RootedParams, x: &Environment) -> Result<f64> {
    if x.gauge != Gauge::Simplex {
        return Err(Error::Gauge("expected a simplex environment".into()));
    }
    Ok(log_unnormalized_density(g, p, &x.values)? - log_z(g, p))
}
