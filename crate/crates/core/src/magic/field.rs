use super::Environment;
use crate::error::{Error, Result};
use crate::graph::Graph;

/// Normalized field `β̃_{ij} = 2 w_{ij} / √(w_i w_j)`.
///
/// A field is in the image of the map iff the symmetric vertex matrix with
/// off-diagonal entries `β̃_{ij}` has spectral radius 2.
#[derive(Debug, Clone, PartialEq)]
pub struct NormalizedField {
    pub values: Vec<f64>,
}

impl NormalizedField {
    pub fn new(values: Vec<f64>) -> Self {
        Self { values }
    }

    fn matrix_apply(&self, g: &Graph, x: &[f64], shift: f64) -> Vec<f64> {
        let mut y: Vec<f64> = x.iter().map(|v| shift * v).collect();
        for (e, &(u, v)) in g.edges().iter().enumerate() {
            y[u] += self.values[e] * x[v];
            y[v] += self.values[e] * x[u];
        }
        y
    }

    /// Perron eigenvalue and unit eigenvector by shifted power iteration
    /// from the all-ones vector.
    pub fn perron(&self, g: &Graph) -> Result<(f64, Vec<f64>)> {
        g.check_len(self.values.len())?;
        if self.values.iter().any(|&b| !(b > 0.0 && b.is_finite())) {
            return Err(Error::InvalidParameter("field entries must be positive".into()));
        }
        let n = g.num_vertices();
        let shift = 1.0;
        let norm = |x: &[f64]| x.iter().map(|v| v * v).sum::<f64>().sqrt();
        let mut x = vec![1.0 / (n as f64).sqrt(); n];
        let mut lambda = 0.0;
        for _ in 0..100_000 {
            let y = self.matrix_apply(g, &x, shift);
            let ny = norm(&y);
            let next: Vec<f64> = y.iter().map(|v| v / ny).collect();
            lambda = self
                .matrix_apply(g, &next, 0.0)
                .iter()
                .zip(&next)
                .map(|(a, b)| a * b)
                .sum();
            let resid = norm(
                &self
                    .matrix_apply(g, &next, 0.0)
                    .iter()
                    .zip(&next)
                    .map(|(a, b)| a - lambda * b)
                    .collect::<Vec<_>>(),
            );
            x = next;
            if resid <= 1e-12 * lambda.abs().max(1.0) {
                return Ok((lambda, x));
            }
        }
        Err(Error::Numerical(format!(
            "power iteration did not converge (λ ≈ {lambda})"
        )))
    }
}

pub fn normalized_field(g: &Graph, w: &Environment) -> NormalizedField {
    let w = w.values();
    let wv = g.vertex_sums(w);
    NormalizedField::new(
        g.edges()
            .iter()
            .enumerate()
            .map(|(e, &(u, v))| 2.0 * w[e] / (wv[u] * wv[v]).sqrt())
            .collect(),
    )
}

/// Inverse of [`normalized_field`]: `w_{ij} = ½ β̃_{ij} u_i u_j` with `u` the
/// Perron vector, rescaled so that `w_{e0} = 1`.
pub fn reconstruct_environment(field: &NormalizedField, g: &Graph) -> Result<Environment> {
    let (rho, u) = field.perron(g)?;
    if (rho - 2.0).abs() > 1e-6 {
        return Err(Error::NotInImage(rho));
    }
    let raw: Vec<f64> = g
        .edges()
        .iter()
        .enumerate()
        .map(|(e, &(i, j))| 0.5 * field.values[e] * u[i] * u[j])
        .collect();
    Environment::pin(g, &raw)
}
