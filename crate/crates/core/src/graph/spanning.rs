use super::Graph;
use crate::error::{Error, Result};

fn check_weights(g: &Graph, w: &[f64]) -> Result<()> {
    g.check_len(w.len())?;
    for (index, &value) in w.iter().enumerate() {
        if !(value > 0.0 && value.is_finite()) {
            return Err(Error::NonPositiveWeight { index, value });
        }
    }
    Ok(())
}

/// Weighted Laplacian with the row and column of vertex 0 removed.
fn reduced_laplacian(g: &Graph, w: &[f64]) -> Vec<Vec<f64>> {
    let n = g.num_vertices() - 1;
    let mut l = vec![vec![0.0; n]; n];
    for (e, &(u, v)) in g.edges().iter().enumerate() {
        let we = w[e];
        if u > 0 {
            l[u - 1][u - 1] += we;
        }
        if v > 0 {
            l[v - 1][v - 1] += we;
        }
        if u > 0 && v > 0 {
            l[u - 1][v - 1] -= we;
            l[v - 1][u - 1] -= we;
        }
    }
    l
}

/// `τ(w) = Σ_T Π_{e∈T} w_e`, by LU with partial pivoting of the reduced
/// Laplacian.
pub fn tree_polynomial(g: &Graph, w: &[f64]) -> Result<f64> {
    check_weights(g, w)?;
    let mut a = reduced_laplacian(g, w);
    let n = a.len();
    let mut det = 1.0;
    for k in 0..n {
        let p = (k..n)
            .max_by(|&i, &j| a[i][k].abs().total_cmp(&a[j][k].abs()))
            .expect("nonempty");
        if a[p][k] == 0.0 {
            return Err(Error::Numerical("singular reduced Laplacian".into()));
        }
        if p != k {
            a.swap(p, k);
            det = -det;
        }
        det *= a[k][k];
        for i in (k + 1)..n {
            let f = a[i][k] / a[k][k];
            for j in k..n {
                a[i][j] -= f * a[k][j];
            }
        }
    }
    Ok(det)
}

/// `log τ(w)` via Cholesky factorization of the reduced Laplacian.
pub fn log_tree_polynomial(g: &Graph, w: &[f64]) -> Result<f64> {
    check_weights(g, w)?;
    let a = reduced_laplacian(g, w);
    let n = a.len();
    let mut l = vec![vec![0.0; n]; n];
    let mut logdet = 0.0;
    for j in 0..n {
        let mut d = a[j][j];
        for k in 0..j {
            d -= l[j][k] * l[j][k];
        }
        if d <= 0.0 || !d.is_finite() {
            return Err(Error::Numerical("reduced Laplacian is not positive definite".into()));
        }
        let djj = d.sqrt();
        l[j][j] = djj;
        logdet += 2.0 * djj.ln();
        for i in (j + 1)..n {
            let mut s = a[i][j];
            for k in 0..j {
                s -= l[i][k] * l[j][k];
            }
            l[i][j] = s / djj;
        }
    }
    Ok(logdet)
}

/// Number of spanning trees, `τ(1)` rounded to an integer.
pub fn count_spanning_trees(g: &Graph) -> Result<u64> {
    let t = tree_polynomial(g, &vec![1.0; g.num_edges()])?;
    let r = t.round();
    if (t - r).abs() > 1e-6 * r.max(1.0) || r < 1.0 {
        return Err(Error::Numerical(format!("spanning-tree count {t} is not an integer")));
    }
    Ok(r as u64)
}
