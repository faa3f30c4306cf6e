use crate::error::{Error, Result};
use crate::numerics::linear_fit;
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RateFit {
    pub slope: f64,
    pub intercept: f64,
    pub r2: f64,
}

/// Least-squares fit of `log value` against `log T`.
pub fn rate_fit(points: &[(f64, f64)]) -> Result<RateFit> {
    if points.len() < 4 {
        return Err(Error::InvalidParameter(format!(
            "need at least 4 points, got {}",
            points.len()
        )));
    }
    for &(t, v) in points {
        if !(t > 0.0 && v > 0.0 && t.is_finite() && v.is_finite()) {
            return Err(Error::InvalidParameter(format!("nonpositive point ({t}, {v})")));
        }
    }
    let x: Vec<f64> = points.iter().map(|p| p.0.ln()).collect();
    let y: Vec<f64> = points.iter().map(|p| p.1.ln()).collect();
    let (slope, intercept, r2) = linear_fit(&x, &y);
    Ok(RateFit { slope, intercept, r2 })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn power_law() {
        let pts: Vec<(f64, f64)> = (1..8)
            .map(|i| (10f64.powi(i), 3.0 * 10f64.powi(i).powf(-0.5)))
            .collect();
        let f = rate_fit(&pts).unwrap();
        assert!((f.slope + 0.5).abs() < 1e-12);
    }

    #[test]
    fn log_correction() {
        let pts: Vec<(f64, f64)> = [1e3, 3e3, 1e4, 3e4, 1e5]
            .iter()
            .map(|&t: &f64| (t, t.ln() / t))
            .collect();
        let f = rate_fit(&pts).unwrap();
        assert!(f.slope > -1.0 && f.slope < -0.8);
    }

    #[test]
    fn constant_and_errors() {
        let pts = [(1.0, 2.0), (2.0, 2.0), (4.0, 2.0), (8.0, 2.0)];
        assert!(rate_fit(&pts).unwrap().slope.abs() < 1e-15);
        assert!(rate_fit(&pts[..3]).is_err());
        assert!(rate_fit(&[(1.0, 2.0), (2.0, 0.0), (4.0, 2.0), (8.0, 2.0)]).is_err());
    }
}
