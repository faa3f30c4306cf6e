use crate::error::{Error, Result};
use crate::graph::{count_spanning_trees, for_each_proper_subset, Graph};
use crate::magic::{log_z, RootedParams};
use crate::numerics::log_sum_exp;
use crate::specfun::log_gamma_unchecked;
use serde::Serialize;

/// Constants of the small-edge, spectral-gap and root-mass tail bounds at
/// exponent `s`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TailConstants {
    pub edge: usize,
    pub s: f64,
    pub a_min: f64,
    /// `C_{h,s}` for every edge `h`.
    pub c_edges: Vec<f64>,
    pub c_es: f64,
    pub c_gap: f64,
    pub c_root: f64,
}

/// `C_{h,s}` for every edge, from one pass over the proper subsets.
pub fn edge_tail_constants(g: &Graph, p: &RootedParams, s: f64) -> Result<Vec<f64>> {
    let a = p.a();
    let a_min = a.iter().copied().fold(f64::INFINITY, f64::min);
    if !(s > 0.0 && s < 0.5 * a_min) {
        return Err(Error::InvalidParameter(format!("s = {s} outside (0, {})", 0.5 * a_min)));
    }
    let m = g.num_edges();
    let ln_delta0 = -(2.0 * m as f64).ln();
    let gap = 0.5 * a_min - s;
    let ln_trees = (count_spanning_trees(g)? as f64).ln();
    let b = p.half_weights(g);
    let mut terms: Vec<Vec<f64>> = vec![Vec::new(); m];
    for_each_proper_subset(g, a, &b, |st| {
        let k = st.subset.len() as f64;
        let t = log_gamma_unchecked(k + 1.0) + 0.5 * ln_trees + st.m_edge.ln() - st.b_out * ln_delta0 + gap * ln_delta0
            - k * gap.ln();
        for &e in &st.subset {
            terms[e].push(t);
        }
    })?;
    let lz = log_z(g, p);
    let head = (2.0 * m as f64).powf(s);
    Ok(terms
        .iter()
        .map(|t| {
            if t.is_empty() {
                head
            } else {
                head + (log_sum_exp(t) - lz).exp()
            }
        })
        .collect())
}

/// `C_{e,s}`, `C_gap = Σ_h C_{h,s}` and `C_root = 2^s min_{g∋v0} C_{g,s}`.
pub fn tail_constants(g: &Graph, p: &RootedParams, edge: usize, s: f64) -> Result<TailConstants> {
    if edge >= g.num_edges() {
        return Err(Error::InvalidParameter(format!("edge index {edge} out of range")));
    }
    let c_edges = edge_tail_constants(g, p, s)?;
    let c_gap = c_edges.iter().sum();
    let c_root = 2f64.powf(s)
        * g.incident(p.root)
            .iter()
            .map(|&h| c_edges[h])
            .fold(f64::INFINITY, f64::min);
    Ok(TailConstants {
        edge,
        s,
        a_min: p.a().iter().copied().fold(f64::INFINITY, f64::min),
        c_es: c_edges[edge],
        c_edges,
        c_gap,
        c_root,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum BoundVariant {
    Thresholded,
    Refined,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Epsilons {
    pub eps0: f64,
    pub eps1: f64,
    pub eps2: f64,
}

/// `C_{s/2} = (s/2)^{s/2} e^{−s/2}`.
fn moment_constant(s: f64) -> f64 {
    let h = 0.5 * s;
    (h * h.ln() - h).exp()
}

/// Upper bound on `E[1/(N_e(T) + γ)]`. The refined variant ignores `eps2`.
pub fn inverse_bound_eval(c: &TailConstants, gamma: f64, t: f64, eps: Epsilons, variant: BoundVariant) -> Result<f64> {
    let Epsilons { eps0, eps1, eps2 } = eps;
    if !(gamma > 0.0) || !(t >= 1.0) {
        return Err(Error::InvalidParameter(format!(
            "need gamma > 0 and T ≥ 1, got {gamma}, {t}"
        )));
    }
    if !(eps0 > 0.0 && eps0 < 0.5) || !(eps1 > 0.0 && eps1 <= 0.5) {
        return Err(Error::InvalidParameter(format!(
            "eps0 = {eps0}, eps1 = {eps1} out of range"
        )));
    }
    let s = c.s;
    match variant {
        BoundVariant::Thresholded => {
            if !(eps2 > 0.0 && eps2 < 1.0) {
                return Err(Error::InvalidParameter(format!("eps2 = {eps2} out of range")));
            }
            Ok(2.0 / (t * eps2)
                + (c.c_es * eps2.powf(s) + c.c_gap * (2.0 * eps1).powf(0.5 * s) + c.c_root * eps0.powf(s)) / gamma
                + 2.0 / gamma
                    * eps0.powf(-0.5)
                    * ((-eps1 * eps2 * eps2 * t / 32.0).exp() + (-eps2 * eps2 * t / 64.0).exp()))
        }
        BoundVariant::Refined => {
            if !(s > 1.0 && s < 0.5 * c.a_min) {
                return Err(Error::InvalidParameter(format!(
                    "refined bound needs 1 < s < {}",
                    0.5 * c.a_min
                )));
            }
            let cs = moment_constant(s);
            Ok(2.0 * c.c_es / t
                + 2f64.powf(0.5 * s) * c.c_gap * eps1.powf(0.5 * s) / gamma
                + c.c_root * eps0.powf(s) / gamma
                + 2.0 * 32f64.powf(0.5 * s) * cs * c.c_es / gamma * eps0.powf(-0.5) * (eps1 * t).powf(-0.5 * s)
                + 2.0 * 64f64.powf(0.5 * s) * cs * c.c_es / gamma * eps0.powf(-0.5) * t.powf(-0.5 * s))
        }
    }
}

/// Threshold `a̲ = 4 + 2√5` separating the two decay regimes.
pub fn refined_threshold() -> f64 {
    4.0 + 2.0 * 5f64.sqrt()
}

/// `ε0 = 1/T`, `ε1 = T^{−1/2+κ}`, `ε2 = T^{−1/4}` for the `T^{−r}` envelope.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ThresholdedSchedule {
    pub r: f64,
    pub s: f64,
    pub kappa: f64,
}

impl ThresholdedSchedule {
    /// Midpoints: `r = ½ min(a̲/8, 3/4)`, `s` halfway between `4r` and `a̲/2`,
    /// `κ` half its admissible upper limit.
    pub fn default_for(a_min: f64) -> Result<Self> {
        if !(a_min > 0.0) {
            return Err(Error::InvalidParameter(format!("a_min = {a_min} must be positive")));
        }
        let r = 0.5 * (a_min / 8.0).min(0.75);
        let s = 0.5 * (4.0 * r + 0.5 * a_min);
        Self::new(a_min, r, s, None)
    }

    pub fn new(a_min: f64, r: f64, s: f64, kappa: Option<f64>) -> Result<Self> {
        if !(r > 0.0 && r < (a_min / 8.0).min(0.75)) {
            return Err(Error::InvalidParameter(format!("r = {r} outside (0, min(a/8, 3/4))")));
        }
        if !(s > 4.0 * r && s < 0.5 * a_min) {
            return Err(Error::InvalidParameter(format!("s = {s} outside (4r, a/2)")));
        }
        let upper = 0.5f64.min(0.75 - r).min(2.0 / s * (0.25 * s - r));
        let kappa = kappa.unwrap_or(0.5 * upper);
        if !(kappa > 0.0 && kappa < upper) {
            return Err(Error::InvalidParameter(format!("kappa = {kappa} outside (0, {upper})")));
        }
        Ok(Self { r, s, kappa })
    }

    pub fn epsilons(&self, t: f64) -> Epsilons {
        Epsilons {
            eps0: 1.0 / t,
            eps1: t.powf(-0.5 + self.kappa),
            eps2: t.powf(-0.25),
        }
    }

    /// Horizon beyond which the thresholded bound is decreasing along this
    /// schedule: every power term decreases for all `T`, while
    /// `T^{1/2} e^{−T^κ/32}` decreases once `T^κ > 16/κ` and
    /// `T^{1/2} e^{−T^{1/2}/64}` once `T > 4096`.
    pub fn monotone_from(&self) -> f64 {
        ((16.0 / self.kappa).ln() / self.kappa).exp().max(4096.0)
    }
}

/// `ε0 = T^{−1/s}`, `ε1 = T^{−2/s}` for the `C/T` regime.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RefinedSchedule {
    pub s: f64,
}

impl RefinedSchedule {
    /// `s` at the midpoint of `(2 + √5, a̲/2)`.
    pub fn default_for(a_min: f64) -> Result<Self> {
        Self::new(a_min, 0.5 * (2.0 + 5f64.sqrt() + 0.5 * a_min))
    }

    pub fn new(a_min: f64, s: f64) -> Result<Self> {
        if !(a_min > refined_threshold()) {
            return Err(Error::InvalidParameter(format!("a_min = {a_min} must exceed 4 + 2√5")));
        }
        if !(s > 2.0 + 5f64.sqrt() && s < 0.5 * a_min) {
            return Err(Error::InvalidParameter(format!("s = {s} outside (2 + √5, a/2)")));
        }
        Ok(Self { s })
    }

    pub fn epsilons(&self, t: f64) -> Epsilons {
        Epsilons {
            eps0: t.powf(-1.0 / self.s),
            eps1: t.powf(-2.0 / self.s),
            eps2: 0.5,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures;

    #[test]
    fn first_summand_and_divergence() {
        let g = fixtures::triangle();
        let p = RootedParams::uniform(&g, 1.0).unwrap();
        let c = tail_constants(&g, &p, 0, 0.25).unwrap();
        assert!(c.c_es.is_finite() && c.c_es >= 6f64.powf(0.25));
        let near = tail_constants(&g, &p, 0, 0.5 - 1e-6).unwrap();
        assert!(near.c_es > 1e5);
        assert!(tail_constants(&g, &p, 0, 0.5).is_err());
        assert!(tail_constants(&g, &p, 0, 0.0).is_err());
    }

    #[test]
    fn aggregate_constants() {
        let g = fixtures::k4();
        let p = RootedParams::uniform(&g, 2.0).unwrap();
        let c = tail_constants(&g, &p, 3, 0.5).unwrap();
        assert!((c.c_gap - c.c_edges.iter().sum::<f64>()).abs() < 1e-12 * c.c_gap);
        let min_root = g
            .incident(0)
            .iter()
            .map(|&h| c.c_edges[h])
            .fold(f64::INFINITY, f64::min);
        assert!((c.c_root - 2f64.powf(0.5) * min_root).abs() < 1e-12 * c.c_root);
    }

    #[test]
    fn range_checks() {
        let g = fixtures::triangle();
        let p = RootedParams::uniform(&g, 1.0).unwrap();
        let c = tail_constants(&g, &p, 0, 0.25).unwrap();
        let ok = Epsilons {
            eps0: 0.1,
            eps1: 0.5,
            eps2: 0.5,
        };
        assert!(inverse_bound_eval(&c, 1.0, 10.0, ok, BoundVariant::Thresholded).is_ok());
        for bad in [
            Epsilons { eps0: 0.5, ..ok },
            Epsilons { eps1: 0.6, ..ok },
            Epsilons { eps2: 1.0, ..ok },
        ] {
            assert!(inverse_bound_eval(&c, 1.0, 10.0, bad, BoundVariant::Thresholded).is_err());
        }
        assert!(inverse_bound_eval(&c, 1.0, 10.0, ok, BoundVariant::Refined).is_err());
    }

    #[test]
    fn schedule_defaults_admissible() {
        for a in [0.5, 1.0, 3.0, 8.0, 20.0] {
            let sch = ThresholdedSchedule::default_for(a).unwrap();
            assert!(sch.kappa > 0.0);
        }
        assert!(RefinedSchedule::default_for(8.0).is_err());
        assert!(RefinedSchedule::default_for(9.0).is_ok());
    }
}
