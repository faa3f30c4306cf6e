//! Special functions on the positive reals: `log Γ`, digamma `Ψ`, trigamma `Ψ₁`,
//! the Gamma-KL primitive `Λ(p, q) = log Γ(q) − log Γ(p) − (q − p) Ψ(p)`,
//! the log multivariate beta, and the binomial inverse moment
//! `g_T(x) = E[1/(Bin(T, x) + γ)]`.
//!
//! The checked entry points return [`Error::Domain`] for arguments outside the
//! positive reals. Crate-internal callers that have already validated their
//! inputs use the unchecked `*_unchecked` variants.

use crate::error::{domain, Result};
use crate::numerics::{kahan_sum, log_sum_exp, GaussLegendre};
use std::sync::OnceLock;

const LANCZOS_G: f64 = 10.900511;
const LANCZOS_DK: [f64; 11] = [
    2.485_740_891_387_535_6e-5,
    1.051_423_785_817_219_7,
    -3.456_870_972_220_162_5,
    4.512_277_094_668_948,
    -2.982_852_253_235_766_4,
    1.056_397_115_771_267,
    -1.954_287_731_916_458_7e-1,
    1.709_705_434_044_412e-2,
    -5.719_261_174_043_057_7e-4,
    4.633_994_733_599_056e-6,
    -2.719_949_084_886_077_2e-9,
];
/// `log(2·sqrt(e/π))`
const LN_2_SQRT_E_OVER_PI: f64 = 0.620_782_237_635_245_2;

fn check_positive(func: &'static str, x: f64) -> Result<()> {
    if x > 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(domain(func, format!("argument must be positive and finite, got {x}")))
    }
}

/// `log Γ(x)` for `x > 0`.
pub fn log_gamma(x: f64) -> Result<f64> {
    check_positive("log_gamma", x)?;
    Ok(log_gamma_unchecked(x))
}

pub fn log_gamma_unchecked(x: f64) -> f64 {
    if x < 0.5 {
        return log_gamma_unchecked(x + 1.0) - x.ln();
    }
    let mut s = LANCZOS_DK[0];
    for (k, dk) in LANCZOS_DK.iter().enumerate().skip(1) {
        s += dk / (x + k as f64 - 1.0);
    }
    s.ln() + LN_2_SQRT_E_OVER_PI + (x - 0.5) * ((x - 0.5 + LANCZOS_G) / std::f64::consts::E).ln()
}

/// Digamma `Ψ(x) = d/dx log Γ(x)` for `x > 0`.
pub fn digamma(x: f64) -> Result<f64> {
    check_positive("digamma", x)?;
    Ok(digamma_unchecked(x))
}

pub fn digamma_unchecked(mut x: f64) -> f64 {
    let mut acc = 0.0;
    while x < 10.0 {
        acc -= 1.0 / x;
        x += 1.0;
    }
    let z = 1.0 / (x * x);
    // Σ B_{2k}/(2k) z^k, k = 1..7
    let series = z
        * (1.0 / 12.0
            - z * (1.0 / 120.0
                - z * (1.0 / 252.0
                    - z * (1.0 / 240.0 - z * (1.0 / 132.0 - z * (691.0 / 32760.0 - z * (1.0 / 12.0)))))));
    acc + x.ln() - 0.5 / x - series
}

/// Trigamma `Ψ₁(x) = Ψ'(x)` for `x > 0`.
pub fn trigamma(x: f64) -> Result<f64> {
    check_positive("trigamma", x)?;
    Ok(trigamma_unchecked(x))
}

pub fn trigamma_unchecked(mut x: f64) -> f64 {
    let mut acc = 0.0;
    while x < 10.0 {
        acc += 1.0 / (x * x);
        x += 1.0;
    }
    let z = 1.0 / (x * x);
    // Σ B_{2k} z^k, k = 1..7
    let series = z
        * (1.0 / 6.0
            - z * (1.0 / 30.0
                - z * (1.0 / 42.0 - z * (1.0 / 30.0 - z * (5.0 / 66.0 - z * (691.0 / 2730.0 - z * (7.0 / 6.0)))))));
    acc + 1.0 / x + 0.5 * z + series / x
}

fn remainder_rule() -> &'static GaussLegendre {
    static RULE: OnceLock<GaussLegendre> = OnceLock::new();
    RULE.get_or_init(|| GaussLegendre::new(24))
}

/// `Λ(p, q) = log Γ(q) − log Γ(p) − (q − p) Ψ(p)`, the Bregman divergence of
/// `log Γ`, which equals `KL(Gamma(p, 1) ‖ Gamma(q, 1))`.
pub fn lambda_kl(p: f64, q: f64) -> Result<f64> {
    check_positive("lambda_kl", p)?;
    check_positive("lambda_kl", q)?;
    Ok(lambda_kl_unchecked(p, q))
}

pub fn lambda_kl_unchecked(p: f64, q: f64) -> f64 {
    let d = q - p;
    if d == 0.0 {
        return 0.0;
    }
    let v = if d.abs() <= 0.25 * p.min(q) {
        // Taylor remainder form; avoids cancellation when q is close to p.
        d * d * remainder_rule().integrate(0.0, 1.0, |t| (1.0 - t) * trigamma_unchecked(p + t * d))
    } else {
        log_gamma_unchecked(q) - log_gamma_unchecked(p) - d * digamma_unchecked(p)
    };
    v.max(0.0)
}

/// `log B(α) = Σ log Γ(α_i) − log Γ(Σ α_i)`.
pub fn log_multivariate_beta(alpha: &[f64]) -> Result<f64> {
    if alpha.is_empty() {
        return Err(domain("log_multivariate_beta", "empty parameter vector"));
    }
    for &a in alpha {
        check_positive("log_multivariate_beta", a)?;
    }
    let total = kahan_sum(alpha.iter().copied());
    Ok(kahan_sum(alpha.iter().map(|&a| log_gamma_unchecked(a))) - log_gamma_unchecked(total))
}

/// `log C(n, k)`.
pub fn log_binomial(n: u64, k: u64) -> f64 {
    debug_assert!(k <= n);
    if k == 0 || k == n {
        return 0.0;
    }
    log_gamma_unchecked(n as f64 + 1.0)
        - log_gamma_unchecked(k as f64 + 1.0)
        - log_gamma_unchecked((n - k) as f64 + 1.0)
}

/// `g_T(x) = Σ_k C(T,k) x^k (1−x)^{T−k} / (k + γ)`, summed from log-domain
/// pmf terms.
pub fn binomial_inverse_moment(t: u64, x: f64, gamma: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&x) {
        return Err(domain(
            "binomial_inverse_moment",
            format!("x must lie in [0, 1], got {x}"),
        ));
    }
    check_positive("binomial_inverse_moment", gamma)?;
    if t == 0 || x == 0.0 {
        return Ok(1.0 / gamma);
    }
    if x == 1.0 {
        return Ok(1.0 / (t as f64 + gamma));
    }
    let (lx, l1x) = (x.ln(), (-x).ln_1p());
    let terms: Vec<f64> = (0..=t)
        .map(|k| log_binomial(t, k) + k as f64 * lx + (t - k) as f64 * l1x - (k as f64 + gamma).ln())
        .collect();
    Ok(log_sum_exp(&terms).exp())
}

/// `c_γ = max{1, 1/γ}`, the constant of the binomial inverse-moment bounds.
pub fn inverse_moment_constant(gamma: f64) -> f64 {
    1f64.max(1.0 / gamma)
}

#[cfg(test)]
mod tests {
    use super::*;

    const EULER: f64 = 0.577_215_664_901_532_9;

    #[test]
    fn log_gamma_special_values() {
        assert!(log_gamma(1.0).unwrap().abs() < 1e-15);
        assert!(log_gamma(2.0).unwrap().abs() < 1e-15);
        let half = 0.5 * std::f64::consts::PI.ln();
        assert!((log_gamma(0.5).unwrap() - half).abs() < 1e-14);
        // log 10! = 15.104412573075516
        assert!((log_gamma(11.0).unwrap() - 15.104_412_573_075_516).abs() < 1e-13);
        assert!(log_gamma(0.0).is_err());
        assert!(log_gamma(-1.0).is_err());
    }

    #[test]
    fn log_gamma_tiny_argument() {
        // Γ(x) ≈ 1/x − γ for small x
        let x = 1e-6;
        let expect = (1.0 / x - EULER).ln();
        assert!((log_gamma(x).unwrap() - expect).abs() < 1e-10);
    }

    #[test]
    fn digamma_special_values() {
        assert!((digamma(1.0).unwrap() + EULER).abs() < 1e-14);
        let v = -EULER - 2.0 * 2f64.ln();
        assert!((digamma(0.5).unwrap() - v).abs() < 1e-14);
        assert!(digamma(0.0).is_err());
    }

    #[test]
    fn trigamma_special_values() {
        let pi2 = std::f64::consts::PI.powi(2);
        assert!((trigamma(1.0).unwrap() - pi2 / 6.0).abs() < 1e-13);
        assert!((trigamma(0.5).unwrap() - pi2 / 2.0).abs() < 1e-13);
    }

    #[test]
    fn lambda_values() {
        assert_eq!(lambda_kl(2.3, 2.3).unwrap(), 0.0);
        assert!((lambda_kl(1.0, 2.0).unwrap() - EULER).abs() < 1e-14);
        let v = 1.5f64.ln() - digamma(1.5).unwrap();
        assert!((lambda_kl(1.5, 2.5).unwrap() - v).abs() < 1e-14);
        assert!((v - 0.368_975_0).abs() < 5e-7);
    }

    #[test]
    fn lambda_small_difference_is_quadratic() {
        let p = 3.0;
        let d = 1e-6;
        let expect = 0.5 * d * d * trigamma(p).unwrap();
        assert!((lambda_kl(p, p + d).unwrap() / expect - 1.0).abs() < 1e-5);
    }

    #[test]
    fn inverse_moment_cases() {
        assert_eq!(binomial_inverse_moment(0, 0.3, 2.0).unwrap(), 0.5);
        assert!((binomial_inverse_moment(7, 1.0, 0.5).unwrap() - 1.0 / 7.5).abs() < 1e-15);
        // 6-term sum: (1/32)(1 + 5/2 + 10/3 + 10/4 + 5/5 + 1/6) = 21/64
        assert!((binomial_inverse_moment(5, 0.5, 1.0).unwrap() - 21.0 / 64.0).abs() < 1e-14);
        assert!(binomial_inverse_moment(5, 1.5, 1.0).is_err());
    }

    #[test]
    fn multivariate_beta_values() {
        assert!(log_multivariate_beta(&[1.0, 1.0]).unwrap().abs() < 1e-15);
        assert!((log_multivariate_beta(&[1.0, 1.0, 1.0]).unwrap() + 2f64.ln()).abs() < 1e-14);
        let lp = std::f64::consts::PI.ln();
        assert!((log_multivariate_beta(&[0.5, 0.5]).unwrap() - lp).abs() < 1e-14);
    }
}
