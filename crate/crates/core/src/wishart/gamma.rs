//! Gamma function of a symmetric cone and its log-derivatives.
//!
//! `Γ_V(p) = (2π)^{(dim − r)/2} Π_{j=1}^{r} Γ(p − (j − 1)d/2)`, normalized for the
//! Lebesgue measure of the scalar product `tr(x ∘ y)`.

use statrs::function::gamma::{digamma, ln_gamma};

use crate::algebra::AlgebraDescriptor;
use crate::error::{Error, Result};

/// `(r − 1)d/2`; `Γ_V` is finite only for `p` strictly above it.
pub fn gamma_cone_pole(desc: &AlgebraDescriptor) -> f64 {
    (desc.rank() - 1) as f64 * desc.peirce() as f64 / 2.0
}

fn shifted_args(p: f64, desc: &AlgebraDescriptor) -> impl Iterator<Item = f64> {
    let half_d = desc.peirce() as f64 / 2.0;
    (0..desc.rank()).map(move |j| p - j as f64 * half_d)
}

/// `log Γ_V(p)`.
pub fn log_gamma_cone(p: f64, desc: &AlgebraDescriptor) -> Result<f64> {
    let pole = gamma_cone_pole(desc);
    if p.is_nan() || p <= pole {
        return Err(Error::DomainViolation(format!(
            "Γ_V(p) needs p > {pole}, got {p}"
        )));
    }
    let pref = (desc.dim() - desc.rank()) as f64 / 2.0 * (2.0 * std::f64::consts::PI).ln();
    Ok(pref + shifted_args(p, desc).map(ln_gamma).sum::<f64>())
}

/// `d/dp log Γ_V(p) = Σ ψ(p − (j−1)d/2)`.
pub fn digamma_cone(p: f64, desc: &AlgebraDescriptor) -> f64 {
    shifted_args(p, desc).map(digamma).sum()
}

/// `d²/dp² log Γ_V(p)`.
pub fn trigamma_cone(p: f64, desc: &AlgebraDescriptor) -> f64 {
    shifted_args(p, desc).map(trigamma).sum()
}

/// Trigamma via upward recurrence to `x ≥ 12` and the asymptotic series.
pub fn trigamma(mut x: f64) -> f64 {
    let mut acc = 0.0;
    while x < 12.0 {
        acc += 1.0 / (x * x);
        x += 1.0;
    }
    let x2 = 1.0 / (x * x);
    acc + 1.0 / x
        + x2 / 2.0
        + x2 / x * (1.0 / 6.0 - x2 * (1.0 / 30.0 - x2 * (1.0 / 42.0 - x2 / 30.0)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_one_is_scalar_gamma() {
        let d = AlgebraDescriptor::real_sym(1).unwrap();
        assert!(log_gamma_cone(1.0, &d).unwrap().abs() < 1e-14);
        assert!((log_gamma_cone(5.0, &d).unwrap() - 24f64.ln()).abs() < 1e-13);
        assert!(log_gamma_cone(0.0, &d).is_err());
    }

    #[test]
    fn pole_location() {
        let d = AlgebraDescriptor::real_sym(3).unwrap();
        assert!(log_gamma_cone(1.0, &d).is_err());
        assert!(log_gamma_cone(1.0001, &d).is_ok());
        let q = AlgebraDescriptor::quat_herm(3).unwrap();
        assert_eq!(gamma_cone_pole(&q), 4.0);
    }

    #[test]
    fn trigamma_values() {
        // ψ'(1) = π²/6, ψ'(1/2) = π²/2
        let pi2 = std::f64::consts::PI.powi(2);
        assert!((trigamma(1.0) - pi2 / 6.0).abs() < 1e-12);
        assert!((trigamma(0.5) - pi2 / 2.0).abs() < 1e-12);
        // derivative check against digamma
        let h = 1e-5;
        for x in [0.7, 2.3, 11.0] {
            let fd = (digamma(x + h) - digamma(x - h)) / (2.0 * h);
            assert!((trigamma(x) - fd).abs() < 1e-7);
        }
    }
}
