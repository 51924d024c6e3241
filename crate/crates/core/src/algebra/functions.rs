//! Spectral functions of an element: inverse, log, exp, square roots, the
//! logarithm power series.

use super::element::Element;
use super::spectral::{self, Frame};
use crate::error::{Error, Result};

/// Relative size below which an eigenvalue counts as zero for inversion.
const SINGULAR_TOL: f64 = 1e-13;

fn min_max(fr: &Frame) -> (f64, f64) {
    match fr {
        Frame::Lorentz { values, .. } => (values[1], values[0]),
        Frame::Matrix { eigen } => (*eigen.values.last().unwrap(), eigen.values[0]),
    }
}

fn min_abs(fr: &Frame) -> (f64, f64) {
    let vals: Vec<f64> = match fr {
        Frame::Lorentz { values, .. } => values.to_vec(),
        Frame::Matrix { eigen } => eigen.values.clone(),
    };
    let lo = vals.iter().fold(f64::INFINITY, |m, v| m.min(v.abs()));
    let hi = vals.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    (lo, hi)
}

fn positive_frame(x: &Element) -> Result<Frame> {
    let fr = spectral::frame(x)?;
    let (lo, _) = min_max(&fr);
    if lo <= 0.0 {
        return Err(Error::OutsideCone { min_eig: lo });
    }
    Ok(fr)
}

/// Jordan inverse `Σ λᵢ⁻¹ cᵢ`.
pub fn inverse(x: &Element) -> Result<Element> {
    let fr = spectral::frame(x)?;
    let (lo, hi) = min_abs(&fr);
    if hi == 0.0 || lo <= SINGULAR_TOL * hi {
        return Err(Error::SingularElement { min_abs_eig: lo });
    }
    Ok(spectral::map_frame(x, &fr, |l| 1.0 / l))
}

pub fn elt_log(x: &Element) -> Result<Element> {
    let fr = positive_frame(x)?;
    Ok(spectral::map_frame(x, &fr, f64::ln))
}

pub fn elt_exp(x: &Element) -> Result<Element> {
    spectral::spectral_map(x, f64::exp)
}

pub fn elt_sqrt(x: &Element) -> Result<Element> {
    let fr = positive_frame(x)?;
    Ok(spectral::map_frame(x, &fr, f64::sqrt))
}

/// `x^{-1/2}` for `x` in the cone.
pub fn elt_inv_sqrt(x: &Element) -> Result<Element> {
    let fr = positive_frame(x)?;
    Ok(spectral::map_frame(x, &fr, |l| 1.0 / l.sqrt()))
}

/// `x^s` for `x` in the cone and real `s`.
pub fn elt_pow(x: &Element, s: f64) -> Result<Element> {
    let fr = positive_frame(x)?;
    Ok(spectral::map_frame(x, &fr, |l| l.powf(s)))
}

/// `log(e + a) ≈ Σ_{n=1}^{terms} (−1)^{n+1} aⁿ / n`, valid for `⟨a, a⟩ < 1`.
pub fn log_series(a: &Element, terms: usize) -> Result<Element> {
    let norm_sq = a.inner(a);
    if norm_sq >= 1.0 {
        return Err(Error::DivergentSeries { norm_sq });
    }
    let mut acc = Element::zero(*a.descriptor());
    let mut power = a.clone();
    for n in 1..=terms {
        let sign = if n % 2 == 1 { 1.0 } else { -1.0 };
        acc = &acc + &(&power * (sign / n as f64));
        power = power.jordan_unchecked(a);
    }
    Ok(acc)
}
