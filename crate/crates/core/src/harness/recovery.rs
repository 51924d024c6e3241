use serde::{Deserialize, Serialize};

use crate::algebra::{self, AlgebraDescriptor, Element};
use crate::cone::ConePoint;
use crate::error::{Error, Result};
use crate::par;
use crate::rng::derive_seed;
use crate::wishart::{
    digamma_cone, gamma_cone_pole, log_density, sample, trigamma_cone, WishartParams,
};
use crate::SCHEMA_VERSION;

/// Smallest sample accepted by [`parameter_recovery`].
pub const MIN_RECOVERY_N: usize = 1000;
/// Size of the reference sample used for the goodness-of-fit band.
pub const REFERENCE_N: usize = 20_000;
/// Tail probability on each side of the reference band.
pub const BAND_TAIL: f64 = 0.005;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GoodnessOfFit {
    /// Per-sample log-likelihood quantiles of the fitted model.
    pub band: (f64, f64),
    pub reference_n: usize,
    /// Fraction of samples (including those outside the cone) outside the band.
    pub outside_fraction: f64,
    pub threshold: f64,
    pub flagged: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RecoveryReport {
    pub schema_version: u32,
    pub descriptor: AlgebraDescriptor,
    pub n: usize,
    pub outside_cone: usize,
    pub shape: f64,
    pub scale: Element,
    pub mean_log_likelihood: f64,
    pub newton_iterations: usize,
    /// Absent for the Lorentz cone, which has no sampler.
    pub goodness_of_fit: Option<GoodnessOfFit>,
}

/// Root of `r log p − Σ ψ(p − (j−1)d/2) = s` for `p` above the pole, by Newton's
/// method kept inside a shrinking bracket.
pub fn solve_shape(s: f64, desc: &AlgebraDescriptor) -> Result<(f64, usize)> {
    if s.is_nan() || s <= 0.0 || !s.is_finite() {
        return Err(Error::NumericalFailure(format!(
            "log det of the mean minus mean log det is {s}; the sample is degenerate"
        )));
    }
    let r = desc.rank() as f64;
    let pole = gamma_cone_pole(desc);
    let g = |p: f64| r * p.ln() - digamma_cone(p, desc) - s;
    let dg = |p: f64| r / p - trigamma_cone(p, desc);
    // g decreases from +∞ at the pole to 0⁺ at infinity
    let mut lo = pole;
    let mut hi = pole + 1.0;
    while g(hi) > 0.0 {
        lo = hi;
        hi = pole + 2.0 * (hi - pole);
        if hi > 1e12 {
            return Err(Error::NumericalFailure("shape bracket diverged".into()));
        }
    }
    let mut p = 0.5 * (lo + hi);
    for it in 1..=200 {
        let gp = g(p);
        if gp > 0.0 {
            lo = p;
        } else {
            hi = p;
        }
        let step = gp / dg(p);
        let mut next = p - step;
        if !(next > lo && next < hi) {
            next = 0.5 * (lo + hi);
        }
        if (next - p).abs() <= 1e-14 * p || hi - lo <= 1e-14 * hi {
            return Ok((next, it));
        }
        p = next;
    }
    Err(Error::NumericalFailure(
        "shape iteration did not converge".into(),
    ))
}

fn quantile(sorted: &[f64], q: f64) -> f64 {
    let pos = q * (sorted.len() - 1) as f64;
    let (i, frac) = (pos.floor() as usize, pos.fract());
    if i + 1 < sorted.len() {
        sorted[i] * (1.0 - frac) + sorted[i + 1] * frac
    } else {
        sorted[i]
    }
}

/// Maximum-likelihood fit of `γ_{p,a}`. For fixed `p` the scale is `â = p·x̄⁻¹`;
/// substituting it leaves a concave profile in `p` whose stationarity condition is
/// solved by [`solve_shape`].
///
/// The fit is judged against a reference sample from the fitted model: the fraction
/// of data log-likelihoods outside its central `1 − 2·BAND_TAIL` band is compared with
/// a binomial allowance.
pub fn parameter_recovery(samples: &[Element], seed: u64) -> Result<RecoveryReport> {
    let n = samples.len();
    if n < MIN_RECOVERY_N {
        return Err(Error::InsufficientData(format!(
            "parameter recovery needs n >= {MIN_RECOVERY_N}, got {n}"
        )));
    }
    let desc = *samples[0].descriptor();
    if samples.iter().any(|s| s.descriptor() != &desc) {
        return Err(Error::InvalidInput("samples mix algebras".into()));
    }
    let log_dets: Vec<Option<f64>> = par::map_slice(samples, |x| algebra::log_det(x).ok());
    let inside: Vec<(&Element, f64)> = samples
        .iter()
        .zip(&log_dets)
        .filter_map(|(x, l)| l.map(|l| (x, l)))
        .collect();
    let outside_cone = n - inside.len();
    if inside.len() < desc.dim() + 1 {
        return Err(Error::InsufficientData(format!(
            "only {} samples lie in the cone",
            inside.len()
        )));
    }
    let m = inside.len() as f64;
    let mean = inside
        .iter()
        .fold(Element::zero(desc), |acc, (x, _)| &acc + x)
        * (1.0 / m);
    let mean_log_det = inside.iter().map(|(_, l)| l).sum::<f64>() / m;
    let (shape, newton_iterations) = solve_shape(algebra::log_det(&mean)? - mean_log_det, &desc)?;
    let scale = algebra::inverse(&mean)? * shape;
    let params = WishartParams::new(shape, ConePoint::new(scale.clone())?)?;
    let ll: Vec<f64> = samples.iter().map(|x| log_density(x, &params)).collect();
    let mean_log_likelihood = ll.iter().filter(|v| v.is_finite()).sum::<f64>() / m;

    let goodness_of_fit = if desc.is_matrix() {
        let reference = sample(&params, REFERENCE_N, derive_seed(seed, 0x9f))?.samples;
        let mut rl: Vec<f64> = par::map_slice(&reference, |x| log_density(x, &params));
        rl.sort_by(f64::total_cmp);
        let band = (quantile(&rl, BAND_TAIL), quantile(&rl, 1.0 - BAND_TAIL));
        let outside = ll
            .iter()
            .filter(|&&v| !(v >= band.0 && v <= band.1))
            .count();
        let q = 2.0 * BAND_TAIL;
        let sd = (q * (1.0 - q) * (1.0 / n as f64 + 1.0 / REFERENCE_N as f64)).sqrt();
        let threshold = q + 4.0 * sd;
        let outside_fraction = outside as f64 / n as f64;
        Some(GoodnessOfFit {
            band,
            reference_n: REFERENCE_N,
            outside_fraction,
            threshold,
            flagged: outside_fraction > threshold,
        })
    } else {
        None
    };

    Ok(RecoveryReport {
        schema_version: SCHEMA_VERSION,
        descriptor: desc,
        n,
        outside_cone,
        shape,
        scale,
        mean_log_likelihood,
        newton_iterations,
        goodness_of_fit,
    })
}
