//! The symmetric-cone Wishart family `γ_{p,a}`.
//!
//! Laplace transform `det(e + t a⁻¹)^{-p}`; for `p > dim/r − 1` the law has density
//! `det(a)^p / Γ_V(p) · det(x)^{p − dim/r} · exp(−⟨a, x⟩)` on the cone.

mod gamma;
mod sampler;

pub use gamma::{digamma_cone, gamma_cone_pole, log_gamma_cone, trigamma, trigamma_cone};
pub use sampler::{read_csv, sample, sample_standard, sample_with, SampleBatch};

use serde::{Deserialize, Serialize};

use crate::algebra::{self, AlgebraDescriptor, Element};
use crate::cone::{in_cone, ConePoint};
use crate::error::{ensure_same, Error, Result};

/// Shape `p` and scale `a` of `γ_{p,a}`, restricted to the absolutely continuous
/// regime `p > dim/r − 1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawParams", into = "RawParams")]
pub struct WishartParams {
    shape: f64,
    scale: ConePoint,
    log_det_scale: f64,
    log_gamma: f64,
}

#[derive(Serialize, Deserialize)]
struct RawParams {
    shape: f64,
    scale: ConePoint,
}

impl TryFrom<RawParams> for WishartParams {
    type Error = Error;
    fn try_from(raw: RawParams) -> Result<Self> {
        WishartParams::new(raw.shape, raw.scale)
    }
}

impl From<WishartParams> for RawParams {
    fn from(p: WishartParams) -> Self {
        RawParams {
            shape: p.shape,
            scale: p.scale,
        }
    }
}

impl WishartParams {
    pub fn new(shape: f64, scale: ConePoint) -> Result<Self> {
        let desc = *scale.value().descriptor();
        let threshold = desc.dim_over_rank() - 1.0;
        if !shape.is_finite() || shape <= threshold {
            return Err(Error::DomainViolation(format!(
                "shape {shape} is not above dim/r - 1 = {threshold}"
            )));
        }
        let log_det_scale = algebra::log_det(scale.value())?;
        let log_gamma = log_gamma_cone(shape, &desc)?;
        Ok(Self {
            shape,
            scale,
            log_det_scale,
            log_gamma,
        })
    }

    pub fn standard(shape: f64, desc: AlgebraDescriptor) -> Result<Self> {
        Self::new(shape, ConePoint::identity(desc))
    }

    pub fn shape(&self) -> f64 {
        self.shape
    }

    pub fn scale(&self) -> &ConePoint {
        &self.scale
    }

    pub fn descriptor(&self) -> &AlgebraDescriptor {
        self.scale.value().descriptor()
    }

    pub fn log_det_scale(&self) -> f64 {
        self.log_det_scale
    }

    /// `log Γ_V(p)`.
    pub fn log_gamma(&self) -> f64 {
        self.log_gamma
    }

    /// `p log det a − log Γ_V(p)`, the log normalizing constant.
    pub fn log_normalizer(&self) -> f64 {
        self.shape * self.log_det_scale - self.log_gamma
    }
}

/// Log-density of `γ_{p,a}` at `x`; `−∞` outside the cone.
///
/// # Panics
/// If `x` and the parameters live in different algebras.
pub fn log_density(x: &Element, params: &WishartParams) -> f64 {
    let desc = params.descriptor();
    assert_eq!(x.descriptor(), desc, "descriptor mismatch");
    let log_det_x = match algebra::log_det(x) {
        Ok(v) => v,
        Err(_) => return f64::NEG_INFINITY,
    };
    log_density_from_stats(log_det_x, params.scale().value().inner(x), params)
}

/// Log-density from the sufficient statistics `log det x` and `⟨a, x⟩`.
pub(crate) fn log_density_from_stats(log_det_x: f64, ax: f64, params: &WishartParams) -> f64 {
    params.log_normalizer() + (params.shape - params.descriptor().dim_over_rank()) * log_det_x - ax
}

/// `det(e + t a⁻¹)^{-p}`, evaluated as `(det(a + t)/det a)^{-p}`; requires `t + a ∈ V`.
pub fn laplace_transform(t: &Element, params: &WishartParams) -> Result<f64> {
    ensure_same(t.descriptor(), params.descriptor())?;
    let shifted = params.scale().value() + t;
    let m = in_cone(&shifted)?;
    if !m.inside {
        return Err(Error::DomainViolation(format!(
            "t + a is not in the cone (smallest eigenvalue {})",
            m.margin
        )));
    }
    let log_ratio = algebra::log_det(&shifted)? - params.log_det_scale;
    Ok((-params.shape * log_ratio).exp())
}

/// `P(a^{-1/2}) x`; carries `γ_{p,e}` to `γ_{p,a}`.
pub fn scale_transform(x: &Element, a: &ConePoint) -> Result<Element> {
    ensure_same(x.descriptor(), a.value().descriptor())?;
    let w = algebra::elt_inv_sqrt(a.value())?;
    Ok(w.quad_apply_unchecked(x))
}
