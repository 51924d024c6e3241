//! Simple Euclidean Jordan algebras and their operator calculus.

mod descriptor;
mod eigen;
mod element;
mod functions;
mod operator;
pub mod quat;
pub mod random;
mod spectral;

pub use descriptor::{AlgebraDescriptor, AlgebraKind};
pub use element::Element;
pub use functions::{elt_exp, elt_inv_sqrt, elt_log, elt_pow, elt_sqrt, inverse, log_series};
pub use operator::{
    from_basis_coords, lmap, orthonormal_basis, quad_rep, to_basis_coords, LinearOperator,
};
pub use quat::{Quat, QuatMatrix};
pub use random::random_idempotent_system;
pub use spectral::{det, log_det, spectral, SpectralDecomposition};

pub(crate) use spectral::eigenvalues;

use crate::error::Result;

/// `x ∘ y`.
pub fn jordan_product(x: &Element, y: &Element) -> Result<Element> {
    x.jordan(y)
}

/// Jordan trace `Σ λᵢ`.
pub fn trace(x: &Element) -> f64 {
    x.trace()
}
