//! Numerical toolkit for Euclidean Jordan algebras and their symmetric cones:
//! operator calculus, the symmetric-cone Wishart family, the quotient map
//! `ψ(x, y) = (P((x+y)^{-1/2})x, x+y)`, closed-form Olkin–Baker solutions,
//! trace-form (Gleason) fitting and Monte Carlo verification of the
//! Lukacs–Olkin–Rubin independence property.

pub mod algebra;
pub mod cli;
pub mod cone;
pub mod error;
pub mod funceq;
pub mod gleason;
pub mod harness;
pub mod par;
pub mod rng;
pub mod verify;
pub mod wishart;

pub use algebra::{AlgebraDescriptor, AlgebraKind, Element};
pub use error::{Error, Result};

/// Version tag carried by every JSON report and sample header.
pub const SCHEMA_VERSION: u32 = 1;
