//! Cone membership, the domain `D = {u : u, e − u ∈ V}`, the quotient bijection
//! `ψ(x, y) = (P((x+y)^{-1/2})x, x+y)` and its inverse.

use serde::{Deserialize, Serialize};

use crate::algebra::{self, Element};
use crate::error::{ensure_same, Error, Result};

/// Absolute eigenvalue margin used by [`in_cone`] and [`in_domain_d`].
pub const CONE_TOL: f64 = 1e-12;

/// An element certified to lie in the open cone `V`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Element", into = "Element")]
pub struct ConePoint {
    value: Element,
    min_eig: f64,
}

impl TryFrom<Element> for ConePoint {
    type Error = Error;
    fn try_from(x: Element) -> Result<Self> {
        ConePoint::new(x)
    }
}

impl From<ConePoint> for Element {
    fn from(p: ConePoint) -> Element {
        p.value
    }
}

impl ConePoint {
    pub fn new(value: Element) -> Result<Self> {
        let m = in_cone(&value)?;
        if !m.inside {
            return Err(Error::OutsideCone { min_eig: m.margin });
        }
        Ok(Self {
            value,
            min_eig: m.margin,
        })
    }

    pub(crate) fn certified(value: Element, min_eig: f64) -> Self {
        debug_assert!(min_eig > 0.0);
        Self { value, min_eig }
    }

    pub fn identity(desc: algebra::AlgebraDescriptor) -> Self {
        Self {
            value: Element::identity(desc),
            min_eig: 1.0,
        }
    }

    pub fn value(&self) -> &Element {
        &self.value
    }

    pub fn certified_min_eig(&self) -> f64 {
        self.min_eig
    }

    pub fn into_element(self) -> Element {
        self.value
    }
}

impl AsRef<Element> for ConePoint {
    fn as_ref(&self) -> &Element {
        &self.value
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Membership {
    pub inside: bool,
    /// Smallest eigenvalue.
    pub margin: f64,
}

pub fn in_cone(x: &Element) -> Result<Membership> {
    let ev = algebra::eigenvalues(x)?;
    let margin = *ev.last().expect("rank >= 1");
    Ok(Membership {
        inside: margin > CONE_TOL,
        margin,
    })
}

/// True iff the spectrum of `u` lies in `(0, 1)`.
pub fn in_domain_d(u: &Element) -> Result<bool> {
    let ev = algebra::eigenvalues(u)?;
    Ok(ev[ev.len() - 1] > CONE_TOL && ev[0] < 1.0 - CONE_TOL)
}

/// `(u, v)` with `u ∈ D` and `v ∈ V`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuotientPair {
    u: Element,
    v: ConePoint,
}

impl QuotientPair {
    pub fn new(u: Element, v: ConePoint) -> Result<Self> {
        ensure_same(u.descriptor(), v.value().descriptor())?;
        if !in_domain_d(&u)? {
            return Err(Error::DomainViolation("u is not in D".into()));
        }
        Ok(Self { u, v })
    }

    pub fn u(&self) -> &Element {
        &self.u
    }

    pub fn v(&self) -> &ConePoint {
        &self.v
    }
}

/// `ψ(x, y) = (P((x+y)^{-1/2}) x, x + y)`.
pub fn psi(x: &ConePoint, y: &ConePoint) -> Result<QuotientPair> {
    let (u, v) = psi_raw(x.value(), y.value())?;
    let ev = algebra::eigenvalues(&u)?;
    if !(ev[ev.len() - 1] > 0.0 && ev[0] < 1.0) {
        return Err(Error::NumericalFailure(format!(
            "quotient left D: spectrum [{}, {}]",
            ev[ev.len() - 1],
            ev[0]
        )));
    }
    Ok(QuotientPair { u, v })
}

/// `ψ` without the membership assertion on `u`; used by the Monte Carlo sweeps.
pub(crate) fn psi_raw(x: &Element, y: &Element) -> Result<(Element, ConePoint)> {
    ensure_same(x.descriptor(), y.descriptor())?;
    let v = x + y;
    let v_min = *algebra::eigenvalues(&v)?.last().expect("rank >= 1");
    if v_min <= 0.0 {
        return Err(Error::OutsideCone { min_eig: v_min });
    }
    let w = algebra::elt_inv_sqrt(&v)?;
    let u = w.quad_apply_unchecked(x);
    Ok((u, ConePoint::certified(v, v_min)))
}

/// `ψ⁻¹(u, v) = (P(v^{1/2}) u, P(v^{1/2})(e − u))`.
pub fn psi_inverse(pair: &QuotientPair) -> Result<(ConePoint, ConePoint)> {
    let (x, y) = psi_inverse_raw(pair.u(), pair.v().value())?;
    Ok((ConePoint::new(x)?, ConePoint::new(y)?))
}

pub(crate) fn psi_inverse_raw(u: &Element, v: &Element) -> Result<(Element, Element)> {
    ensure_same(u.descriptor(), v.descriptor())?;
    let s = algebra::elt_sqrt(v)?;
    let x = s.quad_apply_unchecked(u);
    let e_minus_u = &Element::identity(*u.descriptor()) - u;
    let y = s.quad_apply_unchecked(&e_minus_u);
    Ok((x, y))
}

/// Checked `ψ⁻¹` on bare elements: `u` must lie in `D`, `v` in `V`.
pub fn psi_inverse_elements(u: &Element, v: &Element) -> Result<(ConePoint, ConePoint)> {
    let pair = QuotientPair::new(u.clone(), ConePoint::new(v.clone())?)?;
    psi_inverse(&pair)
}

/// Jacobian of `ψ⁻¹` at `v`: `Det P(v^{1/2}) = det(v)^{dim/r}`.
pub fn jacobian_psi_inverse(v: &ConePoint) -> Result<f64> {
    let desc = v.value().descriptor();
    Ok((desc.dim_over_rank() * algebra::log_det(v.value())?).exp())
}

/// The same Jacobian from the materialized `dim × dim` operator `P(v^{1/2})`.
pub fn jacobian_psi_inverse_operator(v: &ConePoint) -> Result<f64> {
    let s = algebra::elt_sqrt(v.value())?;
    Ok(algebra::quad_rep(&s).det())
}
