use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::{Complex, DMatrix};
use serde::{Deserialize, Serialize};

use super::descriptor::{AlgebraDescriptor, AlgebraKind};
use super::quat::{Quat, QuatMatrix};
use crate::error::{ensure_same, Error, Result};

pub(crate) type C64 = Complex<f64>;
pub(crate) type CMat = DMatrix<C64>;

const HERMITIAN_TOL: f64 = 1e-12;

/// A point of a simple Euclidean Jordan algebra.
///
/// Coordinate layout:
/// * matrix kinds store all `r × r` entries row-major, each entry as its
///   real components over the base field (1 for real, `1,i` for complex,
///   `1,i,j,k` for quaternions);
/// * Lorentz stores `(x₀, x₁, …, xₙ)`.
///
/// The scalar product is `⟨x, y⟩ = tr(x ∘ y)`, which is `Re Trace(x·y)` on the matrix
/// kinds and `2 Σ xᵢyᵢ` on the Lorentz algebra.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawElement")]
pub struct Element {
    descriptor: AlgebraDescriptor,
    coords: Vec<f64>,
}

#[derive(Deserialize)]
struct RawElement {
    descriptor: AlgebraDescriptor,
    coords: Vec<f64>,
}

impl TryFrom<RawElement> for Element {
    type Error = Error;
    fn try_from(raw: RawElement) -> Result<Self> {
        Element::new(raw.descriptor, raw.coords)
    }
}

impl Element {
    /// Validates the coordinate length and, for matrix kinds, that the stored
    /// matrix is Hermitian within `1e-12` (relative to the largest entry).
    pub fn new(descriptor: AlgebraDescriptor, coords: Vec<f64>) -> Result<Self> {
        if coords.len() != descriptor.storage_len() {
            return Err(Error::InvalidInput(format!(
                "{descriptor} needs {} coordinates, got {}",
                descriptor.storage_len(),
                coords.len()
            )));
        }
        if coords.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidInput("non-finite coordinate".into()));
        }
        let x = Self { descriptor, coords };
        if descriptor.is_matrix() {
            let scale = x.coords.iter().fold(1.0f64, |m, c| m.max(c.abs()));
            let defect = x.hermitian_defect();
            if defect > HERMITIAN_TOL * scale {
                return Err(Error::InvalidInput(format!(
                    "matrix is not Hermitian (defect {defect:e})"
                )));
            }
        }
        Ok(x)
    }

    pub(crate) fn from_raw(descriptor: AlgebraDescriptor, coords: Vec<f64>) -> Self {
        debug_assert_eq!(coords.len(), descriptor.storage_len());
        Self { descriptor, coords }
    }

    pub fn zero(descriptor: AlgebraDescriptor) -> Self {
        Self::from_raw(descriptor, vec![0.0; descriptor.storage_len()])
    }

    /// The unit element `e`.
    pub fn identity(descriptor: AlgebraDescriptor) -> Self {
        let mut x = Self::zero(descriptor);
        match descriptor.kind() {
            AlgebraKind::Lorentz => x.coords[0] = 1.0,
            _ => {
                let (r, d) = (descriptor.rank(), descriptor.components());
                for i in 0..r {
                    x.coords[(i * r + i) * d] = 1.0;
                }
            }
        }
        x
    }

    /// Diagonal matrix with the given real diagonal (matrix kinds only).
    pub fn from_real_diagonal(descriptor: AlgebraDescriptor, diag: &[f64]) -> Result<Self> {
        if !descriptor.is_matrix() || diag.len() != descriptor.rank() {
            return Err(Error::InvalidInput(format!(
                "real diagonal of length {} does not fit {descriptor}",
                diag.len()
            )));
        }
        let (r, d) = (descriptor.rank(), descriptor.components());
        let mut x = Self::zero(descriptor);
        for (i, &v) in diag.iter().enumerate() {
            x.coords[(i * r + i) * d] = v;
        }
        Ok(x)
    }

    /// Matrix kinds from a row-major real `r × r` symmetric matrix.
    pub fn from_real_matrix(descriptor: AlgebraDescriptor, entries: &[f64]) -> Result<Self> {
        if !descriptor.is_matrix() || entries.len() != descriptor.rank().pow(2) {
            return Err(Error::InvalidInput(
                "real matrix does not fit descriptor".into(),
            ));
        }
        let d = descriptor.components();
        let mut coords = vec![0.0; descriptor.storage_len()];
        for (idx, &v) in entries.iter().enumerate() {
            coords[idx * d] = v;
        }
        Self::new(descriptor, coords)
    }

    pub fn descriptor(&self) -> &AlgebraDescriptor {
        &self.descriptor
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<f64> {
        self.coords
    }

    /// Entry `(i, j)` of a matrix-kind element as a quaternion.
    pub fn entry(&self, i: usize, j: usize) -> Quat {
        let (r, d) = (self.descriptor.rank(), self.descriptor.components());
        let base = (i * r + j) * d;
        Quat::from_components(&self.coords[base..base + d])
    }

    pub fn to_quat_matrix(&self) -> Result<QuatMatrix> {
        if !self.descriptor.is_matrix() {
            return Err(Error::InvalidInput(
                "Lorentz elements are not matrices".into(),
            ));
        }
        let r = self.descriptor.rank();
        let mut m = QuatMatrix::zeros(r);
        for i in 0..r {
            for j in 0..r {
                m.set(i, j, self.entry(i, j));
            }
        }
        Ok(m)
    }

    /// Takes the Hermitian part of `m` and drops the components the kind does not carry.
    pub fn from_quat_matrix(descriptor: AlgebraDescriptor, m: &QuatMatrix) -> Result<Self> {
        let r = descriptor.rank();
        if !descriptor.is_matrix() || m.size() != r {
            return Err(Error::InvalidInput(
                "quaternion matrix does not fit descriptor".into(),
            ));
        }
        let d = descriptor.components();
        let mut coords = vec![0.0; descriptor.storage_len()];
        for i in 0..r {
            for j in 0..r {
                let h = (m.get(i, j) + m.get(j, i).conj()).scale(0.5);
                for c in 0..d {
                    coords[(i * r + j) * d + c] = h.component(c);
                }
            }
        }
        Ok(Self::from_raw(descriptor, coords))
    }

    fn hermitian_defect(&self) -> f64 {
        let r = self.descriptor.rank();
        let mut defect: f64 = 0.0;
        for i in 0..r {
            for j in i..r {
                let a = self.entry(i, j);
                let b = self.entry(j, i).conj();
                defect = defect.max((a - b).norm_sqr().sqrt());
            }
        }
        defect
    }

    /// Complex matrix form: the matrix itself for real and complex kinds, the
    /// symplectic embedding `A + Bj ↦ [[A, B], [-B̄, Ā]]` for quaternions.
    pub(crate) fn to_cmat(&self) -> CMat {
        let r = self.descriptor.rank();
        let c = &self.coords;
        match self.descriptor.kind() {
            AlgebraKind::RealSym => CMat::from_fn(r, r, |i, j| C64::new(c[i * r + j], 0.0)),
            AlgebraKind::ComplexHerm => CMat::from_fn(r, r, |i, j| {
                C64::new(c[(i * r + j) * 2], c[(i * r + j) * 2 + 1])
            }),
            AlgebraKind::QuatHerm => {
                let mut m = CMat::zeros(2 * r, 2 * r);
                for i in 0..r {
                    for j in 0..r {
                        let b = (i * r + j) * 4;
                        let a = C64::new(c[b], c[b + 1]);
                        let bb = C64::new(c[b + 2], c[b + 3]);
                        m[(i, j)] = a;
                        m[(i, j + r)] = bb;
                        m[(i + r, j)] = -bb.conj();
                        m[(i + r, j + r)] = a.conj();
                    }
                }
                m
            }
            AlgebraKind::Lorentz => unreachable!("Lorentz elements have no matrix form"),
        }
    }

    /// Inverse of [`Element::to_cmat`]; symmetrizes away roundoff.
    pub(crate) fn from_cmat(descriptor: AlgebraDescriptor, m: &CMat) -> Self {
        let r = descriptor.rank();
        let herm = |i: usize, j: usize| (m[(i, j)] + m[(j, i)].conj()) * 0.5;
        let mut coords = vec![0.0; descriptor.storage_len()];
        match descriptor.kind() {
            AlgebraKind::RealSym => {
                for i in 0..r {
                    for j in 0..r {
                        coords[i * r + j] = herm(i, j).re;
                    }
                }
            }
            AlgebraKind::ComplexHerm => {
                for i in 0..r {
                    for j in 0..r {
                        let h = herm(i, j);
                        coords[(i * r + j) * 2] = h.re;
                        coords[(i * r + j) * 2 + 1] = h.im;
                    }
                }
            }
            AlgebraKind::QuatHerm => {
                for i in 0..r {
                    for j in 0..r {
                        let a = (herm(i, j) + herm(i + r, j + r).conj()) * 0.5;
                        let b = (herm(i, j + r) - herm(i + r, j).conj()) * 0.5;
                        let base = (i * r + j) * 4;
                        coords[base] = a.re;
                        coords[base + 1] = a.im;
                        coords[base + 2] = b.re;
                        coords[base + 3] = b.im;
                    }
                }
            }
            AlgebraKind::Lorentz => unreachable!("Lorentz elements have no matrix form"),
        }
        Self::from_raw(descriptor, coords)
    }

    /// Jordan product `x ∘ y`.
    pub fn jordan(&self, other: &Element) -> Result<Element> {
        ensure_same(&self.descriptor, &other.descriptor)?;
        Ok(self.jordan_unchecked(other))
    }

    pub(crate) fn jordan_unchecked(&self, other: &Element) -> Element {
        match self.descriptor.kind() {
            AlgebraKind::Lorentz => {
                let (x, y) = (&self.coords, &other.coords);
                let mut out = vec![0.0; x.len()];
                out[0] = x.iter().zip(y).map(|(a, b)| a * b).sum();
                for i in 1..x.len() {
                    out[i] = x[0] * y[i] + y[0] * x[i];
                }
                Element::from_raw(self.descriptor, out)
            }
            _ => {
                let (a, b) = (self.to_cmat(), other.to_cmat());
                let m = (&a * &b + &b * &a) * C64::new(0.5, 0.0);
                Element::from_cmat(self.descriptor, &m)
            }
        }
    }

    pub fn square(&self) -> Element {
        self.jordan_unchecked(self)
    }

    /// Jordan power `xⁿ` (power associativity makes the bracketing irrelevant).
    pub fn powi(&self, n: u32) -> Element {
        let mut acc = Element::identity(self.descriptor);
        for _ in 0..n {
            acc = acc.jordan_unchecked(self);
        }
        acc
    }

    /// `P(x) y`; the sandwich `x·y·x` on matrix kinds, `2x∘(x∘y) − x²∘y` on Lorentz.
    pub fn quad_apply(&self, y: &Element) -> Result<Element> {
        ensure_same(&self.descriptor, &y.descriptor)?;
        Ok(self.quad_apply_unchecked(y))
    }

    pub(crate) fn quad_apply_unchecked(&self, y: &Element) -> Element {
        match self.descriptor.kind() {
            AlgebraKind::Lorentz => {
                let xy = self.jordan_unchecked(y);
                let left = self.jordan_unchecked(&xy) * 2.0;
                &left - &self.square().jordan_unchecked(y)
            }
            _ => {
                let (a, b) = (self.to_cmat(), y.to_cmat());
                Element::from_cmat(self.descriptor, &(&a * &b * &a))
            }
        }
    }

    /// `⟨x, y⟩ = tr(x ∘ y)`.
    pub fn inner(&self, other: &Element) -> f64 {
        assert_same(&self.descriptor, &other.descriptor);
        let dot: f64 = self
            .coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| a * b)
            .sum();
        match self.descriptor.kind() {
            AlgebraKind::Lorentz => 2.0 * dot,
            _ => dot,
        }
    }

    pub fn norm(&self) -> f64 {
        self.inner(self).sqrt()
    }

    /// Jordan trace `Σ λᵢ`, computed without diagonalizing.
    pub fn trace(&self) -> f64 {
        match self.descriptor.kind() {
            AlgebraKind::Lorentz => 2.0 * self.coords[0],
            _ => {
                let (r, d) = (self.descriptor.rank(), self.descriptor.components());
                (0..r).map(|i| self.coords[(i * r + i) * d]).sum()
            }
        }
    }

    /// Largest absolute coordinate difference.
    pub fn max_abs_diff(&self, other: &Element) -> f64 {
        assert_same(&self.descriptor, &other.descriptor);
        self.coords
            .iter()
            .zip(&other.coords)
            .fold(0.0, |m, (a, b)| m.max((a - b).abs()))
    }

    /// `‖x − y‖` in the scalar-product norm.
    pub fn distance(&self, other: &Element) -> f64 {
        (self - other).norm()
    }

    /// `x + s·e`.
    pub fn shift(&self, s: f64) -> Element {
        self + &(Element::identity(self.descriptor) * s)
    }
}

fn assert_same(a: &AlgebraDescriptor, b: &AlgebraDescriptor) {
    assert!(a == b, "descriptor mismatch: {a} vs {b}");
}

fn zip_with(a: &Element, b: &Element, f: impl Fn(f64, f64) -> f64) -> Element {
    assert_same(&a.descriptor, &b.descriptor);
    let coords = a
        .coords
        .iter()
        .zip(&b.coords)
        .map(|(x, y)| f(*x, *y))
        .collect();
    Element::from_raw(a.descriptor, coords)
}

/// Panics on descriptor mismatch, like shape mismatches in array libraries.
impl Add for &Element {
    type Output = Element;
    fn add(self, rhs: &Element) -> Element {
        zip_with(self, rhs, |x, y| x + y)
    }
}

impl Sub for &Element {
    type Output = Element;
    fn sub(self, rhs: &Element) -> Element {
        zip_with(self, rhs, |x, y| x - y)
    }
}

impl Mul<f64> for &Element {
    type Output = Element;
    fn mul(self, s: f64) -> Element {
        Element::from_raw(self.descriptor, self.coords.iter().map(|c| c * s).collect())
    }
}

impl Mul<f64> for Element {
    type Output = Element;
    fn mul(mut self, s: f64) -> Element {
        self.coords.iter_mut().for_each(|c| *c *= s);
        self
    }
}

impl Neg for &Element {
    type Output = Element;
    fn neg(self) -> Element {
        self * -1.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn real3() -> AlgebraDescriptor {
        AlgebraDescriptor::real_sym(3).unwrap()
    }

    #[test]
    fn rejects_non_hermitian_and_bad_length() {
        let d = AlgebraDescriptor::real_sym(2).unwrap();
        assert!(Element::new(d, vec![1.0, 2.0, 3.0, 4.0]).is_err());
        assert!(Element::new(d, vec![1.0, 2.0, 2.0]).is_err());
        assert!(Element::new(d, vec![1.0, 2.0, 2.0, 4.0]).is_ok());
        let c = AlgebraDescriptor::complex_herm(1).unwrap();
        assert!(Element::new(c, vec![1.0, 0.5]).is_err());
    }

    #[test]
    fn diagonal_product() {
        let d = AlgebraDescriptor::real_sym(2).unwrap();
        let x = Element::from_real_diagonal(d, &[1.0, 2.0]).unwrap();
        let y = Element::from_real_diagonal(d, &[3.0, 4.0]).unwrap();
        let z = x.jordan(&y).unwrap();
        assert_eq!(z, Element::from_real_diagonal(d, &[3.0, 8.0]).unwrap());
    }

    #[test]
    fn lorentz_identity_is_neutral() {
        let d = AlgebraDescriptor::lorentz(2).unwrap();
        let e = Element::identity(d);
        let y = Element::new(d, vec![0.3, -1.2, 2.5]).unwrap();
        assert_eq!(e.jordan(&y).unwrap(), y);
        assert_eq!(e.coords(), &[1.0, 0.0, 0.0]);
    }

    #[test]
    fn mismatch_is_an_error() {
        let a = Element::identity(real3());
        let b = Element::identity(AlgebraDescriptor::complex_herm(3).unwrap());
        assert!(matches!(
            a.jordan(&b),
            Err(Error::DescriptorMismatch { .. })
        ));
    }

    #[test]
    fn trace_and_inner_of_identity() {
        for d in [
            real3(),
            AlgebraDescriptor::complex_herm(4).unwrap(),
            AlgebraDescriptor::quat_herm(3).unwrap(),
            AlgebraDescriptor::lorentz(3).unwrap(),
        ] {
            let e = Element::identity(d);
            assert_eq!(e.trace(), d.rank() as f64);
            assert_eq!(e.inner(&e), d.rank() as f64);
        }
    }

    #[test]
    fn quaternion_embedding_round_trip() {
        let d = AlgebraDescriptor::quat_herm(2).unwrap();
        let mut m = QuatMatrix::zeros(2);
        m.set(0, 0, Quat::real(1.5));
        m.set(1, 1, Quat::real(-0.5));
        let q = Quat::new(0.2, 0.3, -0.7, 1.1);
        m.set(0, 1, q);
        m.set(1, 0, q.conj());
        let x = Element::from_quat_matrix(d, &m).unwrap();
        let back = Element::from_cmat(d, &x.to_cmat());
        assert!(x.max_abs_diff(&back) < 1e-15);
        // Jordan trace is half the trace of the embedding.
        let tr: f64 = x.to_cmat().diagonal().iter().map(|z| z.re).sum();
        assert!((x.trace() - 0.5 * tr).abs() < 1e-15);
    }

    #[test]
    fn serde_validates() {
        let x = Element::identity(real3());
        let s = serde_json::to_string(&x).unwrap();
        assert_eq!(serde_json::from_str::<Element>(&s).unwrap(), x);
        let bad = s.replace("1.0,0.0,0.0,0.0", "1.0,5.0,0.0,0.0");
        assert!(serde_json::from_str::<Element>(&bad).is_err());
    }
}
