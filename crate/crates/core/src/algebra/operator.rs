use nalgebra::DMatrix;

use super::descriptor::{AlgebraDescriptor, AlgebraKind};
use super::element::Element;
use crate::error::{ensure_same, Error, Result};

/// Coordinates of `x` in the orthonormal basis returned by [`orthonormal_basis`].
///
/// Matrix kinds: diagonal entries, then for each `i < j` and each component `s`
/// the value `√2·xᵢⱼ[s]`. Lorentz: `√2·xₖ`.
pub fn to_basis_coords(x: &Element) -> Vec<f64> {
    let desc = x.descriptor();
    let c = x.coords();
    match desc.kind() {
        AlgebraKind::Lorentz => c.iter().map(|v| v * std::f64::consts::SQRT_2).collect(),
        _ => {
            let (r, d) = (desc.rank(), desc.components());
            let mut out = Vec::with_capacity(desc.dim());
            for i in 0..r {
                out.push(c[(i * r + i) * d]);
            }
            for i in 0..r {
                for j in i + 1..r {
                    for s in 0..d {
                        out.push(std::f64::consts::SQRT_2 * c[(i * r + j) * d + s]);
                    }
                }
            }
            out
        }
    }
}

pub fn from_basis_coords(desc: AlgebraDescriptor, v: &[f64]) -> Result<Element> {
    if v.len() != desc.dim() {
        return Err(Error::InvalidInput(format!(
            "{desc} has dimension {}, got {} basis coordinates",
            desc.dim(),
            v.len()
        )));
    }
    let h = std::f64::consts::FRAC_1_SQRT_2;
    Ok(match desc.kind() {
        AlgebraKind::Lorentz => Element::from_raw(desc, v.iter().map(|x| x * h).collect()),
        _ => {
            let (r, d) = (desc.rank(), desc.components());
            let mut c = vec![0.0; desc.storage_len()];
            for i in 0..r {
                c[(i * r + i) * d] = v[i];
            }
            let mut k = r;
            for i in 0..r {
                for j in i + 1..r {
                    for s in 0..d {
                        let val = v[k] * h;
                        c[(i * r + j) * d + s] = val;
                        // conjugation flips the imaginary components
                        c[(j * r + i) * d + s] = if s == 0 { val } else { -val };
                        k += 1;
                    }
                }
            }
            Element::from_raw(desc, c)
        }
    })
}

/// Orthonormal basis of the algebra with respect to `⟨x, y⟩ = tr(x ∘ y)`.
pub fn orthonormal_basis(desc: AlgebraDescriptor) -> Vec<Element> {
    (0..desc.dim())
        .map(|k| {
            let mut v = vec![0.0; desc.dim()];
            v[k] = 1.0;
            from_basis_coords(desc, &v).expect("length matches")
        })
        .collect()
}

/// A linear map of the algebra, materialized as a `dim × dim` real matrix acting on
/// orthonormal-basis coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearOperator {
    descriptor: AlgebraDescriptor,
    matrix: DMatrix<f64>,
}

impl LinearOperator {
    pub fn from_fn(desc: AlgebraDescriptor, f: impl Fn(&Element) -> Element) -> Self {
        let basis = orthonormal_basis(desc);
        let n = desc.dim();
        let mut matrix = DMatrix::zeros(n, n);
        for (j, b) in basis.iter().enumerate() {
            let col = to_basis_coords(&f(b));
            for (i, v) in col.into_iter().enumerate() {
                matrix[(i, j)] = v;
            }
        }
        Self {
            descriptor: desc,
            matrix,
        }
    }

    pub fn identity(desc: AlgebraDescriptor) -> Self {
        Self {
            descriptor: desc,
            matrix: DMatrix::identity(desc.dim(), desc.dim()),
        }
    }

    pub fn descriptor(&self) -> &AlgebraDescriptor {
        &self.descriptor
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn apply(&self, x: &Element) -> Result<Element> {
        ensure_same(&self.descriptor, x.descriptor())?;
        let v = nalgebra::DVector::from_vec(to_basis_coords(x));
        from_basis_coords(self.descriptor, (&self.matrix * v).as_slice())
    }

    pub fn compose(&self, other: &LinearOperator) -> Result<LinearOperator> {
        ensure_same(&self.descriptor, &other.descriptor)?;
        Ok(Self {
            descriptor: self.descriptor,
            matrix: &self.matrix * &other.matrix,
        })
    }

    pub fn scale(&self, s: f64) -> LinearOperator {
        Self {
            descriptor: self.descriptor,
            matrix: &self.matrix * s,
        }
    }

    pub fn sub(&self, other: &LinearOperator) -> Result<LinearOperator> {
        ensure_same(&self.descriptor, &other.descriptor)?;
        Ok(Self {
            descriptor: self.descriptor,
            matrix: &self.matrix - &other.matrix,
        })
    }

    /// Determinant in the space of endomorphisms.
    pub fn det(&self) -> f64 {
        self.matrix.clone().lu().determinant()
    }

    pub fn inverse(&self) -> Result<LinearOperator> {
        let inv = self
            .matrix
            .clone()
            .try_inverse()
            .ok_or(Error::SingularElement { min_abs_eig: 0.0 })?;
        Ok(Self {
            descriptor: self.descriptor,
            matrix: inv,
        })
    }

    /// `max |Aᵢⱼ − Aⱼᵢ|`; zero for self-adjoint maps (the basis is orthonormal).
    pub fn adjointness_defect(&self) -> f64 {
        (&self.matrix - self.matrix.transpose()).amax()
    }

    /// Frobenius distance between two operators.
    pub fn distance(&self, other: &LinearOperator) -> f64 {
        (&self.matrix - &other.matrix).norm()
    }

    pub fn norm(&self) -> f64 {
        self.matrix.norm()
    }
}

/// `L(x): y ↦ x ∘ y`.
pub fn lmap(x: &Element) -> LinearOperator {
    LinearOperator::from_fn(*x.descriptor(), |y| x.jordan_unchecked(y))
}

/// Quadratic representation `P(x) = 2L(x)² − L(x²)`.
pub fn quad_rep(x: &Element) -> LinearOperator {
    let l = lmap(x);
    let l2 = lmap(&x.square());
    LinearOperator {
        descriptor: *x.descriptor(),
        matrix: &l.matrix * &l.matrix * 2.0 - l2.matrix,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn descs() -> Vec<AlgebraDescriptor> {
        vec![
            AlgebraDescriptor::real_sym(3).unwrap(),
            AlgebraDescriptor::complex_herm(3).unwrap(),
            AlgebraDescriptor::quat_herm(2).unwrap(),
            AlgebraDescriptor::lorentz(3).unwrap(),
        ]
    }

    #[test]
    fn basis_is_orthonormal() {
        for d in descs() {
            let b = orthonormal_basis(d);
            assert_eq!(b.len(), d.dim());
            for (i, x) in b.iter().enumerate() {
                for (j, y) in b.iter().enumerate() {
                    let expect = if i == j { 1.0 } else { 0.0 };
                    assert!((x.inner(y) - expect).abs() < 1e-15, "{d} {i} {j}");
                }
                // every basis element is a valid (Hermitian) element
                assert!(Element::new(d, x.coords().to_vec()).is_ok());
            }
        }
    }

    #[test]
    fn identity_maps() {
        for d in descs() {
            let e = Element::identity(d);
            let id = LinearOperator::identity(d);
            assert!(lmap(&e).distance(&id) < 1e-14);
            assert!(quad_rep(&e).distance(&id) < 1e-14);
        }
    }

    #[test]
    fn basis_coords_round_trip() {
        for d in descs() {
            let v: Vec<f64> = (0..d.dim()).map(|k| (k as f64 * 0.37).sin()).collect();
            let x = from_basis_coords(d, &v).unwrap();
            let w = to_basis_coords(&x);
            assert!(v.iter().zip(&w).all(|(a, b)| (a - b).abs() < 1e-15));
        }
    }
}
