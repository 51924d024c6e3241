use serde::{Deserialize, Serialize};

use super::descriptor::AlgebraKind;
use super::eigen::{hermitian_eigen, Eigen};
use super::element::{CMat, Element, C64};
use crate::error::{Error, Result};

/// Quaternionic eigenvalue pairs must agree to this (relative) tolerance.
const PAIRING_TOL: f64 = 1e-8;

/// `x = Σ λᵢ cᵢ` with `λ` descending and `cᵢ` a complete system of primitive
/// orthogonal idempotents.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralDecomposition {
    pub eigenvalues: Vec<f64>,
    pub idempotents: Vec<Element>,
}

impl SpectralDecomposition {
    pub fn reconstruct(&self) -> Element {
        let mut acc = Element::zero(*self.idempotents[0].descriptor());
        for (l, c) in self.eigenvalues.iter().zip(&self.idempotents) {
            acc = &acc + &(c * *l);
        }
        acc
    }

    pub fn min_eigenvalue(&self) -> f64 {
        *self.eigenvalues.last().expect("rank >= 1")
    }

    pub fn max_eigenvalue(&self) -> f64 {
        self.eigenvalues[0]
    }
}

/// Eigen-data of an element, kept in whatever form the kind makes cheapest.
pub(crate) enum Frame {
    Matrix {
        eigen: Eigen,
    },
    Lorentz {
        values: [f64; 2],
        direction: Vec<f64>,
    },
}

pub(crate) fn frame(x: &Element) -> Result<Frame> {
    match x.descriptor().kind() {
        AlgebraKind::Lorentz => {
            let c = x.coords();
            let nrm = c[1..].iter().map(|v| v * v).sum::<f64>().sqrt();
            let direction = if nrm == 0.0 {
                let mut u = vec![0.0; c.len() - 1];
                u[0] = 1.0;
                u
            } else {
                c[1..].iter().map(|v| v / nrm).collect()
            };
            Ok(Frame::Lorentz {
                values: [c[0] + nrm, c[0] - nrm],
                direction,
            })
        }
        _ => Ok(Frame::Matrix {
            eigen: hermitian_eigen(&x.to_cmat())?,
        }),
    }
}

/// Jordan eigenvalues (descending) of an element.
pub(crate) fn eigenvalues(x: &Element) -> Result<Vec<f64>> {
    Ok(match frame(x)? {
        Frame::Lorentz { values, .. } => values.to_vec(),
        Frame::Matrix { eigen } => match x.descriptor().kind() {
            AlgebraKind::QuatHerm => dedup_pairs(&eigen.values)?,
            _ => eigen.values,
        },
    })
}

fn dedup_pairs(values: &[f64]) -> Result<Vec<f64>> {
    let scale = values.iter().fold(1.0f64, |m, v| m.max(v.abs()));
    let mut out = Vec::with_capacity(values.len() / 2);
    for pair in values.chunks(2) {
        if (pair[0] - pair[1]).abs() > PAIRING_TOL * scale {
            return Err(Error::NumericalFailure(format!(
                "quaternionic eigenvalues not paired: {} vs {}",
                pair[0], pair[1]
            )));
        }
        out.push(pair[0]);
    }
    Ok(out)
}

/// `f(x) = Σ f(λᵢ) cᵢ`.
pub(crate) fn spectral_map(x: &Element, f: impl Fn(f64) -> f64) -> Result<Element> {
    let fr = frame(x)?;
    Ok(map_frame(x, &fr, f))
}

pub(crate) fn map_frame(x: &Element, fr: &Frame, f: impl Fn(f64) -> f64) -> Element {
    let desc = *x.descriptor();
    match fr {
        Frame::Lorentz { values, direction } => {
            let (a, b) = (f(values[0]), f(values[1]));
            let mut coords = Vec::with_capacity(desc.dim());
            coords.push(0.5 * (a + b));
            coords.extend(direction.iter().map(|u| 0.5 * (a - b) * u));
            Element::from_raw(desc, coords)
        }
        Frame::Matrix { eigen } => {
            let n = eigen.values.len();
            let v = &eigen.vectors;
            let mut scaled = v.clone();
            for (j, &l) in eigen.values.iter().enumerate() {
                let fl = f(l);
                for i in 0..n {
                    scaled[(i, j)] *= fl;
                }
            }
            Element::from_cmat(desc, &(scaled * v.adjoint()))
        }
    }
}

pub fn spectral(x: &Element) -> Result<SpectralDecomposition> {
    let desc = *x.descriptor();
    match frame(x)? {
        Frame::Lorentz { values, direction } => {
            let mk = |sign: f64| {
                let mut c = Vec::with_capacity(desc.dim());
                c.push(0.5);
                c.extend(direction.iter().map(|u| 0.5 * sign * u));
                Element::from_raw(desc, c)
            };
            Ok(SpectralDecomposition {
                eigenvalues: values.to_vec(),
                idempotents: vec![mk(1.0), mk(-1.0)],
            })
        }
        Frame::Matrix { eigen } => match desc.kind() {
            AlgebraKind::QuatHerm => quaternion_decomposition(x, &eigen),
            _ => {
                let n = eigen.values.len();
                let idempotents = (0..n)
                    .map(|j| {
                        let col = eigen.vectors.column(j);
                        Element::from_cmat(desc, &(col * col.adjoint()))
                    })
                    .collect();
                Ok(SpectralDecomposition {
                    eigenvalues: eigen.values,
                    idempotents,
                })
            }
        },
    }
}

/// Rebuilds quaternionic rank-one projections from the doubled spectrum.
///
/// An eigenvector `(a; b)` of the embedding has the partner `(-b̄; ā)` with the same
/// eigenvalue. Walking the eigenvectors in descending order and keeping each one that
/// is not already spanned, together with its partner, yields `r` mutually orthogonal
/// structured projections even inside degenerate eigenspaces.
fn quaternion_decomposition(x: &Element, eigen: &Eigen) -> Result<SpectralDecomposition> {
    let desc = *x.descriptor();
    let r = desc.rank();
    let values = dedup_pairs(&eigen.values)?;
    let n = 2 * r;
    let mut basis: Vec<nalgebra::DVector<C64>> = Vec::with_capacity(n);
    let mut idempotents = Vec::with_capacity(r);
    let mut eigenvalues = Vec::with_capacity(r);
    for k in 0..n {
        if idempotents.len() == r {
            break;
        }
        let mut u = eigen.vectors.column(k).into_owned();
        for w in &basis {
            let proj = w.dotc(&u);
            u -= w * proj;
        }
        let nrm = u.norm();
        if nrm < 0.5 {
            continue;
        }
        u /= C64::new(nrm, 0.0);
        let mut partner = nalgebra::DVector::from_fn(n, |i, _| {
            if i < r {
                -u[i + r].conj()
            } else {
                u[i - r].conj()
            }
        });
        for w in basis.iter().chain(std::iter::once(&u)) {
            let proj = w.dotc(&partner);
            partner -= w * proj;
        }
        let pn = partner.norm();
        partner /= C64::new(pn, 0.0);
        let proj: CMat = &u * u.adjoint() + &partner * partner.adjoint();
        idempotents.push(Element::from_cmat(desc, &proj));
        eigenvalues.push(values[idempotents.len() - 1]);
        basis.push(u);
        basis.push(partner);
    }
    if idempotents.len() != r {
        return Err(Error::NumericalFailure(
            "could not assemble a quaternionic frame".into(),
        ));
    }
    Ok(SpectralDecomposition {
        eigenvalues,
        idempotents,
    })
}

/// Jordan determinant `Π λᵢ`.
pub fn det(x: &Element) -> Result<f64> {
    if x.descriptor().kind() == AlgebraKind::Lorentz {
        let c = x.coords();
        return Ok(c[0] * c[0] - c[1..].iter().map(|v| v * v).sum::<f64>());
    }
    Ok(eigenvalues(x)?.iter().product())
}

/// `log det x` for `x` in the open cone.
pub fn log_det(x: &Element) -> Result<f64> {
    let ev = eigenvalues(x)?;
    let min = ev.iter().copied().fold(f64::INFINITY, f64::min);
    if min <= 0.0 {
        return Err(Error::OutsideCone { min_eig: min });
    }
    Ok(ev.iter().map(|l| l.ln()).sum())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::AlgebraDescriptor;

    #[test]
    fn diagonal_real() {
        let d = AlgebraDescriptor::real_sym(2).unwrap();
        let x = Element::from_real_diagonal(d, &[2.0, 3.0]).unwrap();
        let s = spectral(&x).unwrap();
        assert_eq!(s.eigenvalues, vec![3.0, 2.0]);
        let e22 = Element::from_real_diagonal(d, &[0.0, 1.0]).unwrap();
        let e11 = Element::from_real_diagonal(d, &[1.0, 0.0]).unwrap();
        assert!(s.idempotents[0].max_abs_diff(&e22) < 1e-15);
        assert!(s.idempotents[1].max_abs_diff(&e11) < 1e-15);
    }

    #[test]
    fn lorentz_frame() {
        let d = AlgebraDescriptor::lorentz(2).unwrap();
        let x = Element::new(d, vec![2.0, 1.0, 0.0]).unwrap();
        let s = spectral(&x).unwrap();
        assert_eq!(s.eigenvalues, vec![3.0, 1.0]);
        assert_eq!(s.idempotents[0].coords(), &[0.5, 0.5, 0.0]);
        assert_eq!(s.idempotents[1].coords(), &[0.5, -0.5, 0.0]);
        // x̄ = 0 picks the first axis
        let y = Element::new(d, vec![1.0, 0.0, 0.0]).unwrap();
        let s = spectral(&y).unwrap();
        assert_eq!(s.idempotents[0].coords(), &[0.5, 0.5, 0.0]);
    }

    #[test]
    fn quaternion_diagonal_and_identity() {
        let d = AlgebraDescriptor::quat_herm(3).unwrap();
        let x = Element::from_real_diagonal(d, &[1.0, 2.0, 3.0]).unwrap();
        let s = spectral(&x).unwrap();
        assert_eq!(s.eigenvalues, vec![3.0, 2.0, 1.0]);
        for c in &s.idempotents {
            assert!((c.trace() - 1.0).abs() < 1e-14);
        }
        let e = Element::identity(d);
        let s = spectral(&e).unwrap();
        assert!(s.reconstruct().max_abs_diff(&e) < 1e-14);
        for (i, ci) in s.idempotents.iter().enumerate() {
            for (j, cj) in s.idempotents.iter().enumerate() {
                let p = ci.jordan(cj).unwrap();
                let expect = if i == j { ci.clone() } else { Element::zero(d) };
                assert!(p.max_abs_diff(&expect) < 1e-14);
            }
        }
    }

    #[test]
    fn determinants() {
        let d = AlgebraDescriptor::real_sym(3).unwrap();
        assert!((det(&Element::identity(d)).unwrap() - 1.0).abs() < 1e-15);
        assert!((det(&(Element::identity(d) * 2.0)).unwrap() - 8.0).abs() < 1e-13);
        let l = AlgebraDescriptor::lorentz(3).unwrap();
        let x = Element::new(l, vec![3.0, 1.0, -1.0, 0.5]).unwrap();
        assert!((det(&x).unwrap() - (9.0 - 2.25)).abs() < 1e-14);
        assert!(matches!(
            log_det(&Element::from_real_diagonal(d, &[1.0, -1.0, 2.0]).unwrap()),
            Err(Error::OutsideCone { .. })
        ));
    }
}
