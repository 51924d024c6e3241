//! Random elements, cone points and idempotent frames for property sweeps.

use rand::Rng;
use rand_distr::StandardNormal;

use super::descriptor::{AlgebraDescriptor, AlgebraKind};
use super::element::Element;
use super::functions::elt_exp;
use super::quat::{Quat, QuatMatrix};
use super::spectral::spectral;
use crate::error::Result;

fn normal<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    rng.sample(StandardNormal)
}

/// Quaternion with the first `d` components Gaussian with variance `var`.
fn gaussian_entry<R: Rng + ?Sized>(rng: &mut R, d: usize, var: f64) -> Quat {
    let sd = var.sqrt();
    let mut c = [0.0; 4];
    for v in c.iter_mut().take(d) {
        *v = sd * normal(rng);
    }
    Quat::new(c[0], c[1], c[2], c[3])
}

/// Gaussian element: for matrix kinds a GOE/GUE/GSE-style Hermitian matrix
/// (diagonal variance 1, off-diagonal components variance ½); for Lorentz,
/// independent standard normal coordinates.
pub fn random_element<R: Rng + ?Sized>(desc: AlgebraDescriptor, rng: &mut R) -> Element {
    match desc.kind() {
        AlgebraKind::Lorentz => {
            let c = (0..desc.dim()).map(|_| normal(rng)).collect();
            Element::from_raw(desc, c)
        }
        _ => {
            let (r, d) = (desc.rank(), desc.components());
            let mut m = QuatMatrix::zeros(r);
            for i in 0..r {
                m.set(i, i, Quat::real(normal(rng)));
                for j in i + 1..r {
                    let q = gaussian_entry(rng, d, 0.5);
                    m.set(i, j, q);
                    m.set(j, i, q.conj());
                }
            }
            Element::from_quat_matrix(desc, &m).expect("matrix kind")
        }
    }
}

/// `g·g* + εe` with a Gaussian square matrix `g` over the base field
/// (Lorentz: `g² + εe` for a Gaussian element `g`).
pub fn random_cone_point<R: Rng + ?Sized>(
    desc: AlgebraDescriptor,
    rng: &mut R,
    eps: f64,
) -> Element {
    match desc.kind() {
        AlgebraKind::Lorentz => random_element(desc, rng).square().shift(eps),
        _ => {
            let (r, d) = (desc.rank(), desc.components());
            let mut g = QuatMatrix::zeros(r);
            for i in 0..r {
                for j in 0..r {
                    g.set(i, j, gaussian_entry(rng, d, 1.0));
                }
            }
            let gg = g.mul(&g.conj_transpose());
            Element::from_quat_matrix(desc, &gg)
                .expect("matrix kind")
                .shift(eps)
        }
    }
}

/// `exp(s·G)` for a Gaussian element `G`; spreads over the cone without
/// approaching its boundary.
pub fn random_exp_point<R: Rng + ?Sized>(
    desc: AlgebraDescriptor,
    rng: &mut R,
    s: f64,
) -> Result<Element> {
    elt_exp(&(random_element(desc, rng) * s))
}

/// Unit vector in `Kʳ` (first `d` quaternion components populated).
pub fn random_unit_vector<R: Rng + ?Sized>(desc: AlgebraDescriptor, rng: &mut R) -> Vec<Quat> {
    let d = desc.components();
    loop {
        let v: Vec<Quat> = (0..desc.rank())
            .map(|_| gaussian_entry(rng, d, 1.0))
            .collect();
        let n = v.iter().map(|q| q.norm_sqr()).sum::<f64>().sqrt();
        if n > 1e-8 {
            return v.into_iter().map(|q| q.scale(1.0 / n)).collect();
        }
    }
}

/// Rank-one projection `v v*` for a unit vector `v`.
pub fn rank_one_projector(desc: AlgebraDescriptor, v: &[Quat]) -> Element {
    let r = desc.rank();
    let mut m = QuatMatrix::zeros(r);
    for i in 0..r {
        for j in 0..r {
            m.set(i, j, v[i] * v[j].conj());
        }
    }
    Element::from_quat_matrix(desc, &m).expect("matrix kind")
}

fn quat_dot(u: &[Quat], v: &[Quat]) -> Quat {
    u.iter()
        .zip(v)
        .fold(Quat::ZERO, |acc, (a, b)| acc + a.conj() * *b)
}

/// Complete system of `r` primitive orthogonal idempotents.
///
/// Matrix kinds: Gram–Schmidt over the base field on Gaussian columns, then
/// `cᵢ = vᵢvᵢ*`. Lorentz: the spectral frame of a Gaussian element.
pub fn random_idempotent_system<R: Rng + ?Sized>(
    desc: AlgebraDescriptor,
    rng: &mut R,
) -> Result<Vec<Element>> {
    if desc.kind() == AlgebraKind::Lorentz {
        return Ok(spectral(&random_element(desc, rng))?.idempotents);
    }
    let r = desc.rank();
    let mut vs: Vec<Vec<Quat>> = Vec::with_capacity(r);
    while vs.len() < r {
        let mut v = random_unit_vector(desc, rng);
        // two passes of classical Gram–Schmidt for orthogonality to roundoff
        for _ in 0..2 {
            for u in &vs {
                let c = quat_dot(u, &v);
                for (vi, ui) in v.iter_mut().zip(u) {
                    *vi = *vi - *ui * c;
                }
            }
        }
        let n = v.iter().map(|q| q.norm_sqr()).sum::<f64>().sqrt();
        if n < 1e-6 {
            continue;
        }
        vs.push(v.into_iter().map(|q| q.scale(1.0 / n)).collect());
    }
    Ok(vs.iter().map(|v| rank_one_projector(desc, v)).collect())
}

/// Idempotent of the given rank: sum of the first `rank` members of a random frame.
pub fn random_idempotent<R: Rng + ?Sized>(
    desc: AlgebraDescriptor,
    rng: &mut R,
    rank: usize,
) -> Result<Element> {
    let frame = random_idempotent_system(desc, rng)?;
    Ok(frame
        .iter()
        .take(rank)
        .fold(Element::zero(desc), |acc, c| &acc + c))
}

/// Invertible element with a random frame and eigenvalues `±[0.5, 2]`.
pub fn random_invertible<R: Rng + ?Sized>(desc: AlgebraDescriptor, rng: &mut R) -> Result<Element> {
    let frame = random_idempotent_system(desc, rng)?;
    Ok(frame.iter().fold(Element::zero(desc), |acc, c| {
        let mag = rng.random_range(0.5..2.0);
        let sign = if rng.random_bool(0.5) { 1.0 } else { -1.0 };
        &acc + &(c * (sign * mag))
    }))
}
