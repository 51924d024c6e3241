//! Cyclic Jacobi iteration for complex Hermitian matrices.

use super::element::{CMat, C64};
use crate::error::{Error, Result};

const MAX_SWEEPS: usize = 100;
/// Off-diagonal Frobenius mass, relative to `‖A‖_F`, that must be reached.
pub(crate) const JACOBI_TOL: f64 = 1e-13;
/// A pivot is negligible when `|a_pq| ≤ REL_TOL·√|a_pp a_qq|` (or below `ABS_TOL·‖A‖_F`);
/// sweeping until every pivot is negligible keeps small eigenvalues of ill-conditioned
/// positive matrices accurate to working precision relative to their own size.
const REL_TOL: f64 = 1e-16;
const ABS_TOL: f64 = 1e-30;

/// Eigenvalues (descending) and the unitary matrix whose columns are the eigenvectors.
pub(crate) struct Eigen {
    pub values: Vec<f64>,
    pub vectors: CMat,
}

fn off_diagonal_norm(a: &CMat) -> f64 {
    let n = a.nrows();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[(i, j)].norm_sqr();
            }
        }
    }
    s.sqrt()
}

pub(crate) fn hermitian_eigen(input: &CMat) -> Result<Eigen> {
    let n = input.nrows();
    let mut a = input.clone();
    let mut v = CMat::identity(n, n);
    let tol = JACOBI_TOL * input.norm();

    let floor = ABS_TOL * input.norm();
    let mut converged = false;
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n.saturating_sub(1) {
            for q in p + 1..n {
                let mag = a[(p, q)].norm();
                let scale = (a[(p, p)].re * a[(q, q)].re).abs().sqrt();
                if mag > floor && mag > REL_TOL * scale {
                    rotate(&mut a, &mut v, p, q);
                    rotated = true;
                }
            }
        }
        if !rotated {
            converged = true;
            break;
        }
    }
    if !converged && off_diagonal_norm(&a) > tol {
        return Err(Error::NumericalFailure(format!(
            "Jacobi iteration did not converge in {MAX_SWEEPS} sweeps"
        )));
    }

    let mut order: Vec<usize> = (0..n).collect();
    let diag: Vec<f64> = (0..n).map(|i| a[(i, i)].re).collect();
    order.sort_by(|&i, &j| diag[j].total_cmp(&diag[i]));
    let values = order.iter().map(|&i| diag[i]).collect();
    let vectors = CMat::from_fn(n, n, |r, c| v[(r, order[c])]);
    Ok(Eigen { values, vectors })
}

/// One two-sided rotation annihilating `a[p,q]`: a phase fix that makes the pivot
/// real, followed by the classical real Jacobi rotation.
fn rotate(a: &mut CMat, v: &mut CMat, p: usize, q: usize) {
    let apq = a[(p, q)];
    let mag = apq.norm();
    if mag == 0.0 {
        return;
    }
    let w = (apq / mag).conj();
    let (app, aqq) = (a[(p, p)].re, a[(q, q)].re);
    let theta = (aqq - app) / (2.0 * mag);
    let t = if theta.abs() > 1e150 {
        0.5 / theta
    } else {
        theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
    };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;

    // U restricted to (p, q): [[c, s], [-s w, c w]].
    let upq = C64::new(s, 0.0);
    let uqp = w * (-s);
    let uqq = w * c;
    let n = a.nrows();
    for k in 0..n {
        let (akp, akq) = (a[(k, p)], a[(k, q)]);
        a[(k, p)] = akp * c + akq * uqp;
        a[(k, q)] = akp * upq + akq * uqq;
        let (vkp, vkq) = (v[(k, p)], v[(k, q)]);
        v[(k, p)] = vkp * c + vkq * uqp;
        v[(k, q)] = vkp * upq + vkq * uqq;
    }
    for k in 0..n {
        let (apk, aqk) = (a[(p, k)], a[(q, k)]);
        a[(p, k)] = apk * c + aqk * uqp.conj();
        a[(q, k)] = apk * upq + aqk * uqq.conj();
    }
    a[(p, q)] = C64::new(0.0, 0.0);
    a[(q, p)] = C64::new(0.0, 0.0);
    a[(p, p)] = C64::new(a[(p, p)].re, 0.0);
    a[(q, q)] = C64::new(a[(q, q)].re, 0.0);
}
