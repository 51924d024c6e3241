//! Closed-form solutions of the Pexider and Olkin–Baker equations on a cone,
//! their residuals, and the one-parameter idempotent slices.
//!
//! The Olkin–Baker equation reads `a(x) + b(y) = c(x+y) + d(P((x+y)^{-1/2})x)`
//! for `x, y ∈ V`. Its continuous solutions on the supported cones are
//!
//! ```text
//! a(x) = ⟨Λ,x⟩ + k₁ log det x + C₁
//! b(x) = ⟨Λ,x⟩ + k₂ log det x + C₂
//! c(x) = ⟨Λ,x⟩ + (k₁+k₂) log det x + C₃
//! d(u) = k₁ log det u + k₂ log det(e−u) + C₄
//! ```
//!
//! with `C₁ + C₂ = C₃ + C₄`.

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::algebra::{self, random, AlgebraDescriptor, Element};
use crate::cone::{in_domain_d, psi_raw, ConePoint};
use crate::error::{ensure_same, Error, Result};
use crate::par;
use crate::rng::{chunks, stream_rng};
use crate::wishart::{log_gamma_cone, WishartParams};

/// `ε` added to random Gram matrices so sweep pairs stay strictly inside the cone.
pub const SWEEP_EPS: f64 = 1e-3;

/// `a(x) = ⟨λ,x⟩ + α`, `b(y) = ⟨λ,y⟩ + β`, `c(z) = ⟨λ,z⟩ + α + β`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PexiderSolution {
    pub lambda: Element,
    pub alpha: f64,
    pub beta: f64,
}

impl PexiderSolution {
    pub fn a(&self, x: &Element) -> f64 {
        self.lambda.inner(x) + self.alpha
    }

    pub fn b(&self, y: &Element) -> f64 {
        self.lambda.inner(y) + self.beta
    }

    pub fn c(&self, z: &Element) -> f64 {
        self.lambda.inner(z) + self.alpha + self.beta
    }
}

/// `a(x) + b(y) − c(x + y)`.
pub fn pexider_residual(sol: &PexiderSolution, x: &ConePoint, y: &ConePoint) -> Result<f64> {
    let (x, y) = (x.value(), y.value());
    ensure_same(sol.lambda.descriptor(), x.descriptor())?;
    ensure_same(x.descriptor(), y.descriptor())?;
    Ok(sol.a(x) + sol.b(y) - sol.c(&(x + y)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Branch {
    A,
    B,
    C,
    D,
}

/// Parameter pack `(Λ, k₁, k₂, C₁..C₄)` of an Olkin–Baker solution.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ObSolution {
    pub lambda: Element,
    pub k1: f64,
    pub k2: f64,
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
    pub c4: f64,
}

impl ObSolution {
    pub fn descriptor(&self) -> &AlgebraDescriptor {
        self.lambda.descriptor()
    }

    /// `C₁ + C₂ − C₃ − C₄`, the constant value of the residual.
    pub fn defect(&self) -> f64 {
        (self.c1 + self.c2) - (self.c3 + self.c4)
    }

    pub fn is_consistent(&self, tol: f64) -> bool {
        self.defect().abs() <= tol
    }

    /// Random consistent solution: Gaussian `Λ`, `k` and `C₁..C₃`, with `C₄` fixed by
    /// the constraint.
    pub fn random<R: Rng + ?Sized>(desc: AlgebraDescriptor, rng: &mut R) -> Self {
        let mut g = || -> f64 { rng.sample(StandardNormal) };
        let (k1, k2, c1, c2, c3) = (g(), g(), g(), g(), g());
        let lambda = random::random_element(desc, rng);
        Self {
            lambda,
            k1,
            k2,
            c1,
            c2,
            c3,
            c4: c1 + c2 - c3,
        }
    }

    pub fn coefficient(&self, branch: Branch) -> f64 {
        match branch {
            Branch::A => self.k1,
            Branch::B => self.k2,
            Branch::C => self.k1 + self.k2,
            Branch::D => f64::NAN,
        }
    }

    pub fn constant(&self, branch: Branch) -> f64 {
        match branch {
            Branch::A => self.c1,
            Branch::B => self.c2,
            Branch::C => self.c3,
            Branch::D => self.c4,
        }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }
}

/// Evaluates one branch; `a, b, c` need `arg ∈ V` and `d` needs `arg ∈ D`.
pub fn ob_eval(sol: &ObSolution, which: Branch, arg: &Element) -> Result<f64> {
    ensure_same(sol.descriptor(), arg.descriptor())?;
    match which {
        Branch::D => {
            if !in_domain_d(arg)? {
                return Err(Error::DomainViolation(
                    "d-branch argument is not in D".into(),
                ));
            }
            let e_minus_u = arg.shift(-1.0) * -1.0;
            Ok(sol.k1 * algebra::log_det(arg)? + sol.k2 * algebra::log_det(&e_minus_u)? + sol.c4)
        }
        b => Ok(sol.lambda.inner(arg)
            + sol.coefficient(b) * algebra::log_det(arg)?
            + sol.constant(b)),
    }
}

/// `a(x) + b(y) − c(x+y) − d(P((x+y)^{-1/2})x)`.
pub fn ob_residual(sol: &ObSolution, x: &ConePoint, y: &ConePoint) -> Result<f64> {
    let pair = SweepPair::new(x.value().clone(), y.value().clone())?;
    ob_residual_on(sol, &pair)
}

/// Value of the branch after removing its `⟨Λ,x⟩ + k log det x` part (for `d`, the
/// log-det parts). For closed-form solutions this is the branch constant.
pub fn homogeneous_part(sol: &ObSolution, which: Branch, arg: &Element) -> Result<f64> {
    let full = ob_eval(sol, which, arg)?;
    let strip = match which {
        Branch::D => {
            let e_minus_u = arg.shift(-1.0) * -1.0;
            sol.k1 * algebra::log_det(arg)? + sol.k2 * algebra::log_det(&e_minus_u)?
        }
        b => sol.lambda.inner(arg) + sol.coefficient(b) * algebra::log_det(arg)?,
    };
    Ok(full - strip)
}

/// The Olkin–Baker solution whose `a`, `b` are the log-densities of `γ_{p₁,a}` and
/// `γ_{p₂,a}`, `c` is the log-density of `γ_{p₁+p₂,a}` minus `(dim/r) log det`, and
/// `d` is the log-density of the quotient.
pub fn wishart_to_ob(p1: &WishartParams, p2: &WishartParams) -> Result<ObSolution> {
    ensure_same(p1.descriptor(), p2.descriptor())?;
    if p1.scale() != p2.scale() {
        return Err(Error::ScaleMismatch);
    }
    let desc = *p1.descriptor();
    let n_r = desc.dim_over_rank();
    let ld = p1.log_det_scale();
    let (s1, s2) = (p1.shape(), p2.shape());
    let lg12 = log_gamma_cone(s1 + s2, &desc)?;
    Ok(ObSolution {
        lambda: p1.scale().value() * -1.0,
        k1: s1 - n_r,
        k2: s2 - n_r,
        c1: p1.log_normalizer(),
        c2: p2.log_normalizer(),
        c3: (s1 + s2) * ld - lg12,
        c4: lg12 - p1.log_gamma() - p2.log_gamma(),
    })
}

/// A pair `(x, y)` with its quotient `(u, v) = ψ(x, y)` and the log-determinants
/// entering every residual.
#[derive(Debug, Clone)]
pub struct SweepPair {
    pub x: Element,
    pub y: Element,
    pub u: Element,
    pub v: Element,
    pub log_det_x: f64,
    pub log_det_y: f64,
    pub log_det_v: f64,
    pub log_det_u: f64,
    pub log_det_e_minus_u: f64,
}

impl SweepPair {
    pub fn new(x: Element, y: Element) -> Result<Self> {
        let (u, v) = psi_raw(&x, &y)?;
        let v = v.into_element();
        let e_minus_u = u.shift(-1.0) * -1.0;
        Ok(Self {
            log_det_x: algebra::log_det(&x)?,
            log_det_y: algebra::log_det(&y)?,
            log_det_v: algebra::log_det(&v)?,
            log_det_u: algebra::log_det(&u)?,
            log_det_e_minus_u: algebra::log_det(&e_minus_u)?,
            x,
            y,
            u,
            v,
        })
    }
}

fn ob_residual_on(sol: &ObSolution, p: &SweepPair) -> Result<f64> {
    ensure_same(sol.descriptor(), p.x.descriptor())?;
    let a = sol.lambda.inner(&p.x) + sol.k1 * p.log_det_x + sol.c1;
    let b = sol.lambda.inner(&p.y) + sol.k2 * p.log_det_y + sol.c2;
    let c = sol.lambda.inner(&p.v) + (sol.k1 + sol.k2) * p.log_det_v + sol.c3;
    let d = sol.k1 * p.log_det_u + sol.k2 * p.log_det_e_minus_u + sol.c4;
    Ok(a + b - c - d)
}

/// `x = g g* + εe`, `y = h h* + εe` with Gaussian `g`, `h`.
pub fn random_pair<R: Rng + ?Sized>(desc: AlgebraDescriptor, rng: &mut R) -> (Element, Element) {
    (
        random::random_cone_point(desc, rng, SWEEP_EPS),
        random::random_cone_point(desc, rng, SWEEP_EPS),
    )
}

/// `n` reproducible sweep pairs.
pub fn sweep_pairs(desc: AlgebraDescriptor, n: usize, seed: u64) -> Result<Vec<SweepPair>> {
    let parts = par::map_slice(&chunks(n), |&(c, _, len)| {
        let mut rng = stream_rng(seed, c as u64);
        (0..len)
            .map(|_| {
                let (x, y) = random_pair(desc, &mut rng);
                SweepPair::new(x, y)
            })
            .collect::<Result<Vec<_>>>()
    });
    let mut out = Vec::with_capacity(n);
    for p in parts {
        out.extend(p?);
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ResidualStats {
    pub n: usize,
    pub mean: f64,
    pub stddev: f64,
    pub min: f64,
    pub max: f64,
}

impl ResidualStats {
    pub fn from_values(values: &[f64]) -> Self {
        let n = values.len();
        let mean = values.iter().sum::<f64>() / n as f64;
        let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n.max(2) - 1) as f64;
        let (min, max) = values
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
                (lo.min(v), hi.max(v))
            });
        Self {
            n,
            mean,
            stddev: var.sqrt(),
            min,
            max,
        }
    }

    pub fn spread(&self) -> f64 {
        self.max - self.min
    }
}

/// Residual of `sol` over prepared pairs.
pub fn residual_sweep(sol: &ObSolution, pairs: &[SweepPair]) -> Result<ResidualStats> {
    if pairs.is_empty() {
        return Err(Error::InsufficientData("empty sweep".into()));
    }
    let values = par::map_slice(pairs, |p| ob_residual_on(sol, p))
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    Ok(ResidualStats::from_values(&values))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SliceBranch {
    E,
    F,
    G,
    H,
}

/// Restriction of a solution to the one-parameter curves through an idempotent `p`:
///
/// ```text
/// e(αp + p⊥)  = λα + κ₁ log α + C₁
/// f(αp + p⊥)  = λα + κ₂ log α + C₂
/// g(αp + 2p⊥) = λα + (κ₁+κ₂) log α + C₃
/// h(γp + ½p⊥) = κ₁ log γ + κ₂ log(1−γ) + C₄
/// ```
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SliceSolution {
    pub idempotent: Element,
    pub lambda: f64,
    pub kappa1: f64,
    pub kappa2: f64,
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
    pub c4: f64,
}

fn check_idempotent(p: &Element) -> Result<()> {
    let defect = p.square().max_abs_diff(p);
    if defect > 1e-9 {
        return Err(Error::NotIdempotent { defect });
    }
    Ok(())
}

impl SliceSolution {
    /// The slice of a closed-form solution along `p`.
    pub fn of_ob(sol: &ObSolution, p: &Element) -> Result<Self> {
        ensure_same(sol.descriptor(), p.descriptor())?;
        check_idempotent(p)?;
        let p_perp = p.shift(-1.0) * -1.0;
        let rk_perp = p_perp.trace().round();
        let rk = p.trace().round();
        let lam_perp = sol.lambda.inner(&p_perp);
        let ln2 = std::f64::consts::LN_2;
        let ksum = sol.k1 + sol.k2;
        Ok(Self {
            idempotent: p.clone(),
            lambda: sol.lambda.inner(p),
            kappa1: sol.k1 * rk,
            kappa2: sol.k2 * rk,
            c1: sol.c1 + lam_perp,
            c2: sol.c2 + lam_perp,
            c3: sol.c3 + 2.0 * lam_perp + ksum * rk_perp * ln2,
            c4: sol.c4 - ksum * rk_perp * ln2,
        })
    }

    pub fn defect(&self) -> f64 {
        (self.c1 + self.c2) - (self.c3 + self.c4)
    }
}

/// Evaluates one branch at the scalar argument (`α > 0`, or `γ ∈ (0,1)` for `h`).
pub fn slice_eval(sol: &SliceSolution, which: SliceBranch, t: f64) -> Result<f64> {
    let ok = match which {
        SliceBranch::H => t > 0.0 && t < 1.0,
        _ => t > 0.0 && t.is_finite(),
    };
    if !ok {
        return Err(Error::DomainViolation(format!(
            "slice argument {t} out of range for {which:?}"
        )));
    }
    let l = t.ln();
    Ok(match which {
        SliceBranch::E => sol.lambda * t + sol.kappa1 * l + sol.c1,
        SliceBranch::F => sol.lambda * t + sol.kappa2 * l + sol.c2,
        SliceBranch::G => sol.lambda * t + (sol.kappa1 + sol.kappa2) * l + sol.c3,
        SliceBranch::H => sol.kappa1 * l + sol.kappa2 * (1.0 - t).ln() + sol.c4,
    })
}

/// The algebra element at which a slice branch is evaluated.
pub fn slice_point(p: &Element, which: SliceBranch, t: f64) -> Element {
    let perp_weight = match which {
        SliceBranch::E | SliceBranch::F => 1.0,
        SliceBranch::G => 2.0,
        SliceBranch::H => 0.5,
    };
    let p_perp = p.shift(-1.0) * -1.0;
    &(p * t) + &(&p_perp * perp_weight)
}

/// Least-squares fit of `t ↦ λt + κ log t + C` to samples `(t, value)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SliceFit {
    pub lambda: f64,
    pub kappa: f64,
    pub constant: f64,
    pub max_residual: f64,
}

pub fn fit_slice(samples: &[(f64, f64)]) -> Result<SliceFit> {
    if samples.len() < 3 {
        return Err(Error::InsufficientData(format!(
            "{} slice samples, need at least 3",
            samples.len()
        )));
    }
    if samples.iter().any(|&(t, v)| t.is_nan() || t <= 0.0 || !v.is_finite()) {
        return Err(Error::DomainViolation("slice samples need t > 0".into()));
    }
    let a = DMatrix::from_fn(samples.len(), 3, |i, j| {
        let t = samples[i].0;
        [t, t.ln(), 1.0][j]
    });
    let b = DVector::from_iterator(samples.len(), samples.iter().map(|s| s.1));
    let svd = a.clone().svd(true, true);
    let smax = svd.singular_values.max();
    if svd.rank(1e-12 * smax) < 3 {
        return Err(Error::InsufficientData(
            "slice samples are degenerate".into(),
        ));
    }
    let coef = svd
        .solve(&b, 1e-12 * smax)
        .map_err(|e| Error::NumericalFailure(e.to_string()))?;
    let max_residual = (&a * &coef - &b).amax();
    Ok(SliceFit {
        lambda: coef[0],
        kappa: coef[1],
        constant: coef[2],
        max_residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::random::{random_cone_point, random_idempotent};

    fn desc() -> AlgebraDescriptor {
        AlgebraDescriptor::complex_herm(3).unwrap()
    }

    fn cp(x: Element) -> ConePoint {
        ConePoint::new(x).unwrap()
    }

    #[test]
    fn pexider_family_is_exact() {
        let mut rng = stream_rng(1, 0);
        let d = desc();
        let sol = PexiderSolution {
            lambda: random::random_element(d, &mut rng),
            alpha: 0.7,
            beta: -1.3,
        };
        for _ in 0..50 {
            let (x, y) = random_pair(d, &mut rng);
            assert!(pexider_residual(&sol, &cp(x), &cp(y)).unwrap().abs() < 1e-12);
        }
        let zero = PexiderSolution {
            lambda: Element::zero(d),
            alpha: 0.0,
            beta: 0.0,
        };
        let (x, y) = random_pair(d, &mut rng);
        assert_eq!(pexider_residual(&zero, &cp(x), &cp(y)).unwrap(), 0.0);
    }

    #[test]
    fn branch_examples() {
        let d = AlgebraDescriptor::real_sym(3).unwrap();
        let mut rng = stream_rng(2, 0);
        let sol = ObSolution::random(d, &mut rng);
        let e = Element::identity(d);
        let a = ob_eval(&sol, Branch::A, &e).unwrap();
        assert!((a - (sol.lambda.inner(&e) + sol.c1)).abs() < 1e-14);
        let half = &e * 0.5;
        let dv = ob_eval(&sol, Branch::D, &half).unwrap();
        let expect = (sol.k1 + sol.k2) * 3.0 * 0.5f64.ln() + sol.c4;
        assert!((dv - expect).abs() < 1e-12);
        assert!(matches!(
            ob_eval(&sol, Branch::D, &e),
            Err(Error::DomainViolation(_))
        ));
        assert!(ob_eval(&sol, Branch::A, &(&e * -1.0)).is_err());
        let c = ob_eval(&sol, Branch::C, &e).unwrap();
        assert!(
            (c - a
                - ob_eval(&sol, Branch::B, &e).unwrap()
                - (sol.c3 - sol.c1 - sol.c2 - sol.lambda.inner(&e)))
            .abs()
                < 1e-12
        );
    }

    #[test]
    fn residual_is_the_defect() {
        for d in [
            AlgebraDescriptor::real_sym(4).unwrap(),
            AlgebraDescriptor::quat_herm(3).unwrap(),
            AlgebraDescriptor::lorentz(4).unwrap(),
        ] {
            let mut rng = stream_rng(3, 0);
            let mut sol = ObSolution::random(d, &mut rng);
            let pairs = sweep_pairs(d, 400, 11).unwrap();
            let s = residual_sweep(&sol, &pairs).unwrap();
            assert!(s.spread() < 1e-9, "{d}: {s:?}");
            assert!(s.mean.abs() < 1e-9);
            sol.c4 += 0.1;
            let t = residual_sweep(&sol, &pairs).unwrap();
            assert!((t.mean - s.mean + 0.1).abs() < 1e-9);
        }
    }

    #[test]
    fn wishart_map_arithmetic() {
        let d = AlgebraDescriptor::real_sym(3).unwrap();
        let p1 = WishartParams::standard(3.0, d).unwrap();
        let p2 = WishartParams::standard(4.5, d).unwrap();
        let ob = wishart_to_ob(&p1, &p2).unwrap();
        assert_eq!(ob.k1, 1.0);
        assert_eq!(ob.k2, 2.5);
        assert!(ob.is_consistent(1e-12));
        let mut rng = stream_rng(4, 0);
        let a = cp(random_cone_point(d, &mut rng, 0.5));
        let q = WishartParams::new(3.0, a).unwrap();
        assert!(matches!(wishart_to_ob(&p1, &q), Err(Error::ScaleMismatch)));
        // branch a is the log-density
        let x = random_cone_point(d, &mut rng, 0.1);
        let la = ob_eval(&ob, Branch::A, &x).unwrap();
        assert!((la - crate::wishart::log_density(&x, &p1)).abs() < 1e-12);
    }

    #[test]
    fn homogeneous_parts_are_constant() {
        let d = AlgebraDescriptor::real_sym(3).unwrap();
        let mut rng = stream_rng(5, 0);
        let sol = ObSolution::random(d, &mut rng);
        let x = random_cone_point(d, &mut rng, 0.1);
        for b in [Branch::A, Branch::B, Branch::C] {
            let h1 = homogeneous_part(&sol, b, &x).unwrap();
            let h2 = homogeneous_part(&sol, b, &(&x * 7.5)).unwrap();
            assert!((h1 - h2).abs() < 1e-12);
            assert!((h1 - sol.constant(b)).abs() < 1e-12);
        }
    }

    #[test]
    fn slices_match_the_full_solution() {
        let d = AlgebraDescriptor::quat_herm(3).unwrap();
        let mut rng = stream_rng(6, 0);
        let sol = ObSolution::random(d, &mut rng);
        let p = random_idempotent(d, &mut rng, 2).unwrap();
        let s = SliceSolution::of_ob(&sol, &p).unwrap();
        assert!(s.defect().abs() < 1e-12);
        for (b, sb, t) in [
            (Branch::A, SliceBranch::E, 0.3),
            (Branch::B, SliceBranch::F, 2.2),
            (Branch::C, SliceBranch::G, 1.7),
            (Branch::D, SliceBranch::H, 0.4),
        ] {
            let full = ob_eval(&sol, b, &slice_point(&p, sb, t)).unwrap();
            let sl = slice_eval(&s, sb, t).unwrap();
            assert!((full - sl).abs() < 1e-10, "{sb:?}: {full} vs {sl}");
        }
        assert!(slice_eval(&s, SliceBranch::H, 1.0).is_err());
        assert!(SliceSolution::of_ob(&sol, &(&p * 0.5)).is_err());
    }

    #[test]
    fn slice_at_unit_and_half() {
        let s = SliceSolution {
            idempotent: Element::identity(desc()),
            lambda: 0.0,
            kappa1: 1.5,
            kappa2: -0.5,
            c1: 2.0,
            c2: 0.0,
            c3: 0.0,
            c4: 2.0,
        };
        assert_eq!(slice_eval(&s, SliceBranch::E, 1.0).unwrap(), 2.0);
        let h = slice_eval(&s, SliceBranch::H, 0.5).unwrap();
        assert!((h - (1.0 * 0.5f64.ln() + 2.0)).abs() < 1e-15);
    }

    #[test]
    fn slice_fit_recovers_zero_lambda_for_homogeneous_parts() {
        let d = AlgebraDescriptor::real_sym(4).unwrap();
        let mut rng = stream_rng(7, 0);
        let sol = ObSolution::random(d, &mut rng);
        let p = random_idempotent(d, &mut rng, 1).unwrap();
        let samples: Vec<(f64, f64)> = (1..40)
            .map(|i| {
                let t = 0.1 * i as f64;
                let x = slice_point(&p, SliceBranch::E, t);
                (t, homogeneous_part(&sol, Branch::A, &x).unwrap())
            })
            .collect();
        let fit = fit_slice(&samples).unwrap();
        assert!(fit.lambda.abs() < 1e-8);
        assert!(fit.kappa.abs() < 1e-8);
        assert!((fit.constant - sol.c1).abs() < 1e-8);
    }

    #[test]
    fn homogeneous_slice_antisymmetry() {
        // e(x) = κ(log⟨c,x⟩ − log⟨c',x⟩) with c ≤ p and c' ≤ p⊥ is 0-homogeneous.
        let d = AlgebraDescriptor::real_sym(3).unwrap();
        let mut rng = stream_rng(8, 0);
        let frame = random::random_idempotent_system(d, &mut rng).unwrap();
        let p = &frame[0] + &frame[1];
        let p_perp = frame[2].clone();
        let kappa = 0.8;
        let e = |x: &Element| kappa * (frame[0].inner(x).ln() - frame[2].inner(x).ln());
        let along = |q: &Element| -> SliceFit {
            let s: Vec<_> = (1..30)
                .map(|i| {
                    let t = 0.15 * i as f64;
                    (t, e(&slice_point(q, SliceBranch::E, t)))
                })
                .collect();
            fit_slice(&s).unwrap()
        };
        let (fp, fq) = (along(&p), along(&p_perp));
        assert!(fp.lambda.abs() < 1e-8 && fq.lambda.abs() < 1e-8);
        assert!((fp.kappa + fq.kappa).abs() < 1e-8);
        assert!((fp.constant - fq.constant).abs() < 1e-8);
        for t in [0.2, 3.0] {
            let lhs = e(&slice_point(&p, SliceBranch::E, t));
            let rhs = e(&(&p + &(&p_perp * (1.0 / t))));
            assert!((lhs - rhs).abs() < 1e-12);
        }
    }

    #[test]
    fn serde_round_trip() {
        let mut rng = stream_rng(9, 0);
        let sol = ObSolution::random(desc(), &mut rng);
        let back = ObSolution::from_json(&sol.to_json().unwrap()).unwrap();
        assert_eq!(back, sol);
    }
}
