//! Property suites. Each check records the worst measured defect next to its
//! tolerance; a suite passes when all of its checks do.

use std::time::Instant;

use nalgebra::DMatrix;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::algebra::{
    self, quad_rep, random, to_basis_coords, AlgebraDescriptor, AlgebraKind, Element,
};
use crate::cone::{self, ConePoint};
use crate::error::{Error, Result};
use crate::funceq::{
    self, fit_slice, homogeneous_part, residual_sweep, slice_point, sweep_pairs, Branch,
    ObSolution, PexiderSolution, SliceBranch,
};
use crate::gleason::{self, Charge, TraceForm, REFUTATION_THRESHOLD};
use crate::par;
use crate::rng::{derive_seed, stream_rng};
use crate::wishart::{laplace_transform, sample, WishartParams};
use crate::SCHEMA_VERSION;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Bound {
    /// Passes when `measured ≤ tolerance`.
    AtMost,
    /// Passes when `measured ≥ tolerance` (negative controls).
    AtLeast,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub measured: f64,
    pub tolerance: f64,
    pub bound: Bound,
    pub passed: bool,
}

impl Check {
    pub fn at_most(name: impl Into<String>, measured: f64, tolerance: f64) -> Self {
        Self {
            name: name.into(),
            measured,
            tolerance,
            bound: Bound::AtMost,
            passed: measured <= tolerance,
        }
    }

    pub fn at_least(name: impl Into<String>, measured: f64, tolerance: f64) -> Self {
        Self {
            name: name.into(),
            measured,
            tolerance,
            bound: Bound::AtLeast,
            passed: measured >= tolerance,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub schema_version: u32,
    pub suite: String,
    pub descriptor: AlgebraDescriptor,
    pub seed: u64,
    pub checks: Vec<Check>,
    pub passed: bool,
    #[serde(skip)]
    pub runtime_secs: f64,
}

impl SuiteReport {
    fn new(
        suite: &str,
        descriptor: AlgebraDescriptor,
        seed: u64,
        checks: Vec<Check>,
        start: Instant,
    ) -> Self {
        let passed = checks.iter().all(|c| c.passed);
        Self {
            schema_version: SCHEMA_VERSION,
            suite: suite.into(),
            descriptor,
            seed,
            checks,
            passed,
            runtime_secs: start.elapsed().as_secs_f64(),
        }
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

/// Runs `f` on `trials` independent streams of `seed` and keeps the per-column maxima.
fn max_over<const K: usize>(
    trials: usize,
    seed: u64,
    f: impl Fn(&mut crate::rng::StreamRng) -> Result<[f64; K]> + Sync,
) -> Result<[f64; K]> {
    let rows = par::map_range(trials, |i| {
        let mut rng = stream_rng(seed, i as u64);
        f(&mut rng)
    });
    let mut out = [0.0f64; K];
    for row in rows {
        for (o, v) in out.iter_mut().zip(row?) {
            // NaN must fail the check rather than vanish in `max`
            *o = if v.is_nan() { f64::INFINITY } else { o.max(v) };
        }
    }
    Ok(out)
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
}

/// Jordan axioms, spectral decomposition, idempotent frames and `tr log = log det`.
pub fn jordan_suite(desc: AlgebraDescriptor, trials: usize, seed: u64) -> Result<SuiteReport> {
    let start = Instant::now();
    let m = max_over::<9>(trials, seed, |rng| {
        let x = random::random_element(desc, rng);
        let y = random::random_element(desc, rng);
        let z = random::random_element(desc, rng);
        let x2 = x.square();
        let scale = x.norm().powi(3) * y.norm();
        let axiom = x
            .jordan(&x2.jordan(&y)?)?
            .distance(&x2.jordan(&x.jordan(&y)?)?)
            / scale.max(1.0);
        let assoc = (x.inner(&y.jordan(&z)?) - x.jordan(&y)?.inner(&z)).abs()
            / (x.norm() * y.norm() * z.norm()).max(1.0);
        let commut = x.jordan(&y)?.distance(&y.jordan(&x)?);

        let sd = algebra::spectral(&x)?;
        let recon = sd.reconstruct().distance(&x) / x.norm();
        let mut complete = Element::zero(desc);
        let mut ortho = 0.0f64;
        for (i, ci) in sd.idempotents.iter().enumerate() {
            complete = &complete + ci;
            ortho = ortho.max(ci.square().max_abs_diff(ci));
            ortho = ortho.max((ci.trace() - 1.0).abs());
            for cj in &sd.idempotents[i + 1..] {
                ortho = ortho.max(ci.jordan(cj)?.norm());
            }
        }
        let completeness = complete.max_abs_diff(&Element::identity(desc));
        let sorted = sd.eigenvalues.windows(2).all(|w| w[0] >= w[1]);

        let frame = algebra::random_idempotent_system(desc, rng)?;
        let mut fsum = Element::zero(desc);
        let mut fdef = 0.0f64;
        for (i, ci) in frame.iter().enumerate() {
            fsum = &fsum + ci;
            fdef = fdef.max((ci.trace() - 1.0).abs());
            fdef = fdef.max(ci.square().max_abs_diff(ci));
            for cj in &frame[i + 1..] {
                fdef = fdef.max(ci.inner(cj).abs());
            }
        }
        fdef = fdef.max(fsum.max_abs_diff(&Element::identity(desc)));

        let c = random::random_cone_point(desc, rng, 0.1);
        let tlog = (algebra::elt_log(&c)?.trace() - algebra::log_det(&c)?).abs();
        let selfadj = algebra::lmap(&x).adjointness_defect() / x.norm().max(1.0);
        Ok([
            axiom,
            assoc,
            commut,
            recon,
            ortho.max(if sorted { 0.0 } else { f64::INFINITY }),
            completeness,
            fdef,
            tlog,
            selfadj,
        ])
    })?;
    let peirce = peirce_spectrum_defect(desc, trials.min(100), derive_seed(seed, 1))?;
    let checks = vec![
        Check::at_most("jordan_axiom", m[0], 1e-10),
        Check::at_most("form_associativity", m[1], 1e-10),
        Check::at_most("commutativity", m[2], 1e-12),
        Check::at_most("spectral_reconstruction_rel", m[3], 1e-10),
        Check::at_most("spectral_frame_orthogonality", m[4], 1e-10),
        Check::at_most("spectral_frame_completeness", m[5], 1e-10),
        Check::at_most("random_frame_defect", m[6], 1e-10),
        Check::at_most("trace_log_vs_log_det", m[7], 1e-10),
        Check::at_most("lmap_self_adjoint", m[8], 1e-10),
        Check::at_most("lmap_idempotent_spectrum", peirce, 1e-10),
    ];
    Ok(SuiteReport::new("jordan", desc, seed, checks, start))
}

/// Largest distance from `{0, ½, 1}` of an eigenvalue of `L(c)` for primitive `c`.
fn peirce_spectrum_defect(desc: AlgebraDescriptor, trials: usize, seed: u64) -> Result<f64> {
    let m = max_over::<1>(trials, seed, |rng| {
        let frame = algebra::random_idempotent_system(desc, rng)?;
        let l = algebra::lmap(&frame[0]);
        let sym = (l.matrix() + l.matrix().transpose()) * 0.5;
        let ev = sym.symmetric_eigenvalues();
        let worst = ev
            .iter()
            .map(|&v| {
                [0.0, 0.5, 1.0]
                    .iter()
                    .map(|t| (v - t).abs())
                    .fold(f64::INFINITY, f64::min)
            })
            .fold(0.0f64, f64::max);
        Ok([worst])
    })?;
    Ok(m[0])
}

/// `P(v)y` by direct quaternion matrix products, independent of the complex embedding.
fn sandwich(x: &Element, y: &Element) -> Result<Element> {
    let (a, b) = (x.to_quat_matrix()?, y.to_quat_matrix()?);
    Element::from_quat_matrix(*x.descriptor(), &a.mul(&b).mul(&a))
}

/// `(u, v) ↦ (x, y) = ψ⁻¹(u, v)` in orthonormal coordinates; returns `|det J|` by
/// central differences.
pub fn finite_difference_jacobian(u: &Element, v: &Element, step: f64) -> Result<f64> {
    let desc = *u.descriptor();
    let n = desc.dim();
    let base_u = to_basis_coords(u);
    let base_v = to_basis_coords(v);
    let eval = |cu: &[f64], cv: &[f64]| -> Result<Vec<f64>> {
        let uu = algebra::from_basis_coords(desc, cu)?;
        let vv = algebra::from_basis_coords(desc, cv)?;
        let s = algebra::elt_sqrt(&vv)?;
        let x = s.quad_apply(&uu)?;
        let y = s.quad_apply(&(uu.shift(-1.0) * -1.0))?;
        let mut out = to_basis_coords(&x);
        out.extend(to_basis_coords(&y));
        Ok(out)
    };
    let mut jac = DMatrix::zeros(2 * n, 2 * n);
    for k in 0..2 * n {
        let (mut up, mut vp) = (base_u.clone(), base_v.clone());
        let (mut um, mut vm) = (base_u.clone(), base_v.clone());
        if k < n {
            up[k] += step;
            um[k] -= step;
        } else {
            vp[k - n] += step;
            vm[k - n] -= step;
        }
        let plus = eval(&up, &vp)?;
        let minus = eval(&um, &vm)?;
        for i in 0..2 * n {
            jac[(i, k)] = (plus[i] - minus[i]) / (2.0 * step);
        }
    }
    Ok(jac.lu().determinant().abs())
}

/// Random `(u, v)` with `u ∈ D` well inside and `v ∈ V` of moderate condition.
fn random_quotient<R: Rng + ?Sized>(
    desc: AlgebraDescriptor,
    rng: &mut R,
) -> Result<(Element, Element)> {
    let frame = algebra::random_idempotent_system(desc, rng)?;
    let u = frame.iter().fold(Element::zero(desc), |acc, c| {
        &acc + &(c * rng.random_range(0.2..0.8))
    });
    let v = random::random_exp_point(desc, rng, 0.5)?;
    Ok((u, v))
}

/// Quadratic representation, inverse, Cauchy determinant identity, the quotient map
/// and the Jacobian of its inverse.
pub fn quadratic_suite(desc: AlgebraDescriptor, trials: usize, seed: u64) -> Result<SuiteReport> {
    let start = Instant::now();
    let m = max_over::<8>(trials, seed, |rng| {
        let x = random::random_element(desc, rng);
        let y = random::random_element(desc, rng);
        let p = quad_rep(&x);
        let via_op = p.apply(&y)?;
        let direct = if desc.is_matrix() {
            sandwich(&x, &y)?
        } else {
            x.quad_apply(&y)?
        };
        let sandwich_err = via_op.distance(&direct) / (x.norm().powi(2) * y.norm()).max(1.0);
        let pe = quad_rep(&x)
            .apply(&Element::identity(desc))?
            .distance(&x.square())
            / x.norm().powi(2).max(1.0);

        let w = random::random_invertible(desc, rng)?;
        let inv_err = quad_rep(&w)
            .inverse()?
            .distance(&quad_rep(&algebra::inverse(&w)?));
        let neutral = w
            .jordan(&algebra::inverse(&w)?)?
            .max_abs_diff(&Element::identity(desc));

        let a = random::random_cone_point(desc, rng, 0.1);
        let b = random::random_cone_point(desc, rng, 0.1);
        let cauchy = rel(
            algebra::det(&a.quad_apply(&b)?)?,
            algebra::det(&a)?.powi(2) * algebra::det(&b)?,
        );

        let (xp, yp) = (ConePoint::new(a.clone())?, ConePoint::new(b.clone())?);
        let pair = cone::psi(&xp, &yp)?;
        let (x2, y2) = cone::psi_inverse(&pair)?;
        let scale = a.norm().max(b.norm());
        let round = x2.value().distance(&a).max(y2.value().distance(&b)) / scale;
        let dets = rel(
            algebra::det(pair.u())? * algebra::det(pair.v().value())?,
            algebra::det(&a)?,
        )
        .max(rel(
            algebra::det(&(pair.u().shift(-1.0) * -1.0))? * algebra::det(pair.v().value())?,
            algebra::det(&b)?,
        ));

        let v = ConePoint::new(random::random_exp_point(desc, rng, 0.5)?)?;
        let jac = rel(
            cone::jacobian_psi_inverse_operator(&v)?,
            cone::jacobian_psi_inverse(&v)?,
        );
        Ok([sandwich_err, pe, inv_err, neutral, cauchy, round, dets, jac])
    })?;
    let fd = fd_jacobian_error(desc, trials.min(20), 1e-6, derive_seed(seed, 1))?;
    let checks = vec![
        Check::at_most("quad_rep_vs_sandwich", m[0], 1e-10),
        Check::at_most("quad_rep_of_identity", m[1], 1e-10),
        Check::at_most("quad_rep_inverse", m[2], 1e-9),
        Check::at_most("inverse_neutral", m[3], 1e-10),
        Check::at_most("cauchy_determinant_rel", m[4], 1e-9),
        Check::at_most("psi_round_trip_rel", m[5], 1e-10),
        Check::at_most("quotient_determinants_rel", m[6], 1e-9),
        Check::at_most("jacobian_operator_det_rel", m[7], 1e-8),
        Check::at_most("jacobian_finite_difference_rel", fd, 1e-5),
    ];
    Ok(SuiteReport::new("quadratic", desc, seed, checks, start))
}

fn fd_jacobian_error(desc: AlgebraDescriptor, trials: usize, step: f64, seed: u64) -> Result<f64> {
    let fd = max_over::<1>(trials, seed, |rng| {
        let (u, v) = random_quotient(desc, rng)?;
        let numeric = finite_difference_jacobian(&u, &v, step)?;
        let exact = cone::jacobian_psi_inverse(&ConePoint::new(v)?)?;
        Ok([rel(numeric, exact)])
    })?;
    Ok(fd[0])
}

/// Jacobian of `ψ⁻¹` only: operator determinant against the closed form, and central
/// differences with the given step.
pub fn jacobian_suite(
    desc: AlgebraDescriptor,
    trials: usize,
    step: f64,
    seed: u64,
) -> Result<SuiteReport> {
    let start = Instant::now();
    let op = max_over::<1>(trials, seed, |rng| {
        let v = ConePoint::new(random::random_exp_point(desc, rng, 0.5)?)?;
        Ok([rel(
            cone::jacobian_psi_inverse_operator(&v)?,
            cone::jacobian_psi_inverse(&v)?,
        )])
    })?;
    let fd = fd_jacobian_error(desc, trials, step, derive_seed(seed, 1))?;
    let checks = vec![
        Check::at_most("jacobian_operator_det_rel", op[0], 1e-8),
        Check::at_most("jacobian_finite_difference_rel", fd, 1e-5),
    ];
    Ok(SuiteReport::new("jacobian", desc, seed, checks, start))
}

/// Points `t ∈ V` for the Laplace check: `P(a^{1/2})s` where `s` has a random frame and
/// eigenvalues in `[0.05, 0.25]`.
pub fn laplace_points<R: Rng + ?Sized>(
    scale: &ConePoint,
    count: usize,
    rng: &mut R,
) -> Result<Vec<Element>> {
    let desc = *scale.value().descriptor();
    let root = algebra::elt_sqrt(scale.value())?;
    (0..count)
        .map(|_| {
            let frame = algebra::random_idempotent_system(desc, rng)?;
            let s = frame.iter().fold(Element::zero(desc), |acc, c| {
                &acc + &(c * rng.random_range(0.05..0.25))
            });
            root.quad_apply(&s)
        })
        .collect()
}

fn empirical_laplace(samples: &[Element], t: &Element) -> f64 {
    let terms = par::map_slice(samples, |x| (-t.inner(x)).exp());
    terms.iter().sum::<f64>() / samples.len() as f64
}

/// Empirical Laplace transform of the sampler against `det(e + t a⁻¹)^{-p}`, plus the
/// convolution property `γ_{p,a} * γ_{p,a} = γ_{2p,a}`.
pub fn laplace_suite(
    params: &WishartParams,
    n: usize,
    points: usize,
    seed: u64,
) -> Result<SuiteReport> {
    let start = Instant::now();
    let desc = *params.descriptor();
    let batch = sample(params, n, derive_seed(seed, 1))?;
    let mut rng = stream_rng(derive_seed(seed, 2), 0);
    let ts = laplace_points(params.scale(), points, &mut rng)?;
    let mut checks = Vec::new();
    for (i, t) in ts.iter().enumerate() {
        let exact = laplace_transform(t, params)?;
        let emp = empirical_laplace(&batch.samples, t);
        checks.push(Check::at_most(
            format!("laplace_rel_t{i}"),
            rel(emp, exact),
            0.01,
        ));
    }
    let q = params.clone();
    let other = sample(&q, n, derive_seed(seed, 3))?;
    let sums: Vec<Element> = batch
        .samples
        .iter()
        .zip(&other.samples)
        .map(|(a, b)| a + b)
        .collect();
    let joint = WishartParams::new(params.shape() + q.shape(), params.scale().clone())?;
    let worst = ts
        .iter()
        .map(|t| {
            Ok(rel(
                empirical_laplace(&sums, t),
                laplace_transform(t, &joint)?,
            ))
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .fold(0.0f64, f64::max);
    checks.push(Check::at_most("convolution_laplace_rel", worst, 0.01));
    let finite = batch
        .samples
        .iter()
        .filter(|x| !crate::wishart::log_density(x, params).is_finite())
        .count();
    checks.push(Check::at_most("non_finite_log_density", finite as f64, 0.0));
    Ok(SuiteReport::new("laplace", desc, seed, checks, start))
}

/// Residual constancy of random consistent Olkin–Baker solutions, tampering
/// response, the Pexider family and the slice fits.
pub fn funceq_suite(
    desc: AlgebraDescriptor,
    solutions: usize,
    pairs: usize,
    seed: u64,
) -> Result<SuiteReport> {
    let start = Instant::now();
    let sweep = sweep_pairs(desc, pairs, derive_seed(seed, 1))?;
    let mut rng = stream_rng(derive_seed(seed, 2), 0);
    let delta = 0.1;
    let (mut spread, mut tamper) = (0.0f64, 0.0f64);
    for _ in 0..solutions {
        let sol = ObSolution::random(desc, &mut rng);
        let base = residual_sweep(&sol, &sweep)?;
        let allowance = 1.0 + sol.defect().abs();
        spread = spread.max(base.spread() / allowance);
        for which in 0..4 {
            let mut t = sol.clone();
            match which {
                0 => t.c1 += delta,
                1 => t.c2 += delta,
                2 => t.c3 += delta,
                _ => t.c4 += delta,
            }
            let shifted = residual_sweep(&t, &sweep)?;
            // C₁, C₂ enter with +, C₃, C₄ with −
            let expect = if which < 2 { delta } else { -delta };
            tamper = tamper.max((shifted.max - base.max - expect).abs());
            tamper = tamper.max((shifted.min - base.min - expect).abs());
        }
    }
    let pex = PexiderSolution {
        lambda: random::random_element(desc, &mut rng),
        alpha: rng.random_range(-1.0..1.0),
        beta: rng.random_range(-1.0..1.0),
    };
    let pexider = sweep
        .iter()
        .take(1000)
        .map(|p| {
            Ok(funceq::pexider_residual(
                &pex,
                &ConePoint::new(p.x.clone())?,
                &ConePoint::new(p.y.clone())?,
            )?
            .abs())
        })
        .collect::<Result<Vec<f64>>>()?
        .into_iter()
        .fold(0.0f64, f64::max);

    let sol = ObSolution::random(desc, &mut rng);
    let mut homog = 0.0f64;
    for s in [0.25, 2.0, 4.0] {
        for p in sweep.iter().take(50) {
            for b in [Branch::A, Branch::B, Branch::C] {
                let h1 = homogeneous_part(&sol, b, &p.x)?;
                let h2 = homogeneous_part(&sol, b, &(&p.x * s))?;
                homog = homog.max((h1 - h2).abs());
            }
        }
    }
    let mut slice = 0.0f64;
    if desc.is_matrix() && desc.rank() > 1 {
        for rank in 1..desc.rank() {
            let p = random::random_idempotent(desc, &mut rng, rank)?;
            let samples = (1..40)
                .map(|i| {
                    let t = 0.1 * i as f64;
                    Ok((
                        t,
                        homogeneous_part(&sol, Branch::A, &slice_point(&p, SliceBranch::E, t))?,
                    ))
                })
                .collect::<Result<Vec<_>>>()?;
            let fit = fit_slice(&samples)?;
            slice = slice.max(fit.lambda.abs()).max(fit.kappa.abs());
        }
    }
    let checks = vec![
        Check::at_most("ob_residual_spread", spread, 1e-9),
        Check::at_most("ob_tamper_shift", tamper, 1e-9),
        Check::at_most("pexider_residual", pexider, 1e-12),
        Check::at_most("homogeneous_part_scale_invariance", homog, 1e-12),
        Check::at_most("slice_fit_lambda", slice, 1e-8),
    ];
    Ok(SuiteReport::new("funceq", desc, seed, checks, start))
}

/// Trace-form round trip, additivity, the log-trace identity for scalar forms and its
/// refutation for non-scalar ones, and the cubic-coefficient cross-check.
pub fn gleason_suite(
    desc: AlgebraDescriptor,
    forms: usize,
    search_budget: usize,
    seed: u64,
) -> Result<SuiteReport> {
    let start = Instant::now();
    if !desc.is_matrix() || desc.rank() < 3 {
        return Err(Error::InvalidInput(format!(
            "{desc}: the trace-form suite needs a matrix algebra of rank >= 3"
        )));
    }
    let mut rng = stream_rng(derive_seed(seed, 1), 0);
    let mut round = 0.0f64;
    let mut additivity = 0.0f64;
    for i in 0..forms.max(1) {
        let t = random::random_element(desc, &mut rng);
        let ps = gleason::random_primitives(desc, 2 * desc.dim(), &mut rng)?;
        let charge = Charge::tabulate(desc, ps, |p| t.inner(p))?;
        let fit = gleason::fit_trace_form(&charge)?;
        round = round.max(fit.form.t.max_abs_diff(&t));
        let rep = gleason::orthogonal_additivity_check(
            desc,
            |p| t.inner(p),
            200,
            derive_seed(seed, 100 + i as u64),
        )?;
        additivity = additivity.max(rep.max_deviation);
    }

    let scalar_defect = max_over::<1>(200, derive_seed(seed, 2), |rng| {
        let theta = rng.random_range(-3.0..3.0);
        let f = TraceForm::scalar(desc, theta)?;
        let x = ConePoint::new(random::random_exp_point(desc, rng, 0.5)?)?;
        let y = ConePoint::new(random::random_exp_point(desc, rng, 0.5)?)?;
        Ok([gleason::log_trace_residual(&f, &x, &y)?.abs()])
    })?[0];

    let mut refuted = 0usize;
    let mut cubic_agrees = 0usize;
    for i in 0..forms {
        let t = TraceForm::random_traceless(desc, &mut rng)?;
        let rep = gleason::refutation_search(
            &t,
            search_budget,
            REFUTATION_THRESHOLD,
            derive_seed(seed, 200 + i as u64),
        )?;
        if rep.found {
            refuted += 1;
        }
        let ps = gleason::random_primitives(desc, 2, &mut rng)?;
        let cubic = gleason::cubic_coefficient_identity(&t, &ps[0], &ps[1])?;
        if (cubic.abs() > 1e-10) == rep.found {
            cubic_agrees += 1;
        }
    }
    let scalar_cubic = {
        let f = TraceForm::scalar(desc, 1.7)?;
        let ps = gleason::random_primitives(desc, 2, &mut rng)?;
        gleason::cubic_coefficient_identity(&f, &ps[0], &ps[1])?.abs()
    };
    let checks = vec![
        Check::at_most("trace_form_round_trip", round, 1e-8),
        Check::at_most("trace_form_additivity", additivity, 1e-10),
        Check::at_most("log_trace_scalar_residual", scalar_defect, 1e-9),
        Check::at_least("non_scalar_forms_refuted", refuted as f64, forms as f64),
        Check::at_least(
            "cubic_coefficient_agrees",
            cubic_agrees as f64,
            forms as f64,
        ),
        Check::at_most("cubic_coefficient_scalar", scalar_cubic, 1e-12),
    ];
    Ok(SuiteReport::new("gleason", desc, seed, checks, start))
}

/// Descriptors exercised by `verify` when no rank is fixed.
pub fn default_descriptors() -> Vec<AlgebraDescriptor> {
    let mut out = Vec::new();
    for kind in [
        AlgebraKind::RealSym,
        AlgebraKind::ComplexHerm,
        AlgebraKind::QuatHerm,
    ] {
        for r in 3..=5 {
            out.push(AlgebraDescriptor::matrix(kind, r).expect("valid rank"));
        }
    }
    out.push(AlgebraDescriptor::lorentz(2).expect("valid"));
    out.push(AlgebraDescriptor::lorentz(5).expect("valid"));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_suites_pass() {
        for d in [
            AlgebraDescriptor::real_sym(3).unwrap(),
            AlgebraDescriptor::quat_herm(3).unwrap(),
            AlgebraDescriptor::lorentz(3).unwrap(),
        ] {
            for rep in [
                jordan_suite(d, 30, 1).unwrap(),
                quadratic_suite(d, 10, 1).unwrap(),
                funceq_suite(d, 2, 200, 1).unwrap(),
            ] {
                assert!(
                    rep.passed,
                    "{d} {}: {:?}",
                    rep.suite,
                    rep.failures().collect::<Vec<_>>()
                );
            }
        }
        let g = gleason_suite(AlgebraDescriptor::complex_herm(3).unwrap(), 2, 2000, 1).unwrap();
        assert!(g.passed, "{:?}", g.failures().collect::<Vec<_>>());
    }

    #[test]
    fn gleason_suite_rejects_small_rank() {
        assert!(gleason_suite(AlgebraDescriptor::real_sym(2).unwrap(), 1, 10, 0).is_err());
    }

    #[test]
    fn checks_fail_on_nan() {
        let m = max_over::<1>(3, 0, |_| Ok([f64::NAN])).unwrap();
        assert!(!Check::at_most("x", m[0], 1.0).passed);
    }
}
