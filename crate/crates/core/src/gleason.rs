//! Charges on the idempotents of a matrix algebra and their trace representations
//! `m(p) = Trace(T·p)`.
//!
//! Idempotents of the Jordan algebra stand in for the closed subspaces of the
//! underlying Hilbert space. Only finite charge values are supported.

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::algebra::{self, random, to_basis_coords, AlgebraDescriptor, Element};
use crate::cone::ConePoint;
use crate::error::{ensure_same, Error, Result};
use crate::par;
use crate::rng::{chunks, stream_rng};

/// Idempotency tolerance used when validating charge arguments.
pub const IDEMPOTENT_TOL: f64 = 1e-9;

/// Threshold on `|log-trace residual|` counted as a refutation.
pub const REFUTATION_THRESHOLD: f64 = 0.01;

fn require_matrix(desc: &AlgebraDescriptor) -> Result<()> {
    if !desc.is_matrix() {
        return Err(Error::InvalidInput(format!(
            "{desc}: trace forms need a matrix algebra"
        )));
    }
    Ok(())
}

fn require_gleason_rank(desc: &AlgebraDescriptor) -> Result<()> {
    require_matrix(desc)?;
    if desc.rank() < 3 {
        return Err(Error::InvalidInput(format!(
            "{desc}: trace representations need rank at least 3"
        )));
    }
    Ok(())
}

fn check_idempotent(p: &Element) -> Result<()> {
    let defect = p.square().max_abs_diff(p);
    if defect > IDEMPOTENT_TOL * p.norm().max(1.0) {
        return Err(Error::NotIdempotent { defect });
    }
    Ok(())
}

/// A Hermitian `T` inducing the charge `p ↦ Trace(T·p)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceForm {
    pub t: Element,
}

impl TraceForm {
    pub fn new(t: Element) -> Result<Self> {
        require_matrix(t.descriptor())?;
        Ok(Self { t })
    }

    pub fn scalar(desc: AlgebraDescriptor, theta: f64) -> Result<Self> {
        Self::new(Element::identity(desc) * theta)
    }

    /// Random traceless `T`; non-scalar with probability one.
    pub fn random_traceless<R: Rng + ?Sized>(desc: AlgebraDescriptor, rng: &mut R) -> Result<Self> {
        let g = random::random_element(desc, rng);
        let shift = -g.trace() / desc.rank() as f64;
        Self::new(g.shift(shift))
    }

    pub fn descriptor(&self) -> &AlgebraDescriptor {
        self.t.descriptor()
    }

    /// Distance from the nearest scalar form `ϑe`.
    pub fn non_scalar_part(&self) -> f64 {
        let desc = self.descriptor();
        let theta = self.t.trace() / desc.rank() as f64;
        self.t.shift(-theta).norm()
    }
}

/// `Trace(T·p)` for an idempotent `p`.
pub fn trace_form_eval(form: &TraceForm, p: &Element) -> Result<f64> {
    ensure_same(form.descriptor(), p.descriptor())?;
    check_idempotent(p)?;
    Ok(form.t.inner(p))
}

/// Tabulated charge values on a finite set of idempotents.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Charge {
    descriptor: AlgebraDescriptor,
    entries: Vec<(Element, f64)>,
}

impl Charge {
    pub fn new(descriptor: AlgebraDescriptor) -> Result<Self> {
        require_matrix(&descriptor)?;
        Ok(Self {
            descriptor,
            entries: Vec::new(),
        })
    }

    pub fn tabulate(
        descriptor: AlgebraDescriptor,
        idempotents: impl IntoIterator<Item = Element>,
        f: impl Fn(&Element) -> f64,
    ) -> Result<Self> {
        let mut c = Self::new(descriptor)?;
        for p in idempotents {
            let v = f(&p);
            c.push(p, v)?;
        }
        Ok(c)
    }

    /// Adds `m(p) = value`. Values must be finite and `m(0) = 0`.
    pub fn push(&mut self, p: Element, value: f64) -> Result<()> {
        ensure_same(&self.descriptor, p.descriptor())?;
        check_idempotent(&p)?;
        if !value.is_finite() {
            return Err(Error::InvalidInput("charge values must be finite".into()));
        }
        if p.trace().abs() < 0.5 && value != 0.0 {
            return Err(Error::InvalidInput("a charge vanishes on 0".into()));
        }
        self.entries.push((p, value));
        Ok(())
    }

    pub fn descriptor(&self) -> &AlgebraDescriptor {
        &self.descriptor
    }

    pub fn entries(&self) -> &[(Element, f64)] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Least-squares trace form with the largest absolute residual on the table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceFit {
    pub form: TraceForm,
    pub max_residual: f64,
    pub rank: usize,
}

/// Fits `T` from the tabulated values by least squares in orthonormal coordinates.
pub fn fit_trace_form(charge: &Charge) -> Result<TraceFit> {
    let desc = *charge.descriptor();
    require_gleason_rank(&desc)?;
    let dim = desc.dim();
    if charge.len() < dim {
        return Err(Error::InsufficientData(format!(
            "{} tabulated idempotents, need at least {dim}",
            charge.len()
        )));
    }
    let rows: Vec<Vec<f64>> = charge
        .entries
        .iter()
        .map(|(p, _)| to_basis_coords(p))
        .collect();
    let a = DMatrix::from_fn(rows.len(), dim, |i, j| rows[i][j]);
    let b = DVector::from_iterator(rows.len(), charge.entries.iter().map(|e| e.1));
    let svd = a.clone().svd(true, true);
    let eps = 1e-10 * svd.singular_values.max();
    let rank = svd.rank(eps);
    if rank < dim {
        return Err(Error::InsufficientData(format!(
            "tabulated idempotents span {rank} of {dim} dimensions"
        )));
    }
    let coef = svd
        .solve(&b, eps)
        .map_err(|e| Error::NumericalFailure(e.to_string()))?;
    let max_residual = (&a * &coef - &b).amax();
    let t = algebra::from_basis_coords(desc, coef.as_slice())?;
    Ok(TraceFit {
        form: TraceForm { t },
        max_residual,
        rank,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AdditivityReport {
    pub trials: usize,
    /// `max |f(p) + f(q) − f(p + q)|` over the sampled orthogonal pairs.
    pub max_deviation: f64,
}

/// Samples orthogonal idempotents `p`, `q` (disjoint nonempty groups of a random
/// frame) and measures the additivity defect of `f`.
pub fn orthogonal_additivity_check<F>(
    desc: AlgebraDescriptor,
    f: F,
    trials: usize,
    seed: u64,
) -> Result<AdditivityReport>
where
    F: Fn(&Element) -> f64 + Sync,
{
    require_gleason_rank(&desc)?;
    let r = desc.rank();
    let parts = par::map_slice(&chunks(trials), |&(c, _, len)| -> Result<f64> {
        let mut rng = stream_rng(seed, c as u64);
        let mut worst = 0.0f64;
        for _ in 0..len {
            let frame = random::random_idempotent_system(desc, &mut rng)?;
            // each member goes to p, q or neither; p and q nonempty
            let mut labels: Vec<u8> = (0..r).map(|_| rng.random_range(0..3u8)).collect();
            labels[0] = 0;
            labels[1] = 1;
            let pick = |which: u8| {
                frame
                    .iter()
                    .zip(&labels)
                    .filter(|(_, &l)| l == which)
                    .fold(Element::zero(desc), |acc, (c, _)| &acc + c)
            };
            let (p, q) = (pick(0), pick(1));
            let dev = f(&p) + f(&q) - f(&(&p + &q));
            worst = worst.max(dev.abs());
        }
        Ok(worst)
    });
    let mut max_deviation = 0.0f64;
    for w in parts {
        max_deviation = max_deviation.max(w?);
    }
    Ok(AdditivityReport {
        trials,
        max_deviation,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SemiboundedReport {
    pub min: f64,
    pub argmin: Element,
    /// `(prefix length, minimum over the prefix)` at `N/100`, `N/10` and `N`.
    pub prefix_minima: Vec<(usize, f64)>,
    pub bounded: bool,
}

/// Minimum of a charge over its tabulated primitive idempotents. The table is read
/// in order and judged unbounded below when the running minimum is negative and at
/// least doubles in magnitude with every tenfold increase of the prefix.
pub fn semibounded_check(charge: &Charge) -> Result<SemiboundedReport> {
    let primitive: Vec<&(Element, f64)> = charge
        .entries
        .iter()
        .filter(|(p, _)| (p.trace() - 1.0).abs() < 1e-8)
        .collect();
    let n = primitive.len();
    if n == 0 {
        return Err(Error::InsufficientData(
            "no primitive idempotents tabulated".into(),
        ));
    }
    let mut running = Vec::with_capacity(n);
    let mut best = 0usize;
    for (i, (_, v)) in primitive.iter().enumerate() {
        if *v < primitive[best].1 {
            best = i;
        }
        running.push(primitive[best].1);
    }
    let marks: Vec<usize> = [n / 100, n / 10, n]
        .into_iter()
        .filter(|&m| m > 0)
        .collect();
    let prefix_minima: Vec<(usize, f64)> = marks.iter().map(|&m| (m, running[m - 1])).collect();
    let growing = prefix_minima.len() == 3
        && prefix_minima
            .windows(2)
            .all(|w| w[1].1 < 0.0 && w[1].1.abs() >= 2.0 * w[0].1.abs().max(f64::MIN_POSITIVE));
    Ok(SemiboundedReport {
        min: primitive[best].1,
        argmin: primitive[best].0.clone(),
        prefix_minima,
        bounded: !growing,
    })
}

/// Random rank-one projectors `vv*` with `v` uniform on the unit sphere.
pub fn random_primitives<R: Rng + ?Sized>(
    desc: AlgebraDescriptor,
    n: usize,
    rng: &mut R,
) -> Result<Vec<Element>> {
    require_matrix(&desc)?;
    Ok((0..n)
        .map(|_| {
            let v = random::random_unit_vector(desc, rng);
            random::rank_one_projector(desc, &v)
        })
        .collect())
}

/// `Trace(T log x) + 2 Trace(T log y) − Trace(T log(P(y)x))`.
pub fn log_trace_residual(form: &TraceForm, x: &ConePoint, y: &ConePoint) -> Result<f64> {
    let (x, y) = (x.value(), y.value());
    ensure_same(form.descriptor(), x.descriptor())?;
    ensure_same(x.descriptor(), y.descriptor())?;
    let lx = algebra::elt_log(x)?;
    let ly = algebra::elt_log(y)?;
    let lyxy = algebra::elt_log(&y.quad_apply_unchecked(x))?;
    Ok(form.t.inner(&lx) + 2.0 * form.t.inner(&ly) - form.t.inner(&lyxy))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RefutationReport {
    pub budget: usize,
    pub searched: usize,
    pub max_abs_residual: f64,
    pub threshold: f64,
    pub found: bool,
    pub witness: Option<(Element, Element)>,
}

/// Searches `x = exp(G)`, `y = exp(G')` with Gaussian `G, G'` for a pair with
/// `|log-trace residual| > threshold`. Chunks run in order of their stream index and the
/// search stops after the first chunk containing a witness.
pub fn refutation_search(
    form: &TraceForm,
    budget: usize,
    threshold: f64,
    seed: u64,
) -> Result<RefutationReport> {
    let desc = *form.descriptor();
    let all = chunks(budget);
    let width = par::current_threads().max(1);
    let mut searched = 0;
    let mut max_abs = 0.0f64;
    for group in all.chunks(width) {
        let results = par::map_slice(
            group,
            |&(c, _, len)| -> Result<Vec<(f64, Element, Element)>> {
                let mut rng = stream_rng(seed, c as u64);
                (0..len)
                    .map(|_| {
                        let x = random::random_exp_point(desc, &mut rng, 1.0)?;
                        let y = random::random_exp_point(desc, &mut rng, 1.0)?;
                        let res = log_trace_residual(
                            form,
                            &ConePoint::new(x.clone())?,
                            &ConePoint::new(y.clone())?,
                        )?;
                        Ok((res, x, y))
                    })
                    .collect()
            },
        );
        for chunk in results {
            for (res, x, y) in chunk? {
                searched += 1;
                max_abs = max_abs.max(res.abs());
                if res.abs() > threshold {
                    return Ok(RefutationReport {
                        budget,
                        searched,
                        max_abs_residual: max_abs,
                        threshold,
                        found: true,
                        witness: Some((x, y)),
                    });
                }
            }
        }
    }
    Ok(RefutationReport {
        budget,
        searched,
        max_abs_residual: max_abs,
        threshold,
        found: false,
        witness: None,
    })
}

/// `Trace(T·p·q·p) − Trace(T·q·p·q)`.
pub fn cubic_coefficient_identity(form: &TraceForm, p: &Element, q: &Element) -> Result<f64> {
    ensure_same(form.descriptor(), p.descriptor())?;
    ensure_same(p.descriptor(), q.descriptor())?;
    Ok(form.t.inner(&p.quad_apply_unchecked(q)) - form.t.inner(&q.quad_apply_unchecked(p)))
}
