use std::io::{BufRead, Write};

use rand::Rng;
use rand_distr::{Distribution, Gamma, StandardNormal};
use serde::Serialize;

use super::WishartParams;
use crate::algebra::{self, AlgebraDescriptor, Element, Quat, QuatMatrix};
use crate::error::{Error, Result};
use crate::par;
use crate::rng::{chunks, stream_rng};
use crate::SCHEMA_VERSION;

/// Triangular factor sampler for `γ_{p,e}`: `X = T T*` with `T` lower triangular,
/// `T_jj² ~ Gamma(p − (j−1)d/2)` and every real component of the sub-diagonal
/// entries `~ N(0, ½)`.
struct StandardSampler {
    desc: AlgebraDescriptor,
    diag: Vec<Gamma<f64>>,
}

impl StandardSampler {
    fn new(shape: f64, desc: AlgebraDescriptor) -> Result<Self> {
        if !desc.is_matrix() {
            return Err(Error::InvalidInput(
                "Wishart sampling is implemented for the matrix kinds only".into(),
            ));
        }
        let half_d = desc.peirce() as f64 / 2.0;
        let diag = (0..desc.rank())
            .map(|j| {
                Gamma::new(shape - j as f64 * half_d, 1.0)
                    .map_err(|e| Error::DomainViolation(format!("gamma shape: {e}")))
            })
            .collect::<Result<_>>()?;
        Ok(Self { desc, diag })
    }

    fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> Element {
        let (r, d) = (self.desc.rank(), self.desc.components());
        let sd = std::f64::consts::FRAC_1_SQRT_2;
        let mut t = QuatMatrix::zeros(r);
        for i in 0..r {
            t.set(i, i, Quat::real(self.diag[i].sample(rng).sqrt()));
            for j in 0..i {
                let mut c = [0.0; 4];
                for v in c.iter_mut().take(d) {
                    let z: f64 = rng.sample(StandardNormal);
                    *v = sd * z;
                }
                t.set(i, j, Quat::new(c[0], c[1], c[2], c[3]));
            }
        }
        // X_ik = Σ_{j ≤ min(i,k)} T_ij conj(T_kj)
        let mut x = QuatMatrix::zeros(r);
        for i in 0..r {
            for k in 0..=i {
                let mut acc = Quat::ZERO;
                for j in 0..=k {
                    acc = acc + t.get(i, j) * t.get(k, j).conj();
                }
                x.set(i, k, acc);
                x.set(k, i, acc.conj());
            }
        }
        Element::from_quat_matrix(self.desc, &x).expect("matrix kind")
    }
}

/// One draw from `γ_{p,e}`.
pub fn sample_standard<R: Rng + ?Sized>(
    shape: f64,
    desc: AlgebraDescriptor,
    rng: &mut R,
) -> Result<Element> {
    Ok(StandardSampler::new(shape, desc)?.draw(rng))
}

struct Scaler(Option<Element>);

impl Scaler {
    fn new(params: &WishartParams) -> Result<Self> {
        let a = params.scale().value();
        if *a == Element::identity(*a.descriptor()) {
            Ok(Self(None))
        } else {
            Ok(Self(Some(algebra::elt_inv_sqrt(a)?)))
        }
    }

    fn apply(&self, x: Element) -> Element {
        match &self.0 {
            None => x,
            Some(w) => w.quad_apply_unchecked(&x),
        }
    }
}

/// `n` draws from `γ_{p,a}` using the caller's generator, sequentially.
pub fn sample_with<R: Rng + ?Sized>(
    params: &WishartParams,
    n: usize,
    rng: &mut R,
) -> Result<Vec<Element>> {
    let sampler = StandardSampler::new(params.shape(), *params.descriptor())?;
    let scaler = Scaler::new(params)?;
    Ok((0..n).map(|_| scaler.apply(sampler.draw(rng))).collect())
}

/// A reproducible batch of draws from `γ_{p,a}`.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleBatch {
    pub params: WishartParams,
    pub seed: u64,
    pub samples: Vec<Element>,
}

/// `n` draws from `γ_{p,a}`. Chunk `c` of the batch uses stream `(seed, c)`, so the
/// result depends only on `seed` regardless of how chunks are scheduled.
pub fn sample(params: &WishartParams, n: usize, seed: u64) -> Result<SampleBatch> {
    let sampler = StandardSampler::new(params.shape(), *params.descriptor())?;
    let scaler = Scaler::new(params)?;
    let parts = par::map_slice(&chunks(n), |&(c, _, len)| {
        let mut rng = stream_rng(seed, c as u64);
        (0..len)
            .map(|_| scaler.apply(sampler.draw(&mut rng)))
            .collect::<Vec<_>>()
    });
    Ok(SampleBatch {
        params: params.clone(),
        seed,
        samples: parts.into_iter().flatten().collect(),
    })
}

#[derive(Serialize)]
struct BatchHeader<'a> {
    schema_version: u32,
    descriptor: &'a AlgebraDescriptor,
    params: &'a WishartParams,
    seed: u64,
    n: usize,
    columns: Vec<String>,
}

impl SampleBatch {
    pub fn descriptor(&self) -> &AlgebraDescriptor {
        self.params.descriptor()
    }

    /// One header line of coordinate labels, then one row per sample.
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "{}", self.descriptor().coordinate_labels().join(","))?;
        for s in &self.samples {
            let row: Vec<String> = s.coords().iter().map(|v| format!("{v:?}")).collect();
            writeln!(w, "{}", row.join(","))?;
        }
        Ok(())
    }

    pub fn header_json(&self) -> Result<String> {
        let h = BatchHeader {
            schema_version: SCHEMA_VERSION,
            descriptor: self.descriptor(),
            params: &self.params,
            seed: self.seed,
            n: self.samples.len(),
            columns: self.descriptor().coordinate_labels(),
        };
        Ok(serde_json::to_string_pretty(&h)?)
    }
}

/// Reads rows written by [`SampleBatch::write_csv`].
pub fn read_csv<R: BufRead>(desc: AlgebraDescriptor, reader: R) -> Result<Vec<Element>> {
    let mut lines = reader.lines();
    let header = lines
        .next()
        .ok_or_else(|| Error::InvalidInput("empty CSV".into()))??;
    if header.trim() != desc.coordinate_labels().join(",") {
        return Err(Error::InvalidInput(format!(
            "CSV header does not match the {desc} coordinate layout"
        )));
    }
    let mut out = Vec::new();
    for (lineno, line) in lines.enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let coords = line
            .split(',')
            .map(|f| f.trim().parse::<f64>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|e| Error::InvalidInput(format!("row {}: {e}", lineno + 2)))?;
        out.push(Element::new(desc, coords)?);
    }
    Ok(out)
}
