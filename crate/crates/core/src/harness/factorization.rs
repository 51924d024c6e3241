use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::cone::ConePoint;
use crate::error::{ensure_same, Error, Result};
use crate::funceq::{wishart_to_ob, ObSolution, ResidualStats, SweepPair};
use crate::par;
use crate::rng::derive_seed;
use crate::wishart::{sample, WishartParams};
use crate::{AlgebraDescriptor, SCHEMA_VERSION};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FactorizationConfig {
    pub descriptor: AlgebraDescriptor,
    pub p1: f64,
    pub p2: f64,
    pub scale: ConePoint,
    pub n: usize,
    pub seed: u64,
    /// Added to the `dim/r` exponent of `det(x+y)`; non-zero values break the identity.
    pub exponent_shift: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FactorizationReport {
    pub schema_version: u32,
    pub config: FactorizationConfig,
    pub solution: ObSolution,
    pub residual: ResidualStats,
    #[serde(skip)]
    pub runtime_secs: f64,
}

/// Evaluates `a(x) + b(y) − c(x+y) − d(u)` for the solution induced by the two Wishart
/// laws, at pairs drawn from them. With `exponent_shift = δ` the `c`-branch uses the
/// exponent `dim/r + δ` in place of `dim/r`, which adds `δ log det(x+y)`.
pub fn factorization_check(cfg: &FactorizationConfig) -> Result<FactorizationReport> {
    let start = Instant::now();
    ensure_same(&cfg.descriptor, cfg.scale.value().descriptor())?;
    if cfg.n < 2 {
        return Err(Error::InsufficientData("need at least two pairs".into()));
    }
    let p1 = WishartParams::new(cfg.p1, cfg.scale.clone())?;
    let p2 = WishartParams::new(cfg.p2, cfg.scale.clone())?;
    let sol = wishart_to_ob(&p1, &p2)?;
    let xs = sample(&p1, cfg.n, derive_seed(cfg.seed, 1))?.samples;
    let ys = sample(&p2, cfg.n, derive_seed(cfg.seed, 2))?.samples;
    let pairs: Vec<(usize, usize)> = (0..cfg.n).map(|i| (i, i)).collect();
    let values = par::map_slice(&pairs, |&(i, _)| -> Result<f64> {
        let p = SweepPair::new(xs[i].clone(), ys[i].clone())?;
        let a = sol.lambda.inner(&p.x) + sol.k1 * p.log_det_x + sol.c1;
        let b = sol.lambda.inner(&p.y) + sol.k2 * p.log_det_y + sol.c2;
        let c =
            sol.lambda.inner(&p.v) + (sol.k1 + sol.k2 - cfg.exponent_shift) * p.log_det_v + sol.c3;
        let d = sol.k1 * p.log_det_u + sol.k2 * p.log_det_e_minus_u + sol.c4;
        Ok(a + b - c - d)
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    Ok(FactorizationReport {
        schema_version: SCHEMA_VERSION,
        config: cfg.clone(),
        solution: sol,
        residual: ResidualStats::from_values(&values),
        runtime_secs: start.elapsed().as_secs_f64(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(desc: AlgebraDescriptor, p: f64, shift: f64) -> FactorizationConfig {
        FactorizationConfig {
            descriptor: desc,
            p1: p,
            p2: p,
            scale: ConePoint::identity(desc),
            n: 2000,
            seed: 1,
            exponent_shift: shift,
        }
    }

    #[test]
    fn scalar_reduction() {
        let d = AlgebraDescriptor::real_sym(1).unwrap();
        let rep = factorization_check(&cfg(d, 1.5, 0.0)).unwrap();
        assert!(rep.residual.spread() < 1e-12, "{:?}", rep.residual);
        assert!(rep.residual.mean.abs() < 1e-12);
    }

    #[test]
    fn constancy_and_negative_control() {
        let d = AlgebraDescriptor::complex_herm(3).unwrap();
        let good = factorization_check(&cfg(d, 4.0, 0.0)).unwrap();
        assert!(good.residual.spread() < 1e-9);
        let bad = factorization_check(&cfg(d, 4.0, 0.1)).unwrap();
        assert!(bad.residual.stddev > 0.01);
    }
}
