use std::time::Instant;

use serde::{Deserialize, Serialize};

use super::dcor::{pearson, permutation_test};
use crate::algebra::{self, AlgebraDescriptor, Element};
use crate::cone::{psi_raw, ConePoint};
use crate::error::{ensure_same, Error, Result};
use crate::par;
use crate::rng::derive_seed;
use crate::wishart::{sample, WishartParams};
use crate::SCHEMA_VERSION;

/// Smallest sample size accepted by [`independence_test`].
pub const MIN_INDEPENDENCE_N: usize = 500;
/// Smallest number of permutation replicates accepted.
pub const MIN_PERMUTATIONS: usize = 200;

/// How `U` and `V` are paired before testing.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Pairing {
    /// `(U, V) = ψ(X, Y)` from the same draw.
    Joint,
    /// `V` from one draw, `U` from an independent one.
    Shuffled,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IndependenceConfig {
    pub descriptor: AlgebraDescriptor,
    pub p1: f64,
    pub p2: f64,
    pub scale_x: ConePoint,
    pub scale_y: ConePoint,
    pub n: usize,
    pub alpha: f64,
    pub permutations: usize,
    pub seed: u64,
    pub pairing: Pairing,
}

impl IndependenceConfig {
    pub fn same_scale(
        descriptor: AlgebraDescriptor,
        p1: f64,
        p2: f64,
        n: usize,
        seed: u64,
    ) -> Self {
        Self {
            descriptor,
            p1,
            p2,
            scale_x: ConePoint::identity(descriptor),
            scale_y: ConePoint::identity(descriptor),
            n,
            alpha: 0.01,
            permutations: MIN_PERMUTATIONS,
            seed,
            pairing: Pairing::Joint,
        }
    }
}

/// Pearson correlations between `(log det U, tr U)` and `(log det V, tr V)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PreScreen {
    pub logdet_u_logdet_v: f64,
    pub logdet_u_trace_v: f64,
    pub trace_u_logdet_v: f64,
    pub trace_u_trace_v: f64,
}

impl PreScreen {
    pub fn max_abs(&self) -> f64 {
        [
            self.logdet_u_logdet_v,
            self.logdet_u_trace_v,
            self.trace_u_logdet_v,
            self.trace_u_trace_v,
        ]
        .iter()
        .fold(0.0f64, |m, v| m.max(v.abs()))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IndependenceReport {
    pub schema_version: u32,
    pub config: IndependenceConfig,
    pub dcor: f64,
    pub dcov2: f64,
    pub exceedances: usize,
    pub p_value: f64,
    pub reject: bool,
    pub prescreen: PreScreen,
    #[serde(skip)]
    pub replicates: Vec<f64>,
    #[serde(skip)]
    pub runtime_secs: f64,
}

fn quotients(x: &[Element], y: &[Element]) -> Result<Vec<(Element, Element)>> {
    let pairs: Vec<(&Element, &Element)> = x.iter().zip(y).collect();
    par::map_slice(&pairs, |(a, b)| {
        psi_raw(a, b).map(|(u, v)| (u, v.into_element()))
    })
    .into_iter()
    .collect()
}

/// Draws `X ~ γ_{p₁,a}`, `Y ~ γ_{p₂,b}`, forms `(U, V) = ψ(X, Y)` and tests
/// independence of the flattened coordinates with distance correlation.
pub fn independence_test(cfg: &IndependenceConfig) -> Result<IndependenceReport> {
    let start = Instant::now();
    let desc = cfg.descriptor;
    ensure_same(&desc, cfg.scale_x.value().descriptor())?;
    ensure_same(&desc, cfg.scale_y.value().descriptor())?;
    if cfg.n < MIN_INDEPENDENCE_N {
        return Err(Error::InvalidInput(format!(
            "independence test needs n >= {MIN_INDEPENDENCE_N}, got {}",
            cfg.n
        )));
    }
    if cfg.permutations < MIN_PERMUTATIONS {
        return Err(Error::InvalidInput(format!(
            "need at least {MIN_PERMUTATIONS} permutations, got {}",
            cfg.permutations
        )));
    }
    if !(cfg.alpha > 0.0 && cfg.alpha < 1.0) {
        return Err(Error::InvalidInput(format!(
            "alpha {} not in (0, 1)",
            cfg.alpha
        )));
    }
    let px = WishartParams::new(cfg.p1, cfg.scale_x.clone())?;
    let py = WishartParams::new(cfg.p2, cfg.scale_y.clone())?;
    let xs = sample(&px, cfg.n, derive_seed(cfg.seed, 1))?.samples;
    let ys = sample(&py, cfg.n, derive_seed(cfg.seed, 2))?.samples;
    let joint = quotients(&xs, &ys)?;
    let (us, vs): (Vec<Element>, Vec<Element>) = match cfg.pairing {
        Pairing::Joint => joint.into_iter().unzip(),
        Pairing::Shuffled => {
            let xs2 = sample(&px, cfg.n, derive_seed(cfg.seed, 4))?.samples;
            let ys2 = sample(&py, cfg.n, derive_seed(cfg.seed, 5))?.samples;
            let other = quotients(&xs2, &ys2)?;
            (
                other.into_iter().map(|p| p.0).collect(),
                joint.into_iter().map(|p| p.1).collect(),
            )
        }
    };
    let flat = |v: &[Element]| v.iter().map(|e| e.coords().to_vec()).collect::<Vec<_>>();
    let test = permutation_test(
        &flat(&us),
        &flat(&vs),
        cfg.permutations,
        derive_seed(cfg.seed, 3),
    )?;
    let stats = |v: &[Element]| -> Result<(Vec<f64>, Vec<f64>)> {
        let ld = v.iter().map(algebra::log_det).collect::<Result<Vec<_>>>()?;
        Ok((ld, v.iter().map(|e| e.trace()).collect()))
    };
    let (ldu, tru) = stats(&us)?;
    let (ldv, trv) = stats(&vs)?;
    let prescreen = PreScreen {
        logdet_u_logdet_v: pearson(&ldu, &ldv),
        logdet_u_trace_v: pearson(&ldu, &trv),
        trace_u_logdet_v: pearson(&tru, &ldv),
        trace_u_trace_v: pearson(&tru, &trv),
    };
    Ok(IndependenceReport {
        schema_version: SCHEMA_VERSION,
        config: cfg.clone(),
        dcor: test.dcor,
        dcov2: test.dcov2,
        exceedances: test.exceedances,
        p_value: test.p_value,
        reject: test.p_value < cfg.alpha,
        prescreen,
        replicates: test.replicates,
        runtime_secs: start.elapsed().as_secs_f64(),
    })
}

impl IndependenceReport {
    /// `statistic` row followed by one row per permutation replicate.
    pub fn replicates_csv(&self) -> String {
        let mut s = String::from("kind,dcov2\n");
        s.push_str(&format!("observed,{:?}\n", self.dcov2));
        for r in &self.replicates {
            s.push_str(&format!("permuted,{r:?}\n"));
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_same_scale_run() {
        let d = AlgebraDescriptor::real_sym(3).unwrap();
        let cfg = IndependenceConfig::same_scale(d, 2.0, 3.0, 500, 3);
        let rep = independence_test(&cfg).unwrap();
        assert!((0.0..=1.0).contains(&rep.p_value));
        assert_eq!(rep.reject, rep.p_value < cfg.alpha);
        assert_eq!(rep.replicates.len(), 200);
        let again = independence_test(&cfg).unwrap();
        assert_eq!(
            serde_json::to_string(&rep).unwrap(),
            serde_json::to_string(&again).unwrap()
        );
        assert!(rep.replicates_csv().lines().count() == 202);
    }

    #[test]
    fn preconditions() {
        let d = AlgebraDescriptor::real_sym(3).unwrap();
        let mut cfg = IndependenceConfig::same_scale(d, 2.0, 3.0, 100, 3);
        assert!(independence_test(&cfg).is_err());
        cfg.n = 500;
        cfg.permutations = 10;
        assert!(independence_test(&cfg).is_err());
        cfg.permutations = 200;
        cfg.p1 = 0.5;
        assert!(independence_test(&cfg).is_err());
    }
}
