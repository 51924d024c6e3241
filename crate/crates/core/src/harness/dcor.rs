//! Distance covariance with permutation calibration.

use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::par;
use crate::rng::stream_rng;

/// Double-centered Euclidean distance matrix, stored row-major.
pub struct CenteredDistances {
    n: usize,
    data: Vec<f64>,
}

impl CenteredDistances {
    pub fn new(rows: &[Vec<f64>]) -> Self {
        let n = rows.len();
        let dist_rows = par::map_range(n, |i| {
            rows.iter()
                .map(|r| {
                    r.iter()
                        .zip(&rows[i])
                        .map(|(a, b)| (a - b) * (a - b))
                        .sum::<f64>()
                        .sqrt()
                })
                .collect::<Vec<f64>>()
        });
        let means: Vec<f64> = dist_rows
            .iter()
            .map(|r| r.iter().sum::<f64>() / n as f64)
            .collect();
        let grand = means.iter().sum::<f64>() / n as f64;
        let mut data = Vec::with_capacity(n * n);
        for (i, row) in dist_rows.iter().enumerate() {
            for (j, d) in row.iter().enumerate() {
                data.push(d - means[i] - means[j] + grand);
            }
        }
        Self { n, data }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }
}

/// `dCov²(A, B) = n⁻² Σ A_ij B_ij`.
pub fn dcov2(a: &CenteredDistances, b: &CenteredDistances) -> f64 {
    dcov2_permuted(a, b, None)
}

/// `n⁻² Σ A_ij B_{π(i)π(j)}`.
fn dcov2_permuted(a: &CenteredDistances, b: &CenteredDistances, perm: Option<&[usize]>) -> f64 {
    let n = a.n;
    let mut total = 0.0;
    for i in 0..n {
        let ar = a.row(i);
        let s: f64 = match perm {
            None => ar.iter().zip(b.row(i)).map(|(x, y)| x * y).sum(),
            Some(p) => {
                let br = b.row(p[i]);
                ar.iter().zip(p).map(|(x, &pj)| x * br[pj]).sum()
            }
        };
        total += s;
    }
    total / (n * n) as f64
}

/// Distance correlation and its permutation p-value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PermutationTest {
    pub dcor: f64,
    pub dcov2: f64,
    pub permutations: usize,
    /// Number of permuted statistics at least as large as the observed one.
    pub exceedances: usize,
    /// `(1 + exceedances) / (1 + permutations)`.
    pub p_value: f64,
    #[serde(skip)]
    pub replicates: Vec<f64>,
}

/// Permutation test of independence between paired rows of `x` and `y`.
/// Replicate `k` shuffles with stream `(seed, k)`.
pub fn permutation_test(
    x: &[Vec<f64>],
    y: &[Vec<f64>],
    permutations: usize,
    seed: u64,
) -> Result<PermutationTest> {
    if x.len() != y.len() {
        return Err(Error::InvalidInput(format!(
            "paired samples differ in length: {} vs {}",
            x.len(),
            y.len()
        )));
    }
    if x.len() < 2 {
        return Err(Error::InsufficientData("need at least two pairs".into()));
    }
    let a = CenteredDistances::new(x);
    let b = CenteredDistances::new(y);
    let obs = dcov2(&a, &b);
    let var = (dcov2(&a, &a) * dcov2(&b, &b)).sqrt();
    let dcor = if var > 0.0 {
        (obs / var).max(0.0).sqrt()
    } else {
        0.0
    };
    let n = a.len();
    let replicates = par::map_range(permutations, |k| {
        let mut rng = stream_rng(seed, k as u64);
        let mut perm: Vec<usize> = (0..n).collect();
        perm.shuffle(&mut rng);
        dcov2_permuted(&a, &b, Some(&perm))
    });
    let exceedances = replicates.iter().filter(|&&s| s >= obs).count();
    Ok(PermutationTest {
        dcor,
        dcov2: obs,
        permutations,
        exceedances,
        p_value: (1 + exceedances) as f64 / (1 + permutations) as f64,
        replicates,
    })
}

/// Pearson correlation; `0` for a constant input.
pub fn pearson(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let (mx, my) = (x.iter().sum::<f64>() / n, y.iter().sum::<f64>() / n);
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        sxy += (a - mx) * (b - my);
        sxx += (a - mx) * (a - mx);
        syy += (b - my) * (b - my);
    }
    if sxx == 0.0 || syy == 0.0 {
        0.0
    } else {
        sxy / (sxx * syy).sqrt()
    }
}
