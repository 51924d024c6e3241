//! Acceptance run: one PASS/FAIL line per criterion, non-zero exit if any fails.

use std::path::Path;
use std::process::Command;
use std::time::Instant;

use statrs::distribution::{Continuous, ContinuousCDF, Gamma};
use statrs::function::gamma::digamma;
use symcone::cone::ConePoint;
use symcone::harness::{
    factorization_check, independence_test, parameter_recovery, FactorizationConfig,
    IndependenceConfig,
};
use symcone::verify::{self, SuiteReport};
use symcone::wishart::{laplace_transform, log_density, sample, WishartParams};
use symcone::{AlgebraDescriptor, Element};

type Criterion = (&'static str, fn() -> Outcome);

struct Outcome {
    passed: bool,
    detail: String,
}

fn suites(reports: &[SuiteReport]) -> Outcome {
    let failed: Vec<String> = reports
        .iter()
        .flat_map(|r| {
            r.failures().map(move |c| {
                format!(
                    "{} {} {}={:e} (tol {:e})",
                    r.descriptor, r.suite, c.name, c.measured, c.tolerance
                )
            })
        })
        .collect();
    let checks: usize = reports.iter().map(|r| r.checks.len()).sum();
    Outcome {
        passed: failed.is_empty(),
        detail: if failed.is_empty() {
            format!("{checks} checks over {} suites", reports.len())
        } else {
            failed.join("; ")
        },
    }
}

fn matrix_kinds(ranks: &[usize]) -> Vec<AlgebraDescriptor> {
    let mut out = Vec::new();
    for &r in ranks {
        out.push(AlgebraDescriptor::real_sym(r).unwrap());
        out.push(AlgebraDescriptor::complex_herm(r).unwrap());
        out.push(AlgebraDescriptor::quat_herm(r).unwrap());
    }
    out
}

fn criterion_1() -> Outcome {
    let reports: Vec<_> = verify::default_descriptors()
        .into_iter()
        .map(|d| verify::jordan_suite(d, 1000, 1).unwrap())
        .collect();
    suites(&reports)
}

fn criterion_2() -> Outcome {
    let mut descs = matrix_kinds(&[3]);
    descs.push(AlgebraDescriptor::lorentz(2).unwrap());
    let reports: Vec<_> = descs
        .into_iter()
        .map(|d| verify::quadratic_suite(d, 1000, 2).unwrap())
        .collect();
    suites(&reports)
}

fn criterion_3() -> Outcome {
    let configs = [
        (AlgebraDescriptor::real_sym(3).unwrap(), 2.0),
        (AlgebraDescriptor::real_sym(4).unwrap(), 3.5),
        (AlgebraDescriptor::complex_herm(3).unwrap(), 3.0),
    ];
    let mut reports = Vec::new();
    for (i, (d, p)) in configs.into_iter().enumerate() {
        let random_scale = {
            let mut rng = symcone::rng::stream_rng(99, i as u64);
            ConePoint::new(symcone::algebra::random::random_exp_point(d, &mut rng, 0.4).unwrap())
                .unwrap()
        };
        for scale in [ConePoint::identity(d), random_scale] {
            let params = WishartParams::new(p, scale).unwrap();
            reports.push(verify::laplace_suite(&params, 100_000, 5, 3 + i as u64).unwrap());
        }
    }
    suites(&reports)
}

fn criterion_4() -> Outcome {
    let reports: Vec<_> = matrix_kinds(&[3, 4])
        .into_iter()
        .map(|d| verify::funceq_suite(d, 20, 10_000, 4).unwrap())
        .collect();
    suites(&reports)
}

fn criterion_5() -> Outcome {
    let d = AlgebraDescriptor::real_sym(3).unwrap();
    let cfg = |shift| FactorizationConfig {
        descriptor: d,
        p1: 3.0,
        p2: 3.0,
        scale: ConePoint::identity(d),
        n: 10_000,
        seed: 5,
        exponent_shift: shift,
    };
    let exact = factorization_check(&cfg(0.0)).unwrap().residual;
    let control = factorization_check(&cfg(0.1)).unwrap().residual;
    Outcome {
        passed: exact.spread() < 1e-9 && control.stddev > 0.01,
        detail: format!(
            "spread {:e} (< 1e-9), control stddev {:e} (> 0.01)",
            exact.spread(),
            control.stddev
        ),
    }
}

fn criterion_6() -> Outcome {
    let d = AlgebraDescriptor::real_sym(3).unwrap();
    let runs = 100;
    let mut same_rejects = 0;
    let mut mismatch_rejects = 0;
    for seed in 0..runs {
        let cfg = IndependenceConfig::same_scale(d, 2.0, 3.0, 2000, 1000 + seed);
        if independence_test(&cfg).unwrap().reject {
            same_rejects += 1;
        }
        let mut cfg = IndependenceConfig::same_scale(d, 2.0, 3.0, 2000, 5000 + seed);
        cfg.scale_y =
            ConePoint::new(Element::from_real_diagonal(d, &[1.0, 1.0, 4.0]).unwrap()).unwrap();
        if independence_test(&cfg).unwrap().reject {
            mismatch_rejects += 1;
        }
    }
    let kept = runs - same_rejects;
    Outcome {
        passed: kept >= 95 && mismatch_rejects >= 90,
        detail: format!(
            "same scale: {kept}/{runs} not rejected (>= 95); mismatch: {mismatch_rejects}/{runs} rejected (>= 90)"
        ),
    }
}

fn criterion_7() -> Outcome {
    let reports: Vec<_> = matrix_kinds(&[3, 4, 5])
        .into_iter()
        .map(|d| verify::gleason_suite(d, 20, 10_000, 7).unwrap())
        .collect();
    suites(&reports)
}

/// Scalar gamma MLE by bisection on `ln p − ψ(p) = s`.
fn gamma_shape_bisection(s: f64) -> f64 {
    let (mut lo, mut hi) = (1e-8f64, 1e8f64);
    for _ in 0..400 {
        let mid = (lo * hi).sqrt();
        if mid.ln() - digamma(mid) > s {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    (lo * hi).sqrt()
}

fn criterion_8() -> Outcome {
    let d = AlgebraDescriptor::real_sym(1).unwrap();
    let mut errs = Vec::new();
    let mut density = 0.0f64;
    let mut laplace = 0.0f64;
    for &(p, a) in &[(0.5, 1.0), (1.0, 1.0), (2.5, 0.3), (7.0, 4.0)] {
        let scale = ConePoint::new(Element::new(d, vec![a]).unwrap()).unwrap();
        let params = WishartParams::new(p, scale).unwrap();
        let oracle = Gamma::new(p, a).unwrap();
        for i in 1..=200 {
            let x = 0.05 * i as f64;
            let got = log_density(&Element::new(d, vec![x]).unwrap(), &params);
            density = density.max((got - oracle.ln_pdf(x)).abs());
        }
        for &t in &[0.1, 1.0, 5.0] {
            let got = laplace_transform(&Element::new(d, vec![t]).unwrap(), &params).unwrap();
            laplace = laplace.max((got / (1.0 + t / a).powf(-p) - 1.0).abs());
        }
    }
    if density > 1e-12 {
        errs.push(format!("log density {density:e}"));
    }
    if laplace > 1e-12 {
        errs.push(format!("laplace {laplace:e}"));
    }

    // sampler against the gamma cdf
    let params = WishartParams::new(
        2.5,
        ConePoint::new(Element::new(d, vec![0.7]).unwrap()).unwrap(),
    )
    .unwrap();
    let batch = sample(&params, 10_000, 8).unwrap();
    let mut xs: Vec<f64> = batch.samples.iter().map(|x| x.coords()[0]).collect();
    xs.sort_by(f64::total_cmp);
    let oracle = Gamma::new(2.5, 0.7).unwrap();
    let n = xs.len() as f64;
    let ks = xs
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = oracle.cdf(x);
            (f - i as f64 / n).abs().max(((i + 1) as f64 / n - f).abs())
        })
        .fold(0.0f64, f64::max);
    let ks_crit = 1.63 / n.sqrt();
    if ks > ks_crit {
        errs.push(format!("sampler KS {ks:.4} > {ks_crit:.4}"));
    }

    let rep = parameter_recovery(&batch.samples, 8).unwrap();
    let mean = xs.iter().sum::<f64>() / n;
    let mean_log = xs.iter().map(|x| x.ln()).sum::<f64>() / n;
    let p_oracle = gamma_shape_bisection(mean.ln() - mean_log);
    let shape_err = (rep.shape - p_oracle).abs() / p_oracle;
    let rate_err = (rep.scale.coords()[0] - p_oracle / mean).abs() / (p_oracle / mean);
    if shape_err > 1e-9 || rate_err > 1e-9 {
        errs.push(format!(
            "MLE shape rel {shape_err:e}, rate rel {rate_err:e}"
        ));
    }
    Outcome {
        passed: errs.is_empty(),
        detail: if errs.is_empty() {
            format!(
                "density {density:e}, laplace {laplace:e}, KS {ks:.4}, MLE shape rel {shape_err:e}"
            )
        } else {
            errs.join("; ")
        },
    }
}

fn run_cli(dir: &Path, args: &[&str]) -> (i32, Vec<u8>) {
    let out = Command::new(env!("CARGO_BIN_EXE_symcone"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("run symcone");
    (out.status.code().unwrap_or(-1), out.stdout)
}

fn criterion_9() -> Outcome {
    let invocations: &[&[&str]] = &[
        &[
            "sample",
            "--algebra",
            "quaternion",
            "--rank",
            "3",
            "--p",
            "4.5",
            "--n",
            "1500",
            "--seed",
            "9",
            "--out",
            "s.csv",
        ],
        &[
            "recover",
            "--algebra",
            "quaternion",
            "--rank",
            "3",
            "--input",
            "s.csv",
            "--seed",
            "9",
            "--out",
            "r.json",
        ],
        &[
            "verify",
            "--algebra",
            "complex",
            "--rank",
            "3",
            "--trials",
            "100",
            "--pairs",
            "500",
            "--seed",
            "9",
            "--out",
            "v.json",
        ],
        &[
            "laplace-check",
            "--algebra",
            "real",
            "--rank",
            "3",
            "--p",
            "2",
            "--n",
            "100000",
            "--scale",
            "diag:1,2,3",
            "--seed",
            "9",
        ],
        &[
            "independence",
            "--algebra",
            "complex",
            "--rank",
            "3",
            "--p1",
            "2.5",
            "--p2",
            "3",
            "--n",
            "600",
            "--seed",
            "9",
            "--replicates-out",
            "reps.csv",
        ],
        &[
            "factorization",
            "--algebra",
            "real",
            "--rank",
            "3",
            "--p1",
            "3",
            "--p2",
            "3",
            "--n",
            "1000",
            "--seed",
            "9",
        ],
        &[
            "jacobian-check",
            "--algebra",
            "lorentz",
            "--rank",
            "3",
            "--seed",
            "9",
        ],
        &[
            "gleason-check",
            "--algebra",
            "real",
            "--rank",
            "3",
            "--forms",
            "3",
            "--budget",
            "500",
            "--seed",
            "9",
        ],
    ];
    let files = ["s.csv", "s.csv.json", "r.json", "v.json", "reps.csv"];
    let dirs = [tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap()];
    // (label, bytes) for every stdout that is not redirected and every written file
    let mut outputs = [Vec::new(), Vec::new()];
    let mut failures = Vec::new();
    for (dir, out) in dirs.iter().zip(outputs.iter_mut()) {
        for args in invocations {
            let (code, stdout) = run_cli(dir.path(), args);
            if code != 0 {
                failures.push(format!("{} exited {code}", args[0]));
            }
            if !args.contains(&"--out") {
                out.push((args[0].to_string(), stdout));
            }
        }
        for f in files {
            out.push((
                f.to_string(),
                std::fs::read(dir.path().join(f)).unwrap_or_default(),
            ));
        }
    }
    for ((label, a), (_, b)) in outputs[0].iter().zip(&outputs[1]) {
        if a.is_empty() {
            failures.push(format!("{label} empty"));
        } else if a != b {
            failures.push(format!("{label} differs"));
        }
    }
    Outcome {
        passed: failures.is_empty(),
        detail: if failures.is_empty() {
            format!(
                "{} outputs byte-identical across two runs",
                outputs[0].len()
            )
        } else {
            failures.join("; ")
        },
    }
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("Jordan axioms and spectral suite", criterion_1),
        ("quadratic representation suite", criterion_2),
        ("Wishart Laplace transform", criterion_3),
        ("Olkin-Baker residual constancy", criterion_4),
        ("Lukacs factorization", criterion_5),
        ("independence behaviour", criterion_6),
        ("trace-form suite", criterion_7),
        ("scalar reduction", criterion_8),
        ("reproducibility", criterion_9),
    ];
    let only: Vec<usize> = std::env::var("ACCEPTANCE_ONLY")
        .ok()
        .map(|s| s.split(',').filter_map(|t| t.trim().parse().ok()).collect())
        .unwrap_or_default();
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        if !only.is_empty() && !only.contains(&(i + 1)) {
            continue;
        }
        let start = Instant::now();
        let o = f();
        let status = if o.passed { "PASS" } else { "FAIL" };
        println!(
            "[{status}] {}. {name}: {} ({:.1}s)",
            i + 1,
            o.detail,
            start.elapsed().as_secs_f64()
        );
        if !o.passed {
            failed += 1;
        }
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
