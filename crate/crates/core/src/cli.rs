//! `symcone` command line.

use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::algebra::{AlgebraDescriptor, AlgebraKind, Element};
use crate::cone::ConePoint;
use crate::error::{Error, Result};
use crate::harness::{
    factorization_check, independence_test, parameter_recovery, FactorizationConfig,
    IndependenceConfig, Pairing,
};
use crate::verify::{self, Check, SuiteReport};
use crate::wishart::{read_csv, sample, WishartParams};
use crate::{par, SCHEMA_VERSION};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "symcone",
    version,
    about = "Symmetric-cone Wishart toolkit and property checks"
)]
pub struct Cli {
    /// Worker threads (default: all available cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum KindArg {
    Real,
    Complex,
    Quaternion,
    Lorentz,
}

impl From<KindArg> for AlgebraKind {
    fn from(k: KindArg) -> Self {
        match k {
            KindArg::Real => AlgebraKind::RealSym,
            KindArg::Complex => AlgebraKind::ComplexHerm,
            KindArg::Quaternion => AlgebraKind::QuatHerm,
            KindArg::Lorentz => AlgebraKind::Lorentz,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct AlgebraArgs {
    /// Algebra kind.
    #[arg(long, value_enum)]
    pub algebra: KindArg,
    /// Rank `r` for matrix kinds, or `n` for the Lorentz algebra on R^{n+1}.
    #[arg(long)]
    pub rank: usize,
}

impl AlgebraArgs {
    fn descriptor(&self) -> Result<AlgebraDescriptor> {
        descriptor_for(self.algebra, self.rank)
    }
}

fn descriptor_for(kind: KindArg, rank: usize) -> Result<AlgebraDescriptor> {
    match kind {
        KindArg::Lorentz => AlgebraDescriptor::lorentz(rank),
        k => AlgebraDescriptor::matrix(k.into(), rank),
    }
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    /// Output file (default: standard output).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run the algebra, quadratic-representation, functional-equation and trace-form
    /// property suites.
    Verify {
        /// Algebra kind; all default configurations when omitted.
        #[arg(long, value_enum, requires = "rank")]
        algebra: Option<KindArg>,
        #[arg(long, requires = "algebra")]
        rank: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Random elements per algebra property.
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        /// Random pairs in each functional-equation sweep.
        #[arg(long, default_value_t = 10_000)]
        pairs: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Draw a Wishart sample and write it as CSV (plus a JSON header next to `--out`).
    Sample {
        #[command(flatten)]
        algebra: AlgebraArgs,
        /// Shape p.
        #[arg(long)]
        p: f64,
        /// `identity`, `diag:v1,v2,...` or a JSON element file.
        #[arg(long, default_value = "identity")]
        scale: String,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Compare the empirical Laplace transform of the sampler with the closed form.
    LaplaceCheck {
        #[command(flatten)]
        algebra: AlgebraArgs,
        #[arg(long)]
        p: f64,
        #[arg(long, default_value = "identity")]
        scale: String,
        #[arg(long, default_value_t = 100_000)]
        n: usize,
        /// Number of random test points t.
        #[arg(long, default_value_t = 5)]
        points: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Distance-correlation permutation test of independence between U and V.
    Independence {
        #[command(flatten)]
        algebra: AlgebraArgs,
        #[arg(long)]
        p1: f64,
        #[arg(long)]
        p2: f64,
        /// Scale of X.
        #[arg(long, default_value = "identity")]
        scale: String,
        /// Scale of Y (default: the scale of X).
        #[arg(long)]
        scale_y: Option<String>,
        #[arg(long, default_value_t = 2000)]
        n: usize,
        #[arg(long, default_value_t = 0.01)]
        alpha: f64,
        #[arg(long, default_value_t = 200)]
        permutations: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Pair V with U from an independent draw (calibration control).
        #[arg(long)]
        shuffled: bool,
        /// Exit with status 1 unless the decision matches.
        #[arg(long, value_enum)]
        expect: Option<Expectation>,
        /// Also write the observed and permuted statistics as CSV.
        #[arg(long)]
        replicates_out: Option<PathBuf>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Residual of the log-density factorization over Wishart pairs.
    Factorization {
        #[command(flatten)]
        algebra: AlgebraArgs,
        #[arg(long)]
        p1: f64,
        #[arg(long)]
        p2: f64,
        #[arg(long, default_value = "identity")]
        scale: String,
        #[arg(long, default_value_t = 10_000)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Perturbation of the det(x+y) exponent (negative control when non-zero).
        #[arg(long, default_value_t = 0.0)]
        exponent_shift: f64,
        /// Allowed max-min spread of the residual.
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Jacobian of the inverse quotient map: operator determinant and finite differences.
    JacobianCheck {
        #[command(flatten)]
        algebra: AlgebraArgs,
        #[arg(long, default_value_t = 20)]
        trials: usize,
        #[arg(long, default_value_t = 1e-6)]
        step: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Trace-form fitting and the scalar-forcing log-trace identity.
    GleasonCheck {
        #[command(flatten)]
        algebra: AlgebraArgs,
        /// Random forms per check.
        #[arg(long, default_value_t = 20)]
        forms: usize,
        /// Pairs searched per non-scalar form.
        #[arg(long, default_value_t = 10_000)]
        budget: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Maximum-likelihood Wishart fit of a CSV sample, with a goodness-of-fit flag.
    Recover {
        #[command(flatten)]
        algebra: AlgebraArgs,
        /// CSV written by `sample`.
        #[arg(long)]
        input: PathBuf,
        /// Seed of the reference sample used for goodness of fit.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        output: OutputArgs,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Expectation {
    Independent,
    Dependent,
}

/// Parses a `--scale` value: `identity`, `diag:v1,...,vr` or a path to a JSON element.
pub fn parse_scale(arg: &str, desc: AlgebraDescriptor) -> Result<ConePoint> {
    let arg = arg.trim();
    if arg == "identity" {
        return Ok(ConePoint::identity(desc));
    }
    if let Some(list) = arg.strip_prefix("diag:") {
        let values = list
            .split(',')
            .map(|v| v.trim().parse::<f64>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|e| Error::InvalidInput(format!("--scale {arg}: {e}")))?;
        return ConePoint::new(Element::from_real_diagonal(desc, &values)?);
    }
    let text = std::fs::read_to_string(arg)
        .map_err(|e| Error::InvalidInput(format!("--scale {arg}: {e}")))?;
    let x: Element = serde_json::from_str(&text)?;
    if x.descriptor() != &desc {
        return Err(Error::DescriptorMismatch {
            left: *x.descriptor(),
            right: desc,
        });
    }
    ConePoint::new(x)
}

fn writer(out: &Option<PathBuf>) -> Result<Box<dyn Write>> {
    Ok(match out {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(io::stdout().lock()),
    })
}

fn emit<T: Serialize>(value: &T, out: &Option<PathBuf>) -> Result<()> {
    let mut w = writer(out)?;
    serde_json::to_writer_pretty(&mut w, value)?;
    writeln!(w)?;
    w.flush()?;
    Ok(())
}

fn summarize(reports: &[SuiteReport]) {
    for r in reports {
        let failed: Vec<&Check> = r.failures().collect();
        if failed.is_empty() {
            eprintln!(
                "{} {}: ok ({} checks)",
                r.descriptor,
                r.suite,
                r.checks.len()
            );
        } else {
            for c in failed {
                eprintln!(
                    "{} {}: FAILED {} measured {:e} vs {:e}",
                    r.descriptor, r.suite, c.name, c.measured, c.tolerance
                );
            }
        }
    }
}

#[derive(Serialize)]
struct SuiteBundle<'a> {
    schema_version: u32,
    passed: bool,
    reports: &'a [SuiteReport],
}

fn bundle(reports: &[SuiteReport], out: &Option<PathBuf>) -> Result<i32> {
    summarize(reports);
    let passed = reports.iter().all(|r| r.passed);
    emit(
        &SuiteBundle {
            schema_version: SCHEMA_VERSION,
            passed,
            reports,
        },
        out,
    )?;
    Ok(if passed { EXIT_OK } else { EXIT_FAILED })
}

#[derive(Serialize)]
struct Decision<T: Serialize> {
    #[serde(flatten)]
    report: T,
    expectation: Option<Expectation>,
    passed: bool,
}

fn sidecar_path(out: &Path) -> PathBuf {
    let mut s = out.as_os_str().to_owned();
    s.push(".json");
    PathBuf::from(s)
}

fn dispatch(cmd: Command) -> Result<i32> {
    match cmd {
        Command::Verify {
            algebra,
            rank,
            seed,
            trials,
            pairs,
            output,
        } => {
            let descs = match (algebra, rank) {
                (Some(k), Some(r)) => vec![descriptor_for(k, r)?],
                _ => verify::default_descriptors(),
            };
            let mut reports = Vec::new();
            for d in descs {
                reports.push(verify::jordan_suite(d, trials, seed)?);
                reports.push(verify::quadratic_suite(d, trials.min(200), seed)?);
                reports.push(verify::funceq_suite(d, 20, pairs, seed)?);
                if d.is_matrix() && d.rank() >= 3 {
                    reports.push(verify::gleason_suite(d, 20, 10_000, seed)?);
                }
            }
            bundle(&reports, &output.out)
        }
        Command::Sample {
            algebra,
            p,
            scale,
            n,
            seed,
            output,
        } => {
            let desc = algebra.descriptor()?;
            let params = WishartParams::new(p, parse_scale(&scale, desc)?)?;
            let batch = sample(&params, n, seed)?;
            let mut w = writer(&output.out)?;
            batch.write_csv(&mut w)?;
            w.flush()?;
            if let Some(path) = &output.out {
                let mut h = File::create(sidecar_path(path))?;
                writeln!(h, "{}", batch.header_json()?)?;
            }
            eprintln!("{n} draws from {desc}");
            Ok(EXIT_OK)
        }
        Command::LaplaceCheck {
            algebra,
            p,
            scale,
            n,
            points,
            seed,
            output,
        } => {
            let desc = algebra.descriptor()?;
            let params = WishartParams::new(p, parse_scale(&scale, desc)?)?;
            let rep = verify::laplace_suite(&params, n, points, seed)?;
            bundle(&[rep], &output.out)
        }
        Command::Independence {
            algebra,
            p1,
            p2,
            scale,
            scale_y,
            n,
            alpha,
            permutations,
            seed,
            shuffled,
            expect,
            replicates_out,
            output,
        } => {
            let desc = algebra.descriptor()?;
            let scale_x = parse_scale(&scale, desc)?;
            let scale_y = match scale_y {
                Some(s) => parse_scale(&s, desc)?,
                None => scale_x.clone(),
            };
            let cfg = IndependenceConfig {
                descriptor: desc,
                p1,
                p2,
                scale_x,
                scale_y,
                n,
                alpha,
                permutations,
                seed,
                pairing: if shuffled {
                    Pairing::Shuffled
                } else {
                    Pairing::Joint
                },
            };
            let rep = independence_test(&cfg)?;
            if let Some(path) = replicates_out {
                std::fs::write(path, rep.replicates_csv())?;
            }
            let passed = match expect {
                None => true,
                Some(Expectation::Independent) => !rep.reject,
                Some(Expectation::Dependent) => rep.reject,
            };
            eprintln!(
                "dcor {:.4}, p-value {:.4}, {}",
                rep.dcor,
                rep.p_value,
                if rep.reject { "reject" } else { "no rejection" }
            );
            emit(
                &Decision {
                    report: rep,
                    expectation: expect,
                    passed,
                },
                &output.out,
            )?;
            Ok(if passed { EXIT_OK } else { EXIT_FAILED })
        }
        Command::Factorization {
            algebra,
            p1,
            p2,
            scale,
            n,
            seed,
            exponent_shift,
            tol,
            output,
        } => {
            let desc = algebra.descriptor()?;
            let cfg = FactorizationConfig {
                descriptor: desc,
                p1,
                p2,
                scale: parse_scale(&scale, desc)?,
                n,
                seed,
                exponent_shift,
            };
            let rep = factorization_check(&cfg)?;
            let check = if exponent_shift == 0.0 {
                Check::at_most("residual_spread", rep.residual.spread(), tol)
            } else {
                Check::at_least("residual_stddev", rep.residual.stddev, 0.01)
            };
            eprintln!(
                "residual spread {:e}, stddev {:e}: {}",
                rep.residual.spread(),
                rep.residual.stddev,
                if check.passed { "ok" } else { "FAILED" }
            );
            let passed = check.passed;
            #[derive(Serialize)]
            struct Out {
                #[serde(flatten)]
                report: crate::harness::FactorizationReport,
                check: Check,
            }
            emit(&Out { report: rep, check }, &output.out)?;
            Ok(if passed { EXIT_OK } else { EXIT_FAILED })
        }
        Command::JacobianCheck {
            algebra,
            trials,
            step,
            seed,
            output,
        } => {
            let rep = verify::jacobian_suite(algebra.descriptor()?, trials, step, seed)?;
            bundle(&[rep], &output.out)
        }
        Command::GleasonCheck {
            algebra,
            forms,
            budget,
            seed,
            output,
        } => {
            let rep = verify::gleason_suite(algebra.descriptor()?, forms, budget, seed)?;
            bundle(&[rep], &output.out)
        }
        Command::Recover {
            algebra,
            input,
            seed,
            output,
        } => {
            let desc = algebra.descriptor()?;
            let f = File::open(&input)
                .map_err(|e| Error::InvalidInput(format!("--input {}: {e}", input.display())))?;
            let xs = read_csv(desc, BufReader::new(f))?;
            let rep = parameter_recovery(&xs, seed)?;
            let flagged = rep.goodness_of_fit.as_ref().is_some_and(|g| g.flagged);
            eprintln!(
                "shape {:.6}{}",
                rep.shape,
                if flagged {
                    ", goodness of fit FLAGGED"
                } else {
                    ""
                }
            );
            emit(&rep, &output.out)?;
            Ok(if flagged { EXIT_FAILED } else { EXIT_OK })
        }
    }
}

fn is_usage(e: &Error) -> bool {
    matches!(
        e,
        Error::InvalidInput(_)
            | Error::DomainViolation(_)
            | Error::OutsideCone { .. }
            | Error::DescriptorMismatch { .. }
            | Error::ScaleMismatch
            | Error::InsufficientData(_)
            | Error::Json(_)
    )
}

/// Parses `argv` (including the program name), runs the command and returns the
/// process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    if let Some(t) = cli.threads {
        if t == 0 {
            eprintln!("error: --threads must be positive");
            return EXIT_USAGE;
        }
        par::set_threads(t);
    }
    let start = Instant::now();
    match dispatch(cli.command) {
        Ok(code) => {
            eprintln!("finished in {:.1}s", start.elapsed().as_secs_f64());
            code
        }
        Err(e) => {
            eprintln!("error: {e}");
            if is_usage(&e) {
                EXIT_USAGE
            } else {
                EXIT_FAILED
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scale_arguments() {
        let d = AlgebraDescriptor::real_sym(3).unwrap();
        assert_eq!(parse_scale("identity", d).unwrap(), ConePoint::identity(d));
        let s = parse_scale("diag:1,1,4", d).unwrap();
        assert_eq!(crate::algebra::det(s.value()).unwrap(), 4.0);
        assert!(parse_scale("diag:1,-1,4", d).is_err());
        assert!(parse_scale("diag:1,x", d).is_err());
        assert!(parse_scale("/nonexistent/scale.json", d).is_err());
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("a.json");
        std::fs::write(
            &path,
            serde_json::to_string(&(&Element::identity(d) * 2.0)).unwrap(),
        )
        .unwrap();
        let a = parse_scale(path.to_str().unwrap(), d).unwrap();
        assert_eq!(a.value().trace(), 6.0);
        let other = AlgebraDescriptor::complex_herm(3).unwrap();
        assert!(parse_scale(path.to_str().unwrap(), other).is_err());
    }

    #[test]
    fn usage_errors() {
        assert_eq!(run(["symcone", "frobnicate"]), EXIT_USAGE);
        assert_eq!(
            run([
                "symcone",
                "sample",
                "--algebra",
                "real",
                "--rank",
                "3",
                "--p",
                "2",
                "--n",
                "5",
                "--bogus"
            ]),
            EXIT_USAGE
        );
        // shape below the continuity threshold
        assert_eq!(
            run([
                "symcone",
                "sample",
                "--algebra",
                "real",
                "--rank",
                "3",
                "--p",
                "0.5",
                "--n",
                "5"
            ]),
            EXIT_USAGE
        );
        assert_eq!(run(["symcone", "--help"]), EXIT_OK);
    }
}
