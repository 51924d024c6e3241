//! Monte Carlo checks of the quotient characterization: independence of
//! `(U, V) = ψ(X, Y)` for same-scale Wishart inputs, the log-density factorization,
//! and maximum-likelihood recovery of Wishart parameters.

pub mod dcor;
mod factorization;
mod independence;
mod recovery;

pub use factorization::{factorization_check, FactorizationConfig, FactorizationReport};
pub use independence::{
    independence_test, IndependenceConfig, IndependenceReport, Pairing, PreScreen,
    MIN_INDEPENDENCE_N, MIN_PERMUTATIONS,
};
pub use recovery::{
    parameter_recovery, solve_shape, GoodnessOfFit, RecoveryReport, BAND_TAIL, MIN_RECOVERY_N,
    REFERENCE_N,
};
