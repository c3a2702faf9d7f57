//! Spherical analysis on Gelfand pairs of polynomial growth.
//!
//! Four concrete pairs are implemented: the line (ℝ, {0}), the Euclidean
//! motion group of the plane, the strong pair (U(1)⋉ℂ, U(1)) and the
//! Heisenberg pair (U(1)⋉H₁, U(1)). For each one the crate evaluates bounded
//! spherical functions, computes spherical transforms and their inverses,
//! splits K-central functions into K-types, and checks Schwartz-type decay of
//! transforms along the embedded spectrum.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod families;
pub mod ktype;
pub mod pairs;
pub mod report;
pub mod schwartz;
pub mod specfun;
pub mod transform;

pub use num_complex::Complex64;
pub use report::{Report, Status};

use specfun::SpecFunError;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("unknown pair '{0}'")]
    UnknownPair(String),
    #[error("usage error: {0}")]
    Usage(String),
    #[error(transparent)]
    SpecFun(#[from] SpecFunError),
    #[error("grid error: {0}")]
    Grid(String),
    #[error("resolution error: {0}")]
    Resolution(String),
    #[error("type error: {0}")]
    Type(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("weight error: {0}")]
    Weight(String),
    #[error("invalid bump spec: {0}")]
    InvalidSpec(String),
    #[error("empty input: {0}")]
    Empty(String),
    #[error("inconclusive: {0}")]
    Inconclusive(String),
    /// The decay precondition of the extension failed; the report says why.
    #[error("decay precondition not met: {}", .0.summary())]
    DecayPrecondition(Box<schwartz::SeminormReport>),
}
