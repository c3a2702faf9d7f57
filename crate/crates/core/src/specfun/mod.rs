//! Special functions and quadrature.

mod bessel;
mod laguerre;
mod quadrature;

pub use bessel::{bessel_j, j0, MAX_ORDER as BESSEL_MAX_ORDER, SERIES_LIMIT as BESSEL_SERIES_LIMIT};
pub use laguerre::{laguerre, laguerre_functions, LaguerreSeq, MAX_DEGREE as LAGUERRE_MAX_DEGREE};
pub use quadrature::{composite_gauss_legendre, gauss_legendre, IntegrationError, QuadratureRule};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SpecFunError {
    #[error("order {order} not supported (max {max})")]
    UnsupportedOrder { order: u32, max: u32 },
    #[error("domain error: {0}")]
    Domain(String),
    #[error("invalid interval [{a}, {b}]")]
    InvalidInterval { a: f64, b: f64 },
    #[error("invalid quadrature rule: {0}")]
    InvalidRule(String),
    #[error("Newton iteration for Gauss–Legendre node {index} did not converge")]
    NoConvergence { index: usize },
}
