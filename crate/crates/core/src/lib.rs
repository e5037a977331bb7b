//! Limit canonical systems on a curve `X ∪ Y` with two smooth components
//! meeting transversally at `δ` points.
//!
//! Everything is exact: rationals are `BigRational`, integer data are `i64`.

pub mod config;
pub mod feasibility;
pub mod grassmann;
pub mod lattice;
pub mod model;
pub mod numdata;
pub mod poset;
pub mod rational;
pub mod strata;
pub mod weier;

pub use config::{CurveConfig, DeltaSet};
pub use rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("the node set is empty")]
    EmptyDelta,
    #[error("entry {index} must be positive, got {value}")]
    NonPositive { index: usize, value: String },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("malformed candidate: {0}")]
    Malformed(String),
    #[error("infeasible: {0}")]
    Infeasible(String),
    #[error("enumeration cap exceeded: {needed} candidates, cap {cap}")]
    CapExceeded { needed: usize, cap: usize },
    #[error("general position violated: {0}")]
    GeneralPosition(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
