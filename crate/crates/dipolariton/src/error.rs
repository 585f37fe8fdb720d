//! Crate-wide error type.

use std::path::PathBuf;

use crate::units::Dimension;

/// Errors produced anywhere in the crate.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch in {context}: expected {expected:?}, found {found:?}")]
    DimensionMismatch {
        expected: Dimension,
        found: Dimension,
        context: &'static str,
    },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid rung index {0}: the ladder starts at n = 1")]
    InvalidRung(u32),

    #[error("matrix contains non-finite entries")]
    NonFiniteInput,

    #[error("eigensolver failed to certify a residual bound (best residual {residual:.3e})")]
    NumericalFailure { residual: f64 },

    #[error("eigensolver failure at F = {f_kvcm} kV/cm (best residual {residual:.3e})")]
    EigensolverAt { f_kvcm: f64, residual: f64 },

    #[error("model violation: {0}")]
    ModelViolation(String),

    #[error("config line {line}: {message}")]
    ConfigParse { line: usize, message: String },

    #[error("config line {line}: unknown key `{key}`")]
    UnknownKey { line: usize, key: String },

    #[error("config line {line}: key `{key}` has the wrong unit suffix (expected {expected})")]
    WrongUnitSuffix {
        line: usize,
        key: String,
        expected: &'static str,
    },

    #[error("config line {line}: key `{key}` set more than once")]
    DuplicateKey { line: usize, key: String },

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
