use thiserror::Error;

/// Errors raised by the numerical routines of this crate.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix is not Hermitian (max asymmetry {0:e})")]
    NotHermitian(f64),

    #[error("trace is not 1 (got {0})")]
    InvalidTrace(f64),

    #[error("matrix is not positive semidefinite (min eigenvalue {0:e})")]
    NotPsd(f64),

    #[error("matrix has non-finite entries")]
    NonFinite,

    #[error("eigendecomposition failed to converge")]
    NoConvergence,

    #[error("invalid subsystem selection: {0}")]
    InvalidSubsystems(String),

    #[error("Kraus operators are not complete (residual {0:e})")]
    IncompleteKraus(f64),

    #[error("Choi marginal is not maximally mixed (residual {0:e})")]
    InvalidChoi(f64),

    #[error("parameter `{name}` out of range: {value} (expected {expected})")]
    OutOfRange {
        name: &'static str,
        value: f64,
        expected: &'static str,
    },

    #[error("empty port grid")]
    EmptyGrid,
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_range(
    name: &'static str,
    value: f64,
    ok: bool,
    expected: &'static str,
) -> Result<()> {
    if ok && value.is_finite() {
        Ok(())
    } else {
        Err(Error::OutOfRange {
            name,
            value,
            expected,
        })
    }
}

pub(crate) fn check_probability(name: &'static str, value: f64) -> Result<()> {
    check_range(name, value, (0.0..=1.0).contains(&value), "[0, 1]")
}

pub(crate) fn check_ports(ports: usize) -> Result<()> {
    check_range("M", ports as f64, ports >= 2, "M >= 2")
}
