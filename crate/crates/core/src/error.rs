use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Broad failure classes, used by front ends to pick an exit status.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    /// Malformed or inconsistent input.
    Input,
    /// A size guard or enumeration cap was exceeded.
    TooLarge,
    /// The input is well formed but outside the domain of the requested evaluation.
    Domain,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch in {context}: expected {expected}, found {found}")]
    DimensionMismatch {
        context: &'static str,
        expected: usize,
        found: usize,
    },

    #[error("{context}: index {index} out of range (bound {bound})")]
    IndexOutOfRange {
        context: &'static str,
        index: usize,
        bound: usize,
    },

    #[error("edge {edge} is a self-loop on vertex {vertex}")]
    SelfLoop { edge: usize, vertex: usize },

    #[error("oracle too large: {what} needs 2^{required_bits} terms, guard is 2^{limit_bits}")]
    OracleTooLarge {
        what: &'static str,
        required_bits: usize,
        limit_bits: usize,
    },

    #[error("instance too large: {what} needs {required} terms, configured cap is {cap}")]
    CapExceeded {
        what: &'static str,
        required: u128,
        cap: u64,
    },

    #[error("zero-temperature singularity: |lambda| >= 1 (lambda = {lambda})")]
    ZeroTemperature { lambda: String },

    #[error("matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("diagonal of A must be the identity (entry {index} is 0)")]
    DiagonalNotIdentity { index: usize },

    #[error("{name} must be a positive integer, got {value}")]
    NonPositive { name: &'static str, value: i64 },

    #[error("bond configuration is not uniform (edge {edge} differs from edge 0)")]
    NonUniform { edge: usize },

    #[error("couplings are not reducible to ±J form: {reason}")]
    NotReducible { reason: String },

    #[error("branch-singular input: {reason}")]
    BranchSingular { reason: String },

    #[error("value not representable in exact rational arithmetic: {reason}")]
    Inexact { reason: String },

    #[error("Kauffman variable A must be nonzero")]
    ZeroKauffmanVariable,

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    pub fn class(&self) -> ErrorClass {
        match self {
            Error::DimensionMismatch { .. }
            | Error::IndexOutOfRange { .. }
            | Error::SelfLoop { .. }
            | Error::Parse(_) => ErrorClass::Input,
            Error::OracleTooLarge { .. } | Error::CapExceeded { .. } => ErrorClass::TooLarge,
            Error::ZeroTemperature { .. }
            | Error::NotSquare { .. }
            | Error::DiagonalNotIdentity { .. }
            | Error::NonPositive { .. }
            | Error::NonUniform { .. }
            | Error::NotReducible { .. }
            | Error::BranchSingular { .. }
            | Error::Inexact { .. }
            | Error::ZeroKauffmanVariable => ErrorClass::Domain,
        }
    }

    pub(crate) fn mismatch(context: &'static str, expected: usize, found: usize) -> Self {
        Error::DimensionMismatch {
            context,
            expected,
            found,
        }
    }
}
