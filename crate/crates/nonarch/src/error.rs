//! Error types shared across the crate.

use thiserror::Error;

/// Errors raised by exact-arithmetic operations and experiment checks.
#[derive(Debug, Error)]
pub enum Error {
    /// Inversion of the zero scalar.
    #[error("cannot invert the zero scalar")]
    ZeroInverse,

    /// Binary series operation on elements of different algebras.
    #[error("algebra descriptors do not match: {0}")]
    DescriptorMismatch(String),

    /// A monomial violates the support predicate of its algebra.
    #[error("monomial U^{u} X^{x} T^{t} is not admissible: {reason}")]
    SupportViolation {
        u: u64,
        x: u64,
        t: i64,
        reason: String,
    },

    /// Monomial outside the localized algebra (x-exponent below the staircase floor).
    #[error("U^{i0} X^{j0} lies outside the staircase algebra: j0 < floor({i0}) = {floor}")]
    NotInAlgebra { i0: u64, j0: u64, floor: u64 },

    /// An operation precondition does not hold.
    #[error("precondition failed: {0}")]
    PreconditionFailed(String),

    /// The localization presentation is outside the supported family.
    #[error("unsupported localization presentation: {0}")]
    UnsupportedPresentation(String),

    /// Joint and per-factor quotient bounds disagree; carries the offending factor.
    #[error("product/localization isometry mismatch at factor {factor}: joint {joint} vs per-factor {per_factor}")]
    IsometryMismatch {
        factor: usize,
        joint: String,
        per_factor: String,
    },

    /// The scale sequence is too coarse: the half-radius exponent comes out zero.
    #[error("scale sequence assertion failed at n = {n}: l_n = 0 (epsilon too large)")]
    AssertLn { n: usize },

    /// The diagonal witness identity failed to hold exactly.
    #[error("witness identity failure at factor {factor}: {detail}")]
    IdentityFailure { factor: usize, detail: String },

    /// A family of functions fails to generate the unit ideal.
    #[error("functions do not generate the unit ideal: all vanish at point `{point}`")]
    NotGenerating { point: String },

    /// A claimed cover misses a point.
    #[error("cover incomplete: point `{point}` is not covered")]
    CoverIncomplete { point: String },

    /// Malformed configuration file or flag value.
    #[error("config error: {0}")]
    Config(String),

    /// A claim the toolkit exists to certify failed its check.
    #[error("SPEC-BREAK: {0}")]
    SpecBreak(String),
}

pub type Result<T> = std::result::Result<T, Error>;
