//! Error type shared by all modules.

use core::fmt;

pub type Result<T> = core::result::Result<T, Error>;

/// Failure cases surfaced by the library.
///
/// Variants carry just enough to produce an actionable one-line message;
/// callers that need exit-code mapping match on the variant.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Error {
    /// A pole radius outside [0, 1) or an argument outside [0, 1).
    InvalidPole,
    /// A (j, k) or linear index not enumerated by the scheme.
    IndexOutOfRange,
    /// An operation asked of a scheme kind that does not support it
    /// (e.g. dyadic indexing of the power basis).
    UnsupportedScheme,
    /// Linear index 0 or an otherwise empty/degenerate input.
    DomainError,
    /// Two signals on different grids were combined.
    GridMismatch,
    /// The grid is too coarse for the requested dyadic depth or bandwidth.
    Resolution,
    /// An exponent outside the supported range.
    ParameterOutOfRange,
    /// A coefficient sequence that is identically zero.
    ZeroSequence,
    /// A sign pattern whose length does not cover the tree's index set.
    SignCoverageMismatch,
    /// Analysis requested on a signal that is not flagged analytic.
    NotAnalytic,
    /// A grid size outside the supported power-of-two range.
    InvalidGrid,
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let msg = match self {
            Error::InvalidPole => "pole must satisfy r in [0,1) and h in [0,1)",
            Error::IndexOutOfRange => "index not enumerated by this pole scheme",
            Error::UnsupportedScheme => "operation not defined for this scheme kind",
            Error::DomainError => "argument outside the operation's domain",
            Error::GridMismatch => "signals live on different grids",
            Error::Resolution => "grid too coarse for the requested depth or bandwidth",
            Error::ParameterOutOfRange => "exponent outside the supported range",
            Error::ZeroSequence => "coefficient sequence is identically zero",
            Error::SignCoverageMismatch => "sign pattern does not cover the tree's index set",
            Error::NotAnalytic => "signal is not flagged analytic",
            Error::InvalidGrid => "grid log2 size outside the supported range",
        };
        f.write_str(msg)
    }
}
