use core::fmt;

/// Errors raised while building inputs or evaluating a bound.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Malformed event system or moment summary (shape, non-finite or negative mass).
    InvalidInput(&'static str),
    /// A summary that no probability model can produce, detected while evaluating a bound.
    Inconsistent {
        what: &'static str,
        index: usize,
        value: f64,
    },
    /// Exhaustive search refused because `n` exceeds the configured cap.
    TooLarge {
        n: usize,
        cap: usize,
    },
    /// The linear program has no feasible vertex.
    Infeasible,
    /// A construction would need more than unit total mass or masses outside [0, 1].
    Unrealizable(&'static str),
    /// Quadratic form denominator at or below the degeneracy threshold.
    DegenerateDenominator(f64),
    IndexOutOfRange {
        index: usize,
        n: usize,
    },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidInput(msg) => write!(f, "invalid input: {msg}"),
            Error::Inconsistent { what, index, value } => {
                write!(
                    f,
                    "inconsistent summary: {what} at index {index} (value {value:e})"
                )
            }
            Error::TooLarge { n, cap } => {
                write!(f, "exhaustive search over {n} events exceeds cap {cap}")
            }
            Error::Infeasible => f.write_str("linear program is infeasible"),
            Error::Unrealizable(msg) => write!(f, "unrealizable input: {msg}"),
            Error::DegenerateDenominator(d) => {
                write!(f, "degenerate quadratic form denominator {d:e}")
            }
            Error::IndexOutOfRange { index, n } => {
                write!(f, "index {index} out of range for {n} events")
            }
        }
    }
}

impl core::error::Error for Error {}
