use alloc::string::String;
use core::fmt;

/// Errors produced by the core library.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    InvalidCharacter(char),
    InvalidLength { len: usize, max: usize },
    LengthMismatch { left: usize, right: usize },
    RankOutOfRange { rank: u64, n: usize },
    InvalidOrdering(u8),
    InvalidOffset(String),
    InvalidParams(String),
    /// `halving` is undefined at distance zero.
    ZeroDistance,
    /// The operation needs an even word length.
    OddLength(usize),
    /// A code failed verification and was not accepted.
    Unverified(String),
    OutOfTable { n: usize, max_n: usize },
    /// A lower bound exceeded an upper bound.
    Inconsistent { lower: u64, upper: u64, detail: String },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidCharacter(c) => write!(f, "invalid character {c:?}"),
            Error::InvalidLength { len, max } => {
                write!(f, "invalid length {len} (must be between 1 and {max})")
            }
            Error::LengthMismatch { left, right } => {
                write!(f, "length mismatch: {left} vs {right}")
            }
            Error::RankOutOfRange { rank, n } => {
                write!(f, "rank {rank:#x} out of range for length {n}")
            }
            Error::InvalidOrdering(k) => write!(f, "invalid ordering {k} (expected 1..=6)"),
            Error::InvalidOffset(s) => write!(f, "invalid offset: {s}"),
            Error::InvalidParams(s) => write!(f, "invalid parameters: {s}"),
            Error::ZeroDistance => f.write_str("minimum distance must be positive"),
            Error::OddLength(n) => write!(f, "length {n} must be even"),
            Error::Unverified(s) => write!(f, "code failed verification: {s}"),
            Error::OutOfTable { n, max_n } => {
                write!(f, "length {n} exceeds the precomputed bound table (max {max_n})")
            }
            Error::Inconsistent { lower, upper, detail } => {
                write!(f, "lower bound {lower} exceeds upper bound {upper}: {detail}")
            }
        }
    }
}

impl core::error::Error for Error {}

pub type Result<T, E = Error> = core::result::Result<T, E>;
