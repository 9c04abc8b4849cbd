use alloc::string::String;
use core::fmt;

use crate::Rational;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Error {
    /// A weighted space with no atoms.
    EmptySpace { what: &'static str },
    /// Atoms of measure zero (or negative) are not representable.
    NonPositiveWeight { what: &'static str, index: usize },
    WeightSum { what: &'static str, sum: Rational },
    DimensionMismatch { what: &'static str, expected: usize, found: usize },
    UnknownSymbol(String),
    SymbolOutOfRange { index: usize, alphabet_len: usize },
    DuplicateSymbol(String),
    AlphabetTooLarge(usize),
    AlphabetMismatch,
    NotAPermutation,
    NotPure,
    NotSquare,
    RowColumnWeightMismatch,
    LevelMismatch { expected: usize, found: usize },
    AxisMismatch,
    CapExceeded { what: &'static str, required: u64, limit: u64 },
    MissingGroundMetric,
    InvalidParameter(String),
    /// A class frequency cannot be represented on the snapping grid.
    SnappingInfeasible { frequency: Rational, max_denominator: u64 },
    InvalidRational(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::EmptySpace { what } => write!(f, "{what}: a space needs at least one atom"),
            Error::NonPositiveWeight { what, index } => {
                write!(f, "{what}: weight at index {index} must be positive")
            }
            Error::WeightSum { what, sum } => {
                write!(f, "{what}: weights must sum to 1 (got {sum})")
            }
            Error::DimensionMismatch { what, expected, found } => {
                write!(f, "{what}: expected {expected} entries, found {found}")
            }
            Error::UnknownSymbol(s) => write!(f, "unknown symbol `{s}`"),
            Error::SymbolOutOfRange { index, alphabet_len } => {
                write!(f, "symbol index {index} out of range for alphabet of {alphabet_len}")
            }
            Error::DuplicateSymbol(s) => write!(f, "duplicate symbol `{s}` in alphabet"),
            Error::AlphabetTooLarge(n) => write!(f, "alphabet of {n} symbols is too large"),
            Error::AlphabetMismatch => f.write_str("functions are over different alphabets"),
            Error::NotAPermutation => f.write_str("not a permutation of the index set"),
            Error::NotPure => f.write_str("function is not pure (purify it first)"),
            Error::NotSquare => f.write_str("function is not square"),
            Error::RowColumnWeightMismatch => {
                f.write_str("row and column spaces carry different weights")
            }
            Error::LevelMismatch { expected, found } => {
                write!(f, "expected signature level {expected}, found {found}")
            }
            Error::AxisMismatch => f.write_str("signatures are for different variables"),
            Error::CapExceeded { what, required, limit } => {
                write!(f, "{what}: {required} exceeds the configured cap of {limit}")
            }
            Error::MissingGroundMetric => {
                f.write_str("alphabet has no numeric values and no ground metric was supplied")
            }
            Error::InvalidParameter(msg) => write!(f, "invalid parameter: {msg}"),
            Error::SnappingInfeasible { frequency, max_denominator } => write!(
                f,
                "class frequency {frequency} has no positive grid point within 1/(2*{max_denominator})"
            ),
            Error::InvalidRational(s) => write!(f, "invalid rational `{s}`"),
        }
    }
}

impl core::error::Error for Error {}
