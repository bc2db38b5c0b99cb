use thiserror::Error;

/// Errors shared across the library.
#[derive(Debug, Error)]
pub enum Error {
    /// The digit product of 0 is left undefined; the sequences never
    /// evaluate it.
    #[error("digit product is undefined for 0")]
    ZeroInput,

    /// A block formula was asked for a digit count that does not exist.
    #[error("no odd block with zero digits exists")]
    EmptyBlock,

    /// Range endpoints with the wrong parity for the requested sequence.
    #[error("range endpoint {value} does not have the required {expected} parity")]
    Parity { value: String, expected: &'static str },

    /// lo > hi or an endpoint below the sequence start.
    #[error("invalid range [{lo}, {hi}]")]
    InvalidRange { lo: String, hi: String },

    /// Brute-force evaluation was requested beyond the configured limit.
    #[error("oracle range up to {requested} exceeds the feasibility limit {limit}")]
    OracleLimit { requested: String, limit: u64 },

    /// Interval comparison could not separate the values even at the
    /// precision cap. Signals an unexpected near-equality.
    #[error("comparison indeterminate at n = {n}: interval still straddles the value at {max_bits} bits")]
    Indeterminate { n: String, max_bits: u32 },

    /// A b-file line that is not a comment, blank, or "index value" pair.
    #[error("b-file line {line}: {reason}")]
    BFileParse { line: usize, reason: String },

    /// B-file indices must increase by exactly 1.
    #[error("b-file line {line}: index gap (expected {expected}, found {found})")]
    BFileGap { line: usize, expected: i64, found: i64 },

    /// No index shift aligns the reference with the computed sequence.
    #[error("no offset shift reaches 90% agreement; best was shift {best_shift} with {agreement}/{total} matching")]
    AlignmentFailed { best_shift: i64, agreement: usize, total: usize },

    /// Decimal string that does not parse as a nonnegative integer.
    #[error("not a nonnegative decimal integer: {0:?}")]
    BadDecimal(String),
}
