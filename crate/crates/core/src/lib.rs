//! Exact evaluation and verification of the digit-product sum sequences
//! A061077 (`a`, even numbers), A061078 (`b`, odd numbers) and A061076
//! (`c`, all naturals).
//!
//! The library has three layers:
//!
//! - [`digits`] and [`kernels`] evaluate the sequences through closed
//!   formulas whose cost is polynomial in the number of decimal digits of
//!   `n`, so values at indices with thousands of digits are cheap.
//! - [`oracle`] recomputes the same values by direct accumulation of digit
//!   products, with no reference to the closed forms, and cross-checks the
//!   two routes over whole ranges.
//! - [`bounds`] evaluates the upper bounds `f`, `g`, `h` and the ratio
//!   `a(n)/b(n)` with certified interval arithmetic ([`interval`]), detects
//!   the exact equality families symbolically, and scans ranges for bound
//!   violations.
//!
//! [`bfile`] reads and writes OEIS b-files for the three sequences.

pub mod bfile;
pub mod bounds;
pub mod digits;
pub mod error;
pub mod interval;
pub mod kernels;
pub mod oracle;

pub use bfile::BFile;
pub use bounds::{BoundKind, ComparisonResult, ScanKind, ScanReport};
pub use digits::{digit_product, digits_base10, DigitVector, Natural};
pub use error::Error;
pub use interval::RealInterval;
pub use kernels::{all_sum, even_sum, odd_sum, sequence_value, SequenceId};
pub use oracle::{oracle_sum, verify_range, OracleReport};
