//! Exact q-series arithmetic for signed divisor sums, with a small
//! identity language, representation counts, partition congruences and
//! floating-point evaluation at elliptic points.

pub mod analytic;
pub mod arith;
pub mod error;
pub mod generators;
pub mod identity;
pub mod partitions;
pub mod qseries;
pub mod representations;

pub use error::{Error, ParseError, ParseErrorKind, Result};
pub use qseries::Series;
