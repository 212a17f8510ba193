use std::fmt;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("limit {limit} exceeds configured capacity {capacity}")]
    Capacity { limit: usize, capacity: usize },

    #[error("index {index} out of range (table covers 0..={limit})")]
    IndexOutOfRange { index: usize, limit: usize },

    #[error(transparent)]
    Parse(#[from] ParseError),

    #[error("degenerate basis: leading rows have rank {rank} < {size}")]
    DegenerateBasis { rank: usize, size: usize },

    #[error("series did not converge within {terms} terms")]
    NonConvergence { terms: usize },

    #[error("inexact division: {0}")]
    InexactDivision(String),

    #[error("independent constructions of {name} disagree at q^{index}")]
    CrossCheck { name: String, index: usize },
}

/// A diagnostic from the identity DSL front-end, positioned at a 1-based
/// line and column of the source text.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseErrorKind {
    Syntax(String),
    UnknownName(String),
    NonIntegerExponent(String),
    ZeroDenominator,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: ", self.line, self.column)?;
        match &self.kind {
            ParseErrorKind::Syntax(msg) => write!(f, "syntax error: {msg}"),
            ParseErrorKind::UnknownName(name) => write!(f, "unknown series name `{name}`"),
            ParseErrorKind::NonIntegerExponent(tok) => {
                write!(f, "exponent must be a non-negative integer, found `{tok}`")
            }
            ParseErrorKind::ZeroDenominator => write!(f, "rational literal has zero denominator"),
        }
    }
}
