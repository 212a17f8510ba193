use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed};
use serde::Serialize;

use crate::generators::SeriesName;

/// Rational literal as written in source. Not reduced, so printing and
/// reparsing reproduces it exactly.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Literal {
    pub numerator: BigInt,
    pub denominator: BigInt,
}

impl Literal {
    pub fn integer(n: impl Into<BigInt>) -> Self {
        Literal { numerator: n.into(), denominator: BigInt::one() }
    }

    pub fn ratio(numerator: impl Into<BigInt>, denominator: impl Into<BigInt>) -> Self {
        Literal { numerator: numerator.into(), denominator: denominator.into() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum UnaryOp {
    /// `q d/dq`
    D,
    /// `q -> q^k`
    Dilate(usize),
    /// `q -> -q`
    Alt,
    Even,
    Odd,
}

impl UnaryOp {
    pub fn keyword(self) -> &'static str {
        match self {
            UnaryOp::D => "D",
            UnaryOp::Dilate(_) => "dilate",
            UnaryOp::Alt => "alt",
            UnaryOp::Even => "even",
            UnaryOp::Odd => "odd",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SeriesExpr {
    Literal(Literal),
    Name(SeriesName),
    Add(Box<SeriesExpr>, Box<SeriesExpr>),
    Sub(Box<SeriesExpr>, Box<SeriesExpr>),
    Mul(Box<SeriesExpr>, Box<SeriesExpr>),
    Neg(Box<SeriesExpr>),
    Pow(Box<SeriesExpr>, u32),
    Apply(UnaryOp, Box<SeriesExpr>),
}

impl SeriesExpr {
    pub fn int(n: i64) -> Self {
        SeriesExpr::Literal(Literal::integer(n))
    }

    pub fn name(name: SeriesName) -> Self {
        SeriesExpr::Name(name)
    }

    pub fn add(self, rhs: SeriesExpr) -> Self {
        SeriesExpr::Add(Box::new(self), Box::new(rhs))
    }

    pub fn sub(self, rhs: SeriesExpr) -> Self {
        SeriesExpr::Sub(Box::new(self), Box::new(rhs))
    }

    pub fn mul(self, rhs: SeriesExpr) -> Self {
        SeriesExpr::Mul(Box::new(self), Box::new(rhs))
    }

    pub fn neg(self) -> Self {
        SeriesExpr::Neg(Box::new(self))
    }

    pub fn pow(self, e: u32) -> Self {
        SeriesExpr::Pow(Box::new(self), e)
    }

    pub fn apply(self, op: UnaryOp) -> Self {
        SeriesExpr::Apply(op, Box::new(self))
    }

    /// Binds no looser than a `factor` in the grammar.
    fn is_factor(&self) -> bool {
        match self {
            SeriesExpr::Literal(l) => !l.numerator.is_negative(),
            SeriesExpr::Name(_) | SeriesExpr::Apply(..) | SeriesExpr::Pow(..) => true,
            _ => false,
        }
    }

    /// Can stand as the base of `^` without parentheses.
    fn is_base(&self) -> bool {
        matches!(self, SeriesExpr::Name(_) | SeriesExpr::Apply(..))
            || matches!(self, SeriesExpr::Literal(l) if !l.numerator.is_negative())
    }
}

/// Prints with the fewest parentheses that still reparse to the same tree.
impl fmt::Display for SeriesExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SeriesExpr::Literal(l) if l.numerator.is_negative() => {
                write!(f, "-")?;
                write_literal(f, &-&l.numerator, &l.denominator)
            }
            SeriesExpr::Literal(l) => write_literal(f, &l.numerator, &l.denominator),
            SeriesExpr::Name(n) => write!(f, "{n}"),
            SeriesExpr::Add(a, b) | SeriesExpr::Sub(a, b) => {
                let op = if matches!(self, SeriesExpr::Add(..)) { "+" } else { "-" };
                write!(f, "{a} {op} ")?;
                if matches!(**b, SeriesExpr::Add(..) | SeriesExpr::Sub(..)) {
                    write!(f, "({b})")
                } else {
                    write!(f, "{b}")
                }
            }
            SeriesExpr::Mul(a, b) => {
                if a.is_factor() || matches!(**a, SeriesExpr::Mul(..)) {
                    write!(f, "{a}")?;
                } else {
                    write!(f, "({a})")?;
                }
                if b.is_factor() {
                    write!(f, "*{b}")
                } else {
                    write!(f, "*({b})")
                }
            }
            SeriesExpr::Neg(a) => {
                if a.is_factor() || matches!(**a, SeriesExpr::Mul(..)) {
                    write!(f, "-{a}")
                } else {
                    write!(f, "-({a})")
                }
            }
            SeriesExpr::Pow(a, e) => {
                if a.is_base() {
                    write!(f, "{a}^{e}")
                } else {
                    write!(f, "({a})^{e}")
                }
            }
            SeriesExpr::Apply(UnaryOp::Dilate(k), a) => write!(f, "dilate({a}, {k})"),
            SeriesExpr::Apply(op, a) => write!(f, "{}({a})", op.keyword()),
        }
    }
}

fn write_literal(f: &mut fmt::Formatter<'_>, num: &BigInt, den: &BigInt) -> fmt::Result {
    if den.is_one() {
        write!(f, "{num}")
    } else {
        write!(f, "{num}/{den}")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Expected {
    Pass,
    Audit,
}

impl fmt::Display for Expected {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Expected::Pass => "pass",
            Expected::Audit => "audit",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdentityRecord {
    pub name: String,
    pub lhs: SeriesExpr,
    pub rhs: SeriesExpr,
    pub expected: Expected,
    pub anchor: Option<String>,
    pub note: Option<String>,
}

impl IdentityRecord {
    pub fn new(name: impl Into<String>, lhs: SeriesExpr, rhs: SeriesExpr, expected: Expected) -> Self {
        IdentityRecord { name: name.into(), lhs, rhs, expected, anchor: None, note: None }
    }

    pub fn swapped(&self) -> Self {
        IdentityRecord { lhs: self.rhs.clone(), rhs: self.lhs.clone(), ..self.clone() }
    }
}

fn write_string(f: &mut fmt::Formatter<'_>, s: &str) -> fmt::Result {
    f.write_str("\"")?;
    for c in s.chars() {
        match c {
            '"' => f.write_str("\\\"")?,
            '\\' => f.write_str("\\\\")?,
            _ => write!(f, "{c}")?,
        }
    }
    f.write_str("\"")
}

/// One DSL statement, terminated by `;`.
impl fmt::Display for IdentityRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("identity ")?;
        write_string(f, &self.name)?;
        write!(f, " expect {}", self.expected)?;
        if let Some(anchor) = &self.anchor {
            f.write_str(" anchor ")?;
            write_string(f, anchor)?;
        }
        if let Some(note) = &self.note {
            f.write_str(" note ")?;
            write_string(f, note)?;
        }
        write!(f, ": {} == {};", self.lhs, self.rhs)
    }
}

/// Prints a list of records as a parseable file, one statement per line.
pub fn print_records(records: &[IdentityRecord]) -> String {
    records.iter().map(|r| format!("{r}\n")).collect()
}
