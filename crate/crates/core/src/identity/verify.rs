use num_bigint::BigInt;
use num_rational::BigRational;
use rayon::prelude::*;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use super::ast::{Expected, IdentityRecord};
use super::eval::{Evaluated, Evaluator};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Failure {
    pub n: usize,
    pub lhs: BigRational,
    pub rhs: BigRational,
}

/// Rationals are written as decimal strings, `a/b` only when not integral.
pub fn rational_string(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl Serialize for Failure {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("Failure", 3)?;
        st.serialize_field("n", &self.n)?;
        st.serialize_field("lhs", &rational_string(&self.lhs))?;
        st.serialize_field("rhs", &rational_string(&self.rhs))?;
        st.end()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerificationOutcome {
    pub status: Status,
    #[serde(rename = "order")]
    pub checked_order: usize,
    pub first_failure: Option<Failure>,
}

impl VerificationOutcome {
    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    pub fn pass(order: usize) -> Self {
        VerificationOutcome { status: Status::Pass, checked_order: order, first_failure: None }
    }

    pub fn fail(order: usize, failure: Failure) -> Self {
        VerificationOutcome { status: Status::Fail, checked_order: order, first_failure: Some(failure) }
    }
}

/// Compare two evaluated sides by cross-multiplying the denominators.
pub fn compare(lhs: &Evaluated, rhs: &Evaluated, order: usize) -> VerificationOutcome {
    let a = lhs.numerator.scale(&rhs.denominator);
    let b = rhs.numerator.scale(&lhs.denominator);
    match a.first_mismatch(&b).filter(|&n| n <= order) {
        None => VerificationOutcome::pass(order),
        Some(n) => VerificationOutcome::fail(order, Failure { n, lhs: lhs.coeff(n), rhs: rhs.coeff(n) }),
    }
}

/// Check `lhs == rhs` on the coefficients of `q^0..q^order`.
pub fn verify(record: &IdentityRecord, order: usize) -> VerificationOutcome {
    let mut ev = Evaluator::new(order);
    let lhs = ev.eval(&record.lhs);
    let rhs = ev.eval(&record.rhs);
    compare(&lhs, &rhs, order)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SuiteEntry {
    pub name: String,
    pub expected: Expected,
    pub status: Status,
    pub order: usize,
    pub first_failure: Option<Failure>,
}

impl SuiteEntry {
    /// An expected-pass record that failed.
    pub fn is_regression(&self) -> bool {
        self.expected == Expected::Pass && self.status == Status::Fail
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
#[serde(transparent)]
pub struct SuiteReport {
    pub entries: Vec<SuiteEntry>,
}

impl SuiteReport {
    pub fn success(&self) -> bool {
        !self.entries.iter().any(SuiteEntry::is_regression)
    }

    pub fn get(&self, name: &str) -> Option<&SuiteEntry> {
        self.entries.iter().find(|e| e.name == name)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Verify every record, in parallel, reporting in input order.
pub fn run_suite(records: &[IdentityRecord], order: usize) -> SuiteReport {
    let entries = records
        .par_iter()
        .map(|r| {
            let out = verify(r, order);
            SuiteEntry {
                name: r.name.clone(),
                expected: r.expected,
                status: out.status,
                order: out.checked_order,
                first_failure: out.first_failure,
            }
        })
        .collect();
    SuiteReport { entries }
}

/// Integer-valued failure, for callers comparing against exact integers.
pub fn failure_ints(f: &Failure) -> Option<(BigInt, BigInt)> {
    (f.lhs.is_integer() && f.rhs.is_integer()).then(|| (f.lhs.to_integer(), f.rhs.to_integer()))
}
