//! Colored-partition generating functions and the two mod-3 congruences.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;
use serde::Serialize;

use crate::arith::{sieve, DivisorKind};
use crate::error::{Error, Result};
use crate::qseries::{product_expand, FactorSign, ProductFactor, ProductSpec, Series};

/// `Π_{n≥1} (1 - q^n)^r`; coefficient `n` is `p_r(n)`.
pub fn p_r_series(r: i32, order: usize) -> Result<Series> {
    if r == 0 {
        return Err(Error::Domain("p_r needs a nonzero r".into()));
    }
    product_expand(&ProductSpec::euler(1, r), order)
}

/// `Π (1 - q^n)^8 (1 - q^{2n})^8`
pub fn mu_series(order: usize) -> Series {
    let spec = ProductSpec::euler(1, 8).with(ProductFactor::new(2, 0, FactorSign::Minus, 8));
    product_expand(&spec, order).expect("valid product")
}

/// `Π (1 - q^{2n})^8 (1 + q^n)^8`
pub fn nu_series(order: usize) -> Series {
    let spec = ProductSpec::euler(2, 8).with(ProductFactor::new(1, 0, FactorSign::Plus, 8));
    product_expand(&spec, order).expect("valid product")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ClaimSequence {
    Mu,
    Nu,
}

impl fmt::Display for ClaimSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ClaimSequence::Mu => "mu",
            ClaimSequence::Nu => "nu",
        })
    }
}

/// Right-hand side of a congruence, evaluated at the outer index `n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClaimTarget {
    Zero,
    Divisor(DivisorKind),
}

/// `seq(n + offset) ≡ target(n) (mod modulus)` for every outer index
/// `1 ≤ n ≤ limit` whose sequence index `n + offset` lies in the class
/// `residue (mod stride)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CongruenceClaim {
    pub sequence: ClaimSequence,
    pub modulus: u64,
    pub residue: u64,
    pub stride: u64,
    pub offset: i64,
    pub target: ClaimTarget,
    pub limit: usize,
}

impl CongruenceClaim {
    /// μ(3n - 1) ≡ 0 (mod 3), over sequence indices up to `limit`.
    pub fn mu_mod3(limit: usize) -> Self {
        CongruenceClaim {
            sequence: ClaimSequence::Mu,
            modulus: 3,
            residue: 2,
            stride: 3,
            offset: 0,
            target: ClaimTarget::Zero,
            limit,
        }
    }

    /// ν(n - 1) ≡ w̃₃(n) (mod 3) for `n ≤ limit`.
    pub fn nu_mod3(limit: usize) -> Self {
        CongruenceClaim {
            sequence: ClaimSequence::Nu,
            modulus: 3,
            residue: 0,
            stride: 1,
            offset: -1,
            target: ClaimTarget::Divisor(DivisorKind::wt(3)),
            limit,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.modulus < 2 || self.stride == 0 || self.residue >= self.stride {
            return Err(Error::Domain(format!("malformed congruence claim {self:?}")));
        }
        Ok(())
    }

    /// Largest sequence index the claim reads.
    pub fn max_sequence_index(&self) -> usize {
        (self.limit as i64 + self.offset).max(0) as usize
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub n: usize,
    pub sequence_index: usize,
    pub residue: u64,
    pub expected: u64,
}

fn residue(v: &BigInt, m: u64) -> u64 {
    v.mod_floor(&BigInt::from(m)).to_u64().expect("residue below modulus")
}

pub fn congruence_scan(claim: &CongruenceClaim) -> Result<Vec<Violation>> {
    let order = claim.max_sequence_index();
    let seq = match claim.sequence {
        ClaimSequence::Mu => mu_series(order),
        ClaimSequence::Nu => nu_series(order),
    };
    congruence_scan_in(claim, &seq)
}

/// Scan against a precomputed sequence; fails if it is too short.
pub fn congruence_scan_in(claim: &CongruenceClaim, seq: &Series) -> Result<Vec<Violation>> {
    claim.validate()?;
    let needed = claim.max_sequence_index();
    if seq.order() < needed {
        return Err(Error::IndexOutOfRange { index: needed, limit: seq.order() });
    }
    let table = match claim.target {
        ClaimTarget::Zero => None,
        ClaimTarget::Divisor(kind) => Some(sieve(kind, claim.limit.max(1))?),
    };
    let mut violations = Vec::new();
    for n in 1..=claim.limit {
        let k = n as i64 + claim.offset;
        if k < 0 || (k as u64) % claim.stride != claim.residue {
            continue;
        }
        let k = k as usize;
        let got = residue(&seq.coeffs()[k], claim.modulus);
        let expected = match &table {
            None => 0,
            Some(t) => residue(&t.at(n as i64), claim.modulus),
        };
        if got != expected {
            violations.push(Violation { n, sequence_index: k, residue: got, expected });
        }
    }
    Ok(violations)
}

pub const PARITY_ORACLE_MAX_N: usize = 20;
pub const PARITY_ORACLE_MAX_R: usize = 3;

/// Count `r`-colored partitions of `n` into distinct parts, split by the
/// parity of the number of parts. Returns `(even, odd)`.
pub fn parity_count_oracle(r: usize, n: usize) -> Result<(u64, u64)> {
    if r == 0 || r > PARITY_ORACLE_MAX_R || n > PARITY_ORACLE_MAX_N {
        return Err(Error::Domain(format!(
            "parity oracle enumerates r in 1..={PARITY_ORACLE_MAX_R} and n <= {PARITY_ORACLE_MAX_N}, got r={r}, n={n}"
        )));
    }
    // Parts are (value, color) pairs; list them in a fixed order and decide
    // inclusion of each one in turn.
    let parts: Vec<usize> = (1..=n).flat_map(|v| std::iter::repeat(v).take(r)).collect();
    let mut counts = [0u64; 2];
    fn walk(parts: &[usize], remaining: usize, used: usize, counts: &mut [u64; 2]) {
        if remaining == 0 {
            counts[used % 2] += 1;
            return;
        }
        for (i, &v) in parts.iter().enumerate() {
            if v > remaining {
                break;
            }
            walk(&parts[i + 1..], remaining - v, used + 1, counts);
        }
    }
    walk(&parts, n, 0, &mut counts);
    Ok((counts[0], counts[1]))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn coeffs(s: &Series) -> Vec<i64> {
        s.coeffs().iter().map(|c| c.try_into().unwrap()).collect()
    }

    #[test]
    fn p_r_examples() {
        assert_eq!(coeffs(&p_r_series(-1, 5).unwrap()), [1, 1, 2, 3, 5, 7]);
        assert_eq!(coeffs(&p_r_series(1, 7).unwrap()), [1, -1, -1, 0, 0, 1, 0, 1]);
        assert_eq!(coeffs(&p_r_series(2, 3).unwrap()), [1, -2, -1, 2]);
        assert!(p_r_series(0, 3).is_err());
    }

    #[test]
    fn mu_and_nu_leading_terms() {
        let mu = mu_series(2);
        assert_eq!(coeffs(&mu), [1, -8, 12]);
        assert_eq!(residue(&mu.coeff(2), 3), 0);
        let nu = nu_series(2);
        assert_eq!(coeffs(&nu), [1, 8, 28]);
    }

    #[test]
    fn congruences_hold_on_a_short_range() {
        assert!(congruence_scan(&CongruenceClaim::mu_mod3(300)).unwrap().is_empty());
        assert!(congruence_scan(&CongruenceClaim::nu_mod3(300)).unwrap().is_empty());
    }

    #[test]
    fn unfiltered_mu_claim_fails() {
        let claim = CongruenceClaim { residue: 0, stride: 1, ..CongruenceClaim::mu_mod3(10) };
        let v = congruence_scan(&claim).unwrap();
        assert_eq!(v[0], Violation { n: 1, sequence_index: 1, residue: 1, expected: 0 });
    }

    #[test]
    fn short_sequence_and_malformed_claims_error() {
        let claim = CongruenceClaim::nu_mod3(50);
        assert!(matches!(
            congruence_scan_in(&claim, &nu_series(10)),
            Err(Error::IndexOutOfRange { index: 49, limit: 10 })
        ));
        let bad = CongruenceClaim { modulus: 1, ..CongruenceClaim::mu_mod3(10) };
        assert!(congruence_scan(&bad).is_err());
    }

    #[test]
    fn parity_oracle_examples() {
        assert_eq!(parity_count_oracle(1, 0).unwrap(), (1, 0));
        // 5, 4+1, 3+2
        assert_eq!(parity_count_oracle(1, 5).unwrap(), (2, 1));
        // 2r, 2g | 1r+1g
        assert_eq!(parity_count_oracle(2, 2).unwrap(), (1, 2));
        assert!(parity_count_oracle(4, 2).is_err());
        assert!(parity_count_oracle(1, 21).is_err());
        assert!(parity_count_oracle(0, 2).is_err());
    }

    #[test]
    fn parity_oracle_matches_p_r() {
        for r in 1..=PARITY_ORACLE_MAX_R {
            let series = p_r_series(r as i32, PARITY_ORACLE_MAX_N).unwrap();
            for n in 0..=PARITY_ORACLE_MAX_N {
                let (even, odd) = parity_count_oracle(r, n).unwrap();
                assert_eq!(BigInt::from(even as i64 - odd as i64), series.coeff(n), "r={r} n={n}");
            }
        }
    }
}
