//! Representation counts by 4 and 8 squares or triangular numbers.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::arith::{point_eval, DivisorKind};
use crate::error::{Error, Result};
pub use crate::generators::RepKind;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RepTable {
    pub kind: RepKind,
    pub s: u32,
    /// `counts[n]` for `n = 0..=limit`.
    pub counts: Vec<BigInt>,
}

impl RepTable {
    pub fn limit(&self) -> usize {
        self.counts.len() - 1
    }
}

/// Divisor sum at `n`, zero outside the positive integers.
fn div(kind: DivisorKind, n: i64) -> BigInt {
    if n <= 0 {
        BigInt::zero()
    } else {
        point_eval(kind, n).expect("n >= 1")
    }
}

/// Divisor sum at `n / d`, zero unless that is a positive integer.
fn div_ratio(kind: DivisorKind, n: i64, d: i64) -> BigInt {
    if n % d == 0 {
        div(kind, n / d)
    } else {
        BigInt::zero()
    }
}

/// Count representations by `s`-fold convolution of the base indicator
/// (one entry per square `k²` with sign choices, one per triangular number).
pub fn rep_bruteforce(kind: RepKind, s: u32, limit: usize) -> Result<RepTable> {
    if s == 0 {
        return Err(Error::Domain("number of summands s must be at least 1".into()));
    }
    let mut base = vec![0u64; limit + 1];
    match kind {
        RepKind::Squares => {
            base[0] = 1;
            for k in (1..).take_while(|k| k * k <= limit) {
                base[k * k] = 2;
            }
        }
        RepKind::Triangular => {
            for k in (0..).take_while(|k| k * (k + 1) / 2 <= limit) {
                base[k * (k + 1) / 2] += 1;
            }
        }
    }
    let support: Vec<(usize, u64)> = base.iter().copied().enumerate().filter(|&(_, c)| c != 0).collect();
    let mut counts = vec![BigInt::zero(); limit + 1];
    counts[0] = BigInt::one();
    for _ in 0..s {
        let mut next = vec![BigInt::zero(); limit + 1];
        for (n, c) in counts.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for &(k, w) in support.iter().take_while(|&&(k, _)| n + k <= limit) {
                next[n + k] += c * w;
            }
        }
        counts = next;
    }
    Ok(RepTable { kind, s, counts })
}

/// Closed forms for `r_4`, `δ_4`, `r_8`, `δ_8` in terms of `w̃`, `ŵ`, `w̃₃`.
pub fn rep_formula(kind: RepKind, s: u32, n: i64) -> Result<BigInt> {
    let (wt, wh, wt3) = (DivisorKind::wt(1), DivisorKind::wh(1), DivisorKind::wt(3));
    match (kind, s) {
        (RepKind::Squares, _) if n < 1 => {
            Err(Error::Domain(format!("square-count formulas need n >= 1, got {n}")))
        }
        (RepKind::Triangular, _) if n < 0 => {
            Err(Error::Domain(format!("triangular-count formulas need n >= 0, got {n}")))
        }
        (RepKind::Squares, 4) => Ok(16 * div_ratio(wh, n, 2) + 8 * div(wh, n)),
        (RepKind::Triangular, 4) => Ok(div(wt, 2 * n + 1)),
        (RepKind::Squares, 8) => {
            let sign = if n % 2 == 1 { 16 } else { -16 };
            Ok(sign * div(wt3, n))
        }
        (RepKind::Triangular, 8) => {
            let eight_delta = div(wt3, n + 1) - div(wt3, 2 * (n + 1));
            let (q, r) = eight_delta.div_rem(&BigInt::from(8));
            if !r.is_zero() {
                return Err(Error::InexactDivision(format!(
                    "w̃₃({}) - w̃₃({}) = {eight_delta} is not divisible by 8",
                    n + 1,
                    2 * (n + 1)
                )));
            }
            Ok(q)
        }
        (_, s) => Err(Error::Domain(format!("closed forms exist only for s = 4 and s = 8, got {s}"))),
    }
}

/// Eight times the sum of the divisors of `n` not divisible by 4.
pub fn jacobi_r4(n: i64) -> Result<BigInt> {
    if n < 1 {
        return Err(Error::Domain(format!("r_4 formula needs n >= 1, got {n}")));
    }
    let sigma = DivisorKind::sigma(1);
    Ok(8 * (div(sigma, n) - 4 * div_ratio(sigma, n, 4)))
}

/// `r_8(n) = 16σ₃(n) - 32σ₃(n/2) + 256σ₃(n/4)`.
pub fn williams_r8(n: i64) -> BigInt {
    let s3 = DivisorKind::sigma(3);
    16 * div(s3, n) - 32 * div_ratio(s3, n, 2) + 256 * div_ratio(s3, n, 4)
}

/// `δ_8(n) = σ₃(n+1) - σ₃((n+1)/2)`.
pub fn ono_delta8(n: i64) -> BigInt {
    let s3 = DivisorKind::sigma(3);
    div(s3, n + 1) - div_ratio(s3, n + 1, 2)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(t: &RepTable) -> Vec<i64> {
        t.counts.iter().map(|c| c.try_into().unwrap()).collect()
    }

    #[test]
    fn bruteforce_examples() {
        assert_eq!(ints(&rep_bruteforce(RepKind::Squares, 4, 2).unwrap()), [1, 8, 24]);
        assert_eq!(rep_bruteforce(RepKind::Squares, 8, 3).unwrap().counts[3], BigInt::from(448));
        assert_eq!(rep_bruteforce(RepKind::Triangular, 8, 2).unwrap().counts[2], BigInt::from(28));
        assert_eq!(ints(&rep_bruteforce(RepKind::Squares, 1, 4).unwrap()), [1, 2, 0, 0, 2]);
        assert!(rep_bruteforce(RepKind::Squares, 0, 4).is_err());
    }

    #[test]
    fn formula_examples() {
        assert_eq!(rep_formula(RepKind::Squares, 4, 2).unwrap(), BigInt::from(24));
        assert_eq!(rep_formula(RepKind::Triangular, 4, 2).unwrap(), BigInt::from(6));
        assert_eq!(rep_formula(RepKind::Squares, 8, 2).unwrap(), BigInt::from(112));
        assert_eq!(rep_formula(RepKind::Triangular, 8, 1).unwrap(), BigInt::from(8));
        assert_eq!(rep_formula(RepKind::Triangular, 8, 0).unwrap(), BigInt::from(1));
        assert_eq!(rep_formula(RepKind::Triangular, 4, 0).unwrap(), BigInt::from(1));
    }

    #[test]
    fn formula_errors() {
        assert!(rep_formula(RepKind::Squares, 4, 0).is_err());
        assert!(rep_formula(RepKind::Triangular, 8, -1).is_err());
        assert!(matches!(rep_formula(RepKind::Squares, 6, 3), Err(Error::Domain(_))));
    }

    #[test]
    fn jacobi_examples() {
        assert_eq!(jacobi_r4(1).unwrap(), BigInt::from(8));
        assert_eq!(jacobi_r4(4).unwrap(), BigInt::from(24));
        assert_eq!(jacobi_r4(2).unwrap(), BigInt::from(24));
        assert!(jacobi_r4(0).is_err());
    }

    #[test]
    fn closed_forms_agree_with_counts() {
        let n_max = 200;
        let r4 = rep_bruteforce(RepKind::Squares, 4, n_max).unwrap();
        let r8 = rep_bruteforce(RepKind::Squares, 8, n_max).unwrap();
        let d4 = rep_bruteforce(RepKind::Triangular, 4, n_max).unwrap();
        let d8 = rep_bruteforce(RepKind::Triangular, 8, n_max).unwrap();
        for n in 1..=n_max {
            let k = n as i64;
            assert_eq!(rep_formula(RepKind::Squares, 4, k).unwrap(), r4.counts[n]);
            assert_eq!(jacobi_r4(k).unwrap(), r4.counts[n]);
            assert_eq!(rep_formula(RepKind::Squares, 8, k).unwrap(), r8.counts[n]);
            assert_eq!(williams_r8(k), r8.counts[n]);
            assert_eq!(rep_formula(RepKind::Triangular, 4, k).unwrap(), d4.counts[n]);
            assert_eq!(rep_formula(RepKind::Triangular, 8, k).unwrap(), d8.counts[n]);
            assert_eq!(ono_delta8(k), d8.counts[n]);
        }
    }
}
