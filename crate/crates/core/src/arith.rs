//! Signed divisor sums.
//!
//! Three families are supported, all indexed by a positive exponent `s`:
//!
//! * `sigma`: `σ_s(n) = Σ_{d|n} d^s`
//! * `wt`:    `w̃_s(n) = Σ_{d|n} (-1)^(d-1) d^s`
//! * `wh`:    `ŵ_s(n) = Σ_{d|n} (-1)^(n/d-1) d^s`
//!
//! [`point_eval`] enumerates divisors directly and is the oracle for
//! [`sieve`], which fills a whole [`DivisorTable`] at once. Tables return 0
//! for any argument outside `1..`, including non-integral ones such as `n/2`
//! for odd `n`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// Largest limit [`sieve`] accepts unless a caller passes its own capacity.
pub const DEFAULT_SIEVE_CAPACITY: usize = 10_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DivisorFamily {
    Sigma,
    Wt,
    Wh,
}

impl DivisorFamily {
    /// Sign attached to the divisor `d` of `n`.
    #[inline]
    fn sign(self, d: u64, n: u64) -> i32 {
        let odd_exponent = match self {
            DivisorFamily::Sigma => false,
            DivisorFamily::Wt => d % 2 == 0,
            DivisorFamily::Wh => (n / d) % 2 == 0,
        };
        if odd_exponent {
            -1
        } else {
            1
        }
    }
}

impl fmt::Display for DivisorFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DivisorFamily::Sigma => "sigma",
            DivisorFamily::Wt => "wt",
            DivisorFamily::Wh => "wh",
        })
    }
}

impl FromStr for DivisorFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sigma" => Ok(DivisorFamily::Sigma),
            "wt" => Ok(DivisorFamily::Wt),
            "wh" => Ok(DivisorFamily::Wh),
            other => Err(Error::Domain(format!("unknown divisor family `{other}`"))),
        }
    }
}

/// A divisor family together with its exponent `s ≥ 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct DivisorKind {
    family: DivisorFamily,
    s: u32,
}

impl DivisorKind {
    pub fn new(family: DivisorFamily, s: u32) -> Result<Self> {
        if s == 0 {
            return Err(Error::Domain("divisor exponent s must be at least 1".into()));
        }
        Ok(DivisorKind { family, s })
    }

    pub fn sigma(s: u32) -> Self {
        Self::new(DivisorFamily::Sigma, s).expect("s >= 1")
    }

    pub fn wt(s: u32) -> Self {
        Self::new(DivisorFamily::Wt, s).expect("s >= 1")
    }

    pub fn wh(s: u32) -> Self {
        Self::new(DivisorFamily::Wh, s).expect("s >= 1")
    }

    pub fn family(&self) -> DivisorFamily {
        self.family
    }

    pub fn exponent(&self) -> u32 {
        self.s
    }
}

impl fmt::Display for DivisorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}_{}", self.family, self.s)
    }
}

/// Sum over the divisors of `n` by trial division up to `√n`.
pub fn point_eval(kind: DivisorKind, n: i64) -> Result<BigInt> {
    if n <= 0 {
        return Err(Error::Domain(format!("{kind} is only defined for n >= 1, got {n}")));
    }
    let n = n as u64;
    let mut total = BigInt::zero();
    let mut add = |d: u64| {
        let term = BigInt::from(d).pow(kind.s);
        if kind.family.sign(d, n) < 0 {
            total -= term;
        } else {
            total += term;
        }
    };
    let mut d = 1u64;
    while d * d <= n {
        if n % d == 0 {
            add(d);
            let e = n / d;
            if e != d {
                add(e);
            }
        }
        d += 1;
    }
    Ok(total)
}

/// Values of one divisor function for `n = 0..=limit`.
///
/// Slot 0 holds 0; the divisor sums are not defined there and every formula
/// that reaches it does so through the out-of-domain convention.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DivisorTable {
    kind: DivisorKind,
    values: Vec<BigInt>,
}

impl DivisorTable {
    pub fn kind(&self) -> DivisorKind {
        self.kind
    }

    pub fn limit(&self) -> usize {
        self.values.len() - 1
    }

    /// All values, indexed from 0.
    pub fn as_slice(&self) -> &[BigInt] {
        &self.values
    }

    pub fn try_at(&self, n: i64) -> Result<BigInt> {
        if n <= 0 {
            return Ok(BigInt::zero());
        }
        self.values
            .get(n as usize)
            .cloned()
            .ok_or(Error::IndexOutOfRange { index: n as usize, limit: self.limit() })
    }

    /// Value at `n`, or 0 when `n ≤ 0`.
    ///
    /// Panics when `n` lies beyond the sieved limit.
    pub fn at(&self, n: i64) -> BigInt {
        self.try_at(n).unwrap_or_else(|e| panic!("{}: {e}", self.kind))
    }

    /// Value at the rational argument `n / d`; 0 unless it is a positive integer.
    pub fn at_ratio(&self, n: i64, d: i64) -> BigInt {
        if d == 0 || n % d != 0 {
            BigInt::zero()
        } else {
            self.at(n / d)
        }
    }
}

pub fn sieve(kind: DivisorKind, limit: usize) -> Result<DivisorTable> {
    sieve_with_capacity(kind, limit, DEFAULT_SIEVE_CAPACITY)
}

/// Divisor-marking sieve: every `d ≤ limit` adds `±d^s` to each multiple.
pub fn sieve_with_capacity(kind: DivisorKind, limit: usize, capacity: usize) -> Result<DivisorTable> {
    if limit == 0 {
        return Err(Error::Domain("sieve limit must be at least 1".into()));
    }
    if limit > capacity {
        return Err(Error::Capacity { limit, capacity });
    }
    let values = sieve_i128(kind, limit).unwrap_or_else(|| sieve_big(kind, limit));
    Ok(DivisorTable { kind, values })
}

fn sieve_i128(kind: DivisorKind, limit: usize) -> Option<Vec<BigInt>> {
    let mut acc = vec![0i128; limit + 1];
    for d in 1..=limit {
        let power = (d as i128).checked_pow(kind.s)?;
        for m in (d..=limit).step_by(d) {
            let term = if kind.family.sign(d as u64, m as u64) < 0 { -power } else { power };
            acc[m] = acc[m].checked_add(term)?;
        }
    }
    Some(acc.into_iter().map(BigInt::from).collect())
}

fn sieve_big(kind: DivisorKind, limit: usize) -> Vec<BigInt> {
    let mut acc = vec![BigInt::zero(); limit + 1];
    for d in 1..=limit {
        let power = BigInt::from(d).pow(kind.s);
        for m in (d..=limit).step_by(d) {
            if kind.family.sign(d as u64, m as u64) < 0 {
                acc[m] -= &power;
            } else {
                acc[m] += &power;
            }
        }
    }
    acc
}

/// Summation shapes of the convolution sums. `m` always starts at 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ConvolutionShape {
    /// `Σ_{m<n} f(m) g(n-m)`
    Plain,
    /// `Σ_{m<n/2} f(m) g(n-2m)`
    Dilated,
    /// `Σ_{m<n/2} f(2m) g(n-2m)`
    EvenArgument,
    /// `Σ_{m<(n+1)/2} f(2m-1) g(n-(2m-1))`
    OddArgument,
    /// `Σ_{m<n/2} f(2m) g(n/2-m)`; zero for odd `n`.
    HalfTargetEven,
    /// `Σ_{m<(n+1)/2} f(2m-1) g((n+1)/2-m)`; zero for even `n`.
    HalfTargetOdd,
}

impl ConvolutionShape {
    /// Index pairs `(i, j)` contributing `f(i) g(j)` to the sum at `n`.
    pub fn index_pairs(self, n: usize) -> Vec<(usize, usize)> {
        let mut pairs = Vec::new();
        match self {
            ConvolutionShape::Plain => pairs.extend((1..n).map(|m| (m, n - m))),
            ConvolutionShape::Dilated => {
                pairs.extend((1..).take_while(|m| 2 * m < n).map(|m| (m, n - 2 * m)))
            }
            ConvolutionShape::EvenArgument => {
                pairs.extend((1..).take_while(|m| 2 * m < n).map(|m| (2 * m, n - 2 * m)))
            }
            ConvolutionShape::OddArgument => {
                pairs.extend((1..).take_while(|m| 2 * m - 1 < n).map(|m| (2 * m - 1, n + 1 - 2 * m)))
            }
            ConvolutionShape::HalfTargetEven => {
                if n % 2 == 0 {
                    let half = n / 2;
                    pairs.extend((1..half).map(|m| (2 * m, half - m)));
                }
            }
            ConvolutionShape::HalfTargetOdd => {
                if n % 2 == 1 {
                    let half = (n + 1) / 2;
                    pairs.extend((1..half).map(|m| (2 * m - 1, half - m)));
                }
            }
        }
        pairs
    }
}

/// Exact value of a convolution sum over two integer sequences indexed from 0.
pub fn convolution(f: &[BigInt], g: &[BigInt], shape: ConvolutionShape, n: usize) -> Result<BigRational> {
    if n == 0 {
        return Err(Error::Domain("convolution index n must be at least 1".into()));
    }
    let pairs = shape.index_pairs(n);
    let check = |index: usize, seq: &[BigInt]| {
        if index >= seq.len() {
            Err(Error::IndexOutOfRange { index, limit: seq.len().saturating_sub(1) })
        } else {
            Ok(())
        }
    };
    if let Some(&(i, _)) = pairs.iter().max_by_key(|p| p.0) {
        check(i, f)?;
    }
    if let Some(&(_, j)) = pairs.iter().max_by_key(|p| p.1) {
        check(j, g)?;
    }
    let total: BigInt = pairs.iter().map(|&(i, j)| &f[i] * &g[j]).sum();
    Ok(BigRational::new(total, BigInt::one()))
}
