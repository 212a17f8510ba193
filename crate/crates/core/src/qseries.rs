//! Truncated power series in `q` with exact integer coefficients.
//!
//! A [`Series`] stores `a_0..=a_N`; `N` is its truncation order. Binary
//! operations silently truncate to the smaller order of their operands,
//! which is exactly how truncated expansions compose.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::binomial;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub struct Series {
    coeffs: Vec<BigInt>,
}

/// Equality to the smaller of the two truncation orders.
///
/// This mirrors the meaning of "equal to order N" and is therefore not
/// transitive across series of different orders.
impl PartialEq for Series {
    fn eq(&self, other: &Self) -> bool {
        self.first_mismatch(other).is_none()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Parity {
    Even,
    Odd,
}

impl Series {
    pub fn from_coeffs(coeffs: Vec<BigInt>) -> Self {
        assert!(!coeffs.is_empty(), "a series keeps at least the constant term");
        Series { coeffs }
    }

    pub fn from_i64s(values: &[i64]) -> Self {
        Self::from_coeffs(values.iter().map(|&v| BigInt::from(v)).collect())
    }

    pub fn zero(order: usize) -> Self {
        Series { coeffs: vec![BigInt::zero(); order + 1] }
    }

    pub fn constant(c: impl Into<BigInt>, order: usize) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = c.into();
        s
    }

    pub fn one(order: usize) -> Self {
        Self::constant(1, order)
    }

    /// `c·q^k`, or zero when `k` exceeds `order`.
    pub fn monomial(k: usize, c: impl Into<BigInt>, order: usize) -> Self {
        let mut s = Self::zero(order);
        if k <= order {
            s.coeffs[k] = c.into();
        }
        s
    }

    /// Build from a function of the index.
    pub fn from_fn(order: usize, f: impl FnMut(usize) -> BigInt) -> Self {
        Series { coeffs: (0..=order).map(f).collect() }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<BigInt> {
        self.coeffs
    }

    /// Coefficient of `q^n`; zero past the truncation order.
    pub fn coeff(&self, n: usize) -> BigInt {
        self.coeffs.get(n).cloned().unwrap_or_default()
    }

    pub fn truncate(&self, order: usize) -> Series {
        let keep = order.min(self.order());
        Series { coeffs: self.coeffs[..=keep].to_vec() }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// First index `n ≤ min(order)` where the coefficients differ.
    pub fn first_mismatch(&self, other: &Series) -> Option<usize> {
        self.coeffs.iter().zip(&other.coeffs).position(|(a, b)| a != b)
    }

    pub fn scale(&self, c: &BigInt) -> Series {
        Series { coeffs: self.coeffs.iter().map(|a| a * c).collect() }
    }

    pub fn scale_i64(&self, c: i64) -> Series {
        self.scale(&BigInt::from(c))
    }

    /// Exact division of every coefficient; `None` if some coefficient is
    /// not divisible by `d`.
    pub fn div_exact(&self, d: &BigInt) -> Option<Series> {
        let mut out = Vec::with_capacity(self.coeffs.len());
        for a in &self.coeffs {
            if !(a % d).is_zero() {
                return None;
            }
            out.push(a / d);
        }
        Some(Series { coeffs: out })
    }

    /// `e`-th power by repeated squaring; `a^0 = 1`.
    pub fn power(&self, mut e: u32) -> Series {
        let mut result = Series::one(self.order());
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// Multiplicative inverse to the same order; needs `a_0 = ±1`.
    pub fn reciprocal(&self) -> Result<Series> {
        let a0 = &self.coeffs[0];
        if !a0.abs().is_one() {
            return Err(Error::Domain(format!(
                "reciprocal needs a unit constant term, found {a0}"
            )));
        }
        let n = self.order();
        let mut b: Vec<BigInt> = Vec::with_capacity(n + 1);
        b.push(a0.clone());
        for k in 1..=n {
            let mut acc = BigInt::zero();
            for j in 1..=k {
                if !self.coeffs[j].is_zero() {
                    acc += &self.coeffs[j] * &b[k - j];
                }
            }
            // b_k = -a0⁻¹ Σ a_j b_{k-j}, and a0⁻¹ = a0 for units.
            b.push(-(acc * a0));
        }
        Ok(Series { coeffs: b })
    }

    /// The operator `q·d/dq`: `a_n ↦ n·a_n`.
    pub fn theta_derivative(&self) -> Series {
        Series {
            coeffs: self.coeffs.iter().enumerate().map(|(n, a)| a * BigInt::from(n)).collect(),
        }
    }

    /// Substitute `q → q^k`, keeping the order.
    pub fn dilate(&self, k: usize) -> Result<Series> {
        if k == 0 {
            return Err(Error::Domain("dilation factor must be at least 1".into()));
        }
        let n = self.order();
        let mut out = Series::zero(n);
        for (i, a) in self.coeffs.iter().enumerate() {
            match i.checked_mul(k) {
                Some(j) if j <= n => out.coeffs[j] = a.clone(),
                _ => break,
            }
        }
        Ok(out)
    }

    /// Substitute `q → -q`.
    pub fn alternate(&self) -> Series {
        Series {
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .map(|(n, a)| if n % 2 == 1 { -a } else { a.clone() })
                .collect(),
        }
    }

    /// Keep only the coefficients whose index has the given parity.
    pub fn parity_part(&self, parity: Parity) -> Series {
        let keep = match parity {
            Parity::Even => 0,
            Parity::Odd => 1,
        };
        Series {
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .map(|(n, a)| if n % 2 == keep { a.clone() } else { BigInt::zero() })
                .collect(),
        }
    }

    /// Multiply in place by `(1 + sign·q^m)^e` using its binomial expansion.
    fn mul_binomial_factor(&mut self, m: usize, sign: FactorSign, e: u32) {
        let n = self.order();
        let terms: Vec<(usize, BigInt)> = (0..=e)
            .map_while(|k| {
                let shift = m.checked_mul(k as usize)?;
                (shift <= n).then(|| {
                    let c = binomial(BigInt::from(e), BigInt::from(k));
                    let c = if sign == FactorSign::Minus && k % 2 == 1 { -c } else { c };
                    (shift, c)
                })
            })
            .collect();
        let src = std::mem::replace(&mut self.coeffs, vec![BigInt::zero(); n + 1]);
        for (shift, c) in &terms {
            for i in *shift..=n {
                let a = &src[i - shift];
                if !a.is_zero() {
                    self.coeffs[i] += a * c;
                }
            }
        }
    }

    fn max_bits(&self) -> u64 {
        self.coeffs.iter().map(|c| c.bits()).max().unwrap_or(0)
    }
}

impl fmt::Display for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (n, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            let (neg, mag) = (a.is_negative(), a.abs());
            if first {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            first = false;
            match n {
                0 => write!(f, "{mag}")?,
                _ => {
                    if !mag.is_one() {
                        write!(f, "{mag}*")?;
                    }
                    if n == 1 {
                        f.write_str("q")?;
                    } else {
                        write!(f, "q^{n}")?;
                    }
                }
            }
        }
        if first {
            f.write_str("0")?;
        }
        write!(f, " + O(q^{})", self.order() + 1)
    }
}

fn truncated_pair<'a>(a: &'a Series, b: &'a Series) -> (usize, &'a [BigInt], &'a [BigInt]) {
    let n = a.order().min(b.order());
    (n, &a.coeffs[..=n], &b.coeffs[..=n])
}

impl Add for &Series {
    type Output = Series;
    fn add(self, rhs: &Series) -> Series {
        let (_, a, b) = truncated_pair(self, rhs);
        Series { coeffs: a.iter().zip(b).map(|(x, y)| x + y).collect() }
    }
}

impl Sub for &Series {
    type Output = Series;
    fn sub(self, rhs: &Series) -> Series {
        let (_, a, b) = truncated_pair(self, rhs);
        Series { coeffs: a.iter().zip(b).map(|(x, y)| x - y).collect() }
    }
}

impl Neg for &Series {
    type Output = Series;
    fn neg(self) -> Series {
        Series { coeffs: self.coeffs.iter().map(|x| -x).collect() }
    }
}

/// Schoolbook Cauchy product. Uses `i128` accumulators when the operand
/// sizes prove the sums cannot overflow.
impl Mul for &Series {
    type Output = Series;
    fn mul(self, rhs: &Series) -> Series {
        let (n, a, b) = truncated_pair(self, rhs);
        let len_bits = 64 - (n as u64 + 1).leading_zeros() as u64;
        if self.max_bits() + rhs.max_bits() + len_bits < 126 {
            let a: Vec<i128> = a.iter().map(|x| x.to_i128().expect("bit bound")).collect();
            let b: Vec<i128> = b.iter().map(|x| x.to_i128().expect("bit bound")).collect();
            let mut out = vec![0i128; n + 1];
            for (i, &x) in a.iter().enumerate() {
                if x == 0 {
                    continue;
                }
                for (j, &y) in b[..=n - i].iter().enumerate() {
                    out[i + j] += x * y;
                }
            }
            return Series { coeffs: out.into_iter().map(BigInt::from).collect() };
        }
        let mut out = vec![BigInt::zero(); n + 1];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b[..=n - i].iter().enumerate() {
                if !y.is_zero() {
                    out[i + j] += x * y;
                }
            }
        }
        Series { coeffs: out }
    }
}

macro_rules! forward_owned_binop {
    ($tr:ident, $method:ident) => {
        impl $tr for Series {
            type Output = Series;
            fn $method(self, rhs: Series) -> Series {
                (&self).$method(&rhs)
            }
        }
        impl $tr<&Series> for Series {
            type Output = Series;
            fn $method(self, rhs: &Series) -> Series {
                (&self).$method(rhs)
            }
        }
    };
}
forward_owned_binop!(Add, add);
forward_owned_binop!(Sub, sub);
forward_owned_binop!(Mul, mul);

impl Neg for Series {
    type Output = Series;
    fn neg(self) -> Series {
        -&self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FactorSign {
    Plus,
    Minus,
}

/// One family `Π_{n≥1} (1 ± q^{stride·n + offset})^exponent`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ProductFactor {
    pub stride: usize,
    pub offset: i64,
    pub sign: FactorSign,
    pub exponent: i32,
}

impl ProductFactor {
    pub fn new(stride: usize, offset: i64, sign: FactorSign, exponent: i32) -> Self {
        ProductFactor { stride, offset, sign, exponent }
    }

    fn validate(&self) -> Result<()> {
        if self.stride == 0 {
            return Err(Error::Domain("product stride must be at least 1".into()));
        }
        if self.stride as i64 + self.offset < 1 {
            return Err(Error::Domain(format!(
                "product factor with stride {} and offset {} has a non-positive q-exponent",
                self.stride, self.offset
            )));
        }
        if self.exponent == 0 {
            return Err(Error::Domain("product exponent must be nonzero".into()));
        }
        Ok(())
    }

    /// q-exponents `stride·n + offset` for `n ≥ 1`, up to `order`.
    fn exponents(&self, order: usize) -> impl Iterator<Item = usize> + '_ {
        (1i64..)
            .map(move |n| self.stride as i64 * n + self.offset)
            .take_while(move |&m| m <= order as i64)
            .map(|m| m as usize)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct ProductSpec {
    pub factors: Vec<ProductFactor>,
}

impl ProductSpec {
    pub fn new(factors: Vec<ProductFactor>) -> Self {
        ProductSpec { factors }
    }

    /// `(q^a; q^a)_∞ = Π (1 - q^{an})`.
    pub fn euler(stride: usize, exponent: i32) -> Self {
        ProductSpec::new(vec![ProductFactor::new(stride, 0, FactorSign::Minus, exponent)])
    }

    pub fn with(mut self, factor: ProductFactor) -> Self {
        self.factors.push(factor);
        self
    }
}

/// Expand an infinite product to `order`. Factors with negative exponents
/// are collected into a denominator that is inverted once at the end.
pub fn product_expand(spec: &ProductSpec, order: usize) -> Result<Series> {
    let mut numerator = Series::one(order);
    let mut denominator = Series::one(order);
    for factor in &spec.factors {
        factor.validate()?;
        let target = if factor.exponent > 0 { &mut numerator } else { &mut denominator };
        let e = factor.exponent.unsigned_abs();
        for m in factor.exponents(order) {
            target.mul_binomial_factor(m, factor.sign, e);
        }
    }
    if denominator.coeffs[1..].iter().all(Zero::is_zero) {
        return Ok(numerator);
    }
    Ok(&numerator * &denominator.reciprocal()?)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LambertFamily {
    /// weight `d^s`
    DPower,
    /// weight `(-1)^(d-1) d^s`
    AltDPower,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LambertStride {
    /// denominator `1 - q^d`
    Single,
    /// denominator `1 - q^{2d}`
    Double,
}

/// `Σ_{d≥1} w(d) q^d / (1 - q^{kd})` with `k` fixed by the stride.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct LambertWeight {
    pub family: LambertFamily,
    pub s: u32,
    pub stride: LambertStride,
}

impl LambertWeight {
    pub fn new(family: LambertFamily, s: u32, stride: LambertStride) -> Self {
        LambertWeight { family, s, stride }
    }
}

pub fn lambert_expand(w: LambertWeight, order: usize) -> Series {
    let mut out = Series::zero(order);
    let step = match w.stride {
        LambertStride::Single => 1,
        LambertStride::Double => 2,
    };
    for d in 1..=order {
        let mut weight = BigInt::from(d).pow(w.s);
        if w.family == LambertFamily::AltDPower && d % 2 == 0 {
            weight = -weight;
        }
        // q^d / (1 - q^{kd}) = Σ_{j≥0} q^{d(1 + kj)}
        let mut m = d;
        while m <= order {
            out.coeffs[m] += &weight;
            m += step * d;
        }
    }
    out
}
