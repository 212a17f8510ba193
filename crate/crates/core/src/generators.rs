//! Named series, each with a defining construction and an independent
//! cross-check construction.
//!
//! | tag | definition | cross-check |
//! |-----|------------|-------------|
//! | `P`, `Q`, `R` | `1 - 24Σσ`, `1 + 240Σσ₃`, `1 - 504Σσ₅` from sieves | Lambert series |
//! | `GP`, `GE`, `GQ` | `1 + 8Σw̃`, `1 + 24Σŵ`, `1 - 16Σw̃₃` from sieves | Lambert series |
//! | `W5` | `1 + 8Σw̃₅` | Lambert series |
//! | `phi`, `psi`, `f` | sparse sums over squares, triangular and pentagonal numbers | triple-product forms |
//! | parity tags | even/odd part of the parent with the constant removed | parity part of the Lambert parent |
//!
//! `f` denotes `f(-q) = (q;q)_∞`. Parity series carry a zero constant term:
//! the divisor sums are not defined at 0.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::arith::{sieve, DivisorKind};
use crate::error::{Error, Result};
use crate::partitions;
use crate::qseries::{
    lambert_expand, product_expand, FactorSign, LambertFamily, LambertStride, LambertWeight,
    Parity, ProductFactor, ProductSpec, Series,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SeriesName {
    P,
    Q,
    R,
    GP,
    GE,
    GQ,
    Phi,
    Psi,
    FNeg,
    GP02,
    GP12,
    GE02,
    GE12,
    GQ02,
    GQ12,
    Wt5Series,
    /// The monomial `q` itself.
    Nome,
    Mu,
    Nu,
}

impl SeriesName {
    pub const ALL: [SeriesName; 19] = [
        SeriesName::P,
        SeriesName::Q,
        SeriesName::R,
        SeriesName::GP,
        SeriesName::GE,
        SeriesName::GQ,
        SeriesName::Phi,
        SeriesName::Psi,
        SeriesName::FNeg,
        SeriesName::GP02,
        SeriesName::GP12,
        SeriesName::GE02,
        SeriesName::GE12,
        SeriesName::GQ02,
        SeriesName::GQ12,
        SeriesName::Wt5Series,
        SeriesName::Nome,
        SeriesName::Mu,
        SeriesName::Nu,
    ];

    /// Spelling used by the identity DSL and the CLI.
    pub fn as_str(self) -> &'static str {
        match self {
            SeriesName::P => "P",
            SeriesName::Q => "Q",
            SeriesName::R => "R",
            SeriesName::GP => "GP",
            SeriesName::GE => "GE",
            SeriesName::GQ => "GQ",
            SeriesName::Phi => "phi",
            SeriesName::Psi => "psi",
            SeriesName::FNeg => "f",
            SeriesName::GP02 => "GP02",
            SeriesName::GP12 => "GP12",
            SeriesName::GE02 => "GE02",
            SeriesName::GE12 => "GE12",
            SeriesName::GQ02 => "GQ02",
            SeriesName::GQ12 => "GQ12",
            SeriesName::Wt5Series => "W5",
            SeriesName::Nome => "q",
            SeriesName::Mu => "mu",
            SeriesName::Nu => "nu",
        }
    }
}

impl fmt::Display for SeriesName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SeriesName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        SeriesName::ALL
            .iter()
            .copied()
            .find(|n| n.as_str() == s)
            .ok_or_else(|| Error::Domain(format!("unknown series name `{s}`")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct BuildOptions {
    /// Also run the cross-check construction and fail on disagreement.
    pub paranoid: bool,
}

impl BuildOptions {
    pub const PARANOID: BuildOptions = BuildOptions { paranoid: true };
}

/// The named series to `order`, defining path only.
pub fn build(name: SeriesName, order: usize) -> Series {
    defining(name, order)
}

/// The named series, optionally verified against its second construction.
pub fn build_with(name: SeriesName, order: usize, options: BuildOptions) -> Result<Series> {
    let series = defining(name, order);
    if options.paranoid {
        if let Some(check) = cross_check(name, order)? {
            if let Some(index) = series.first_mismatch(&check) {
                return Err(Error::CrossCheck { name: name.to_string(), index });
            }
        }
    }
    Ok(series)
}

/// `c0 + scale·Σ_{n≥1} t(n) q^n` from a sieved table.
fn divisor_series(kind: DivisorKind, c0: i64, scale: i64, order: usize) -> Series {
    let table = sieve(kind, order.max(1)).expect("series orders stay below sieve capacity");
    let scale = BigInt::from(scale);
    Series::from_fn(order, |n| if n == 0 { BigInt::from(c0) } else { &table.as_slice()[n] * &scale })
}

/// Series from `(exponent, coefficient)` pairs with nondecreasing exponents.
fn sparse_series(order: usize, terms: impl Iterator<Item = (usize, i64)>) -> Series {
    let mut coeffs = vec![BigInt::zero(); order + 1];
    for (e, c) in terms.take_while(|&(e, _)| e <= order) {
        coeffs[e] += c;
    }
    Series::from_coeffs(coeffs)
}

fn theta_phi(order: usize) -> Series {
    sparse_series(order, (0usize..).map(|k| (k * k, if k == 0 { 1 } else { 2 })))
}

fn theta_psi(order: usize) -> Series {
    sparse_series(order, (0usize..).map(|k| (k * (k + 1) / 2, 1)))
}

/// Pentagonal-number sum `Σ_{n∈ℤ} (-1)^n q^{n(3n+1)/2}`.
fn theta_f(order: usize) -> Series {
    let mut coeffs = vec![BigInt::zero(); order + 1];
    let mut n: i64 = 0;
    loop {
        let mut any = false;
        for m in if n == 0 { vec![0] } else { vec![n, -n] } {
            let e = m * (3 * m + 1) / 2;
            if e as usize <= order {
                coeffs[e as usize] += if m.rem_euclid(2) == 0 { 1 } else { -1 };
                any = true;
            }
        }
        if !any {
            break;
        }
        n += 1;
    }
    Series::from_coeffs(coeffs)
}

/// Strip the constant and take one parity class, then divide by the
/// parent's scale (exact by construction).
fn parity_child(parent: &Series, parity: Parity, scale: i64) -> Series {
    let mut coeffs = parent.parity_part(parity).into_coeffs();
    coeffs[0] = BigInt::zero();
    Series::from_coeffs(coeffs).div_exact(&BigInt::from(scale)).expect("parent coefficients carry the scale")
}

fn defining(name: SeriesName, order: usize) -> Series {
    use SeriesName::*;
    match name {
        P => divisor_series(DivisorKind::sigma(1), 1, -24, order),
        Q => divisor_series(DivisorKind::sigma(3), 1, 240, order),
        R => divisor_series(DivisorKind::sigma(5), 1, -504, order),
        GP => divisor_series(DivisorKind::wt(1), 1, 8, order),
        GE => divisor_series(DivisorKind::wh(1), 1, 24, order),
        GQ => divisor_series(DivisorKind::wt(3), 1, -16, order),
        Wt5Series => divisor_series(DivisorKind::wt(5), 1, 8, order),
        Phi => theta_phi(order),
        Psi => theta_psi(order),
        FNeg => theta_f(order),
        GP02 => parity_child(&defining(GP, order), Parity::Even, 8),
        GP12 => parity_child(&defining(GP, order), Parity::Odd, 8),
        GE02 => parity_child(&defining(GE, order), Parity::Even, 24),
        GE12 => parity_child(&defining(GE, order), Parity::Odd, 24),
        GQ02 => parity_child(&defining(GQ, order), Parity::Even, -16),
        GQ12 => parity_child(&defining(GQ, order), Parity::Odd, -16),
        Nome => Series::monomial(1, 1, order),
        Mu => partitions::mu_series(order),
        Nu => partitions::nu_series(order),
    }
}

fn lambert_parent(c0: i64, scale: i64, body: Series) -> Series {
    let scale = BigInt::from(scale);
    let mut coeffs: Vec<BigInt> = body.into_coeffs().into_iter().map(|c| c * &scale).collect();
    coeffs[0] = BigInt::from(c0);
    Series::from_coeffs(coeffs)
}

fn lambert(family: LambertFamily, s: u32, order: usize) -> Series {
    lambert_expand(LambertWeight::new(family, s, LambertStride::Single), order)
}

/// `Σ ŵ(n) q^n = Σ d q^d/(1 - q^d) - 2 Σ d q^{2d}/(1 - q^{2d})`.
fn lambert_wh(order: usize) -> Series {
    let sigma = lambert(LambertFamily::DPower, 1, order);
    &sigma - &sigma.dilate(2).expect("k = 2").scale_i64(2)
}

fn product_phi() -> ProductSpec {
    // (-q;q²)(q²;q²) / ((q;q²)(-q²;q²))
    ProductSpec::new(vec![
        ProductFactor::new(2, -1, FactorSign::Plus, 1),
        ProductFactor::new(2, 0, FactorSign::Minus, 1),
        ProductFactor::new(2, -1, FactorSign::Minus, -1),
        ProductFactor::new(2, 0, FactorSign::Plus, -1),
    ])
}

fn product_psi() -> ProductSpec {
    // (q²;q²) / (q;q²)
    ProductSpec::new(vec![
        ProductFactor::new(2, 0, FactorSign::Minus, 1),
        ProductFactor::new(2, -1, FactorSign::Minus, -1),
    ])
}

fn cross_check(name: SeriesName, order: usize) -> Result<Option<Series>> {
    use LambertFamily::*;
    use SeriesName::*;
    let alt = |s| lambert(AltDPower, s, order);
    Ok(Some(match name {
        P => lambert_parent(1, -24, lambert(DPower, 1, order)),
        Q => lambert_parent(1, 240, lambert(DPower, 3, order)),
        R => lambert_parent(1, -504, lambert(DPower, 5, order)),
        GP => lambert_parent(1, 8, alt(1)),
        GE => lambert_parent(1, 24, lambert_wh(order)),
        GQ => lambert_parent(1, -16, alt(3)),
        Wt5Series => lambert_parent(1, 8, alt(5)),
        Phi => product_expand(&product_phi(), order)?,
        Psi => product_expand(&product_psi(), order)?,
        FNeg => product_expand(&ProductSpec::euler(1, 1), order)?,
        GP02 => alt(1).parity_part(Parity::Even),
        GP12 => alt(1).parity_part(Parity::Odd),
        GE02 => lambert_wh(order).parity_part(Parity::Even),
        GE12 => lambert_wh(order).parity_part(Parity::Odd),
        GQ02 => alt(3).parity_part(Parity::Even),
        GQ12 => alt(3).parity_part(Parity::Odd),
        // ν = ψ⁸, and μ = f(-q)⁸ f(-q²)⁸ from the pentagonal sum.
        Nu => theta_psi(order).power(8),
        Mu => {
            let f = theta_f(order);
            &f.power(8) * &f.dilate(2)?.power(8)
        }
        Nome => return Ok(None),
    }))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RepKind {
    Squares,
    Triangular,
}

impl FromStr for RepKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "squares" => Ok(RepKind::Squares),
            "triangular" => Ok(RepKind::Triangular),
            other => Err(Error::Domain(format!("unknown representation kind `{other}`"))),
        }
    }
}

/// `φ^s` or `ψ^s`; coefficient `n` counts representations of `n` as a sum
/// of `s` squares or triangular numbers.
pub fn rep_series(kind: RepKind, s: u32, order: usize) -> Result<Series> {
    if s == 0 {
        return Err(Error::Domain("number of summands s must be at least 1".into()));
    }
    let base = match kind {
        RepKind::Squares => build(SeriesName::Phi, order),
        RepKind::Triangular => build(SeriesName::Psi, order),
    };
    Ok(base.power(s))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn coeffs(s: &Series) -> Vec<i64> {
        s.coeffs().iter().map(|c| c.try_into().unwrap()).collect()
    }

    #[test]
    fn build_examples() {
        assert_eq!(coeffs(&build(SeriesName::GE, 4)), [1, 24, 24, 96, 24]);
        assert_eq!(coeffs(&build(SeriesName::GQ, 4)), [1, -16, 112, -448, 1136]);
        assert_eq!(coeffs(&build(SeriesName::Phi, 4)), [1, 2, 0, 0, 2]);
        assert_eq!(coeffs(&build(SeriesName::P, 3)), [1, -24, -72, -96]);
        assert_eq!(coeffs(&build(SeriesName::GP12, 3)), [0, 1, 0, 4]);
        assert_eq!(coeffs(&build(SeriesName::GP02, 4)), [0, 0, -1, 0, -5]);
        assert_eq!(coeffs(&build(SeriesName::Nome, 2)), [0, 1, 0]);
    }

    #[test]
    fn order_zero_builds() {
        for name in SeriesName::ALL {
            assert_eq!(build(name, 0).order(), 0);
        }
    }

    #[test]
    fn every_name_agrees_with_its_cross_check() {
        for name in SeriesName::ALL {
            build_with(name, 300, BuildOptions::PARANOID)
                .unwrap_or_else(|e| panic!("{name}: {e}"));
        }
    }

    #[test]
    fn names_round_trip_through_text() {
        for name in SeriesName::ALL {
            assert_eq!(name.as_str().parse::<SeriesName>().unwrap(), name);
        }
        assert!("Z".parse::<SeriesName>().is_err());
    }

    #[test]
    fn theta_difference_matches_psi_fourth_power() {
        let n = 200;
        let gp = build(SeriesName::GP, n);
        let lhs = &gp - &gp.alternate();
        let psi4 = build(SeriesName::Psi, n).power(4).dilate(2).unwrap();
        let rhs = (&Series::monomial(1, 16, n) * &psi4).truncate(n);
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn even_parity_series_divides_exactly() {
        let n = 200;
        let gp = build(SeriesName::GP, n);
        let sum = &(&gp + &gp.alternate()) - &Series::constant(2, n);
        assert_eq!(sum.div_exact(&BigInt::from(16)).unwrap(), build(SeriesName::GP02, n));
    }

    #[test]
    fn rep_series_examples() {
        assert_eq!(coeffs(&rep_series(RepKind::Squares, 4, 2).unwrap()), [1, 8, 24]);
        assert_eq!(coeffs(&rep_series(RepKind::Triangular, 4, 3).unwrap()), [1, 4, 6, 8]);
        assert_eq!(coeffs(&rep_series(RepKind::Squares, 1, 1).unwrap()), [1, 2]);
        assert!(rep_series(RepKind::Squares, 0, 3).is_err());
    }
}
