//! Numeric values of exact q-series and of Lambert- and sinh-type sums.

use num_traits::{Signed, ToPrimitive};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::identity::{Evaluator, SeriesExpr};
use crate::qseries::{lambert_expand, LambertFamily, LambertStride, LambertWeight, Series};

use super::hyp::{Neumaier, MAX_TERMS};

/// A numeric value with the magnitude of the summed terms and a tail bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NumericValue {
    pub value: f64,
    /// `Σ |term|`, the scale against which cancellation is measured.
    pub magnitude: f64,
    pub tail_bound: f64,
}

/// Target for the neglected tail when choosing a truncation order.
pub const TAIL_TARGET: f64 = 1e-17;
/// Assumed polynomial degree of coefficient growth.
pub const GROWTH_DEGREE: i32 = 9;
pub const MAX_NUMERIC_ORDER: usize = 5_000;

/// Smallest `N` with `|q|^{N+1} (N+1)^d / (1-|q|) ≤ TAIL_TARGET`.
pub fn truncation_order(q: f64) -> Result<usize> {
    let a = q.abs();
    if !(a < 1.0) {
        return Err(Error::Domain(format!("series evaluation needs |q| < 1, got {q}")));
    }
    let mut n = 8usize;
    while a.powi(n as i32 + 1) * ((n + 1) as f64).powi(GROWTH_DEGREE) / (1.0 - a) > TAIL_TARGET {
        n += 1;
        if n > MAX_NUMERIC_ORDER {
            return Err(Error::NonConvergence { terms: MAX_NUMERIC_ORDER });
        }
    }
    Ok(n)
}

/// Horner evaluation of a truncated series at `q`, scaled by `1/denominator`.
///
/// The tail bound is `|q|^{N+1} max|a_n| / (1-|q|)` in the same scale.
pub fn series_value(series: &Series, denominator: f64, q: f64) -> Result<NumericValue> {
    let a = q.abs();
    if !(a < 1.0) {
        return Err(Error::Domain(format!("series evaluation needs |q| < 1, got {q}")));
    }
    let coeffs: Vec<f64> = series.coeffs().iter().map(|c| c.to_f64().unwrap_or(f64::INFINITY)).collect();
    let value = coeffs.iter().rev().fold(0.0, |acc, &c| acc * q + c) / denominator;
    let magnitude = coeffs.iter().rev().fold(0.0, |acc, &c| acc * a + c.abs()) / denominator.abs();
    let max = series.coeffs().iter().map(|c| c.abs()).max().and_then(|m| m.to_f64()).unwrap_or(0.0);
    let tail_bound = a.powi(series.order() as i32 + 1) * max / (1.0 - a) / denominator.abs();
    Ok(NumericValue { value, magnitude, tail_bound })
}

/// Value of an identity-language expression at numeric `q`, truncated at
/// [`truncation_order`].
pub fn expr_value(expr: &SeriesExpr, q: f64) -> Result<NumericValue> {
    let order = truncation_order(q)?;
    let e = Evaluator::new(order).eval(expr);
    series_value(&e.numerator, e.denominator.to_f64().expect("denominator fits in f64"), q)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Kernel {
    /// `1/(e^t - 1)`
    ExpMinusOne,
    /// `1/(e^t + 1)`
    ExpPlusOne,
    /// `1/sinh t`
    Sinh,
}

impl Kernel {
    fn eval(self, t: f64) -> f64 {
        match self {
            Kernel::ExpMinusOne => 1.0 / t.exp_m1(),
            Kernel::ExpPlusOne => {
                let e = (-t).exp();
                e / (1.0 + e)
            }
            Kernel::Sinh => 2.0 * (-t).exp() / -(-2.0 * t).exp_m1(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SignPattern {
    Constant,
    /// `(-1)^{n-1}`
    AlternatingFromPlus,
    /// `(-1)^n`
    AlternatingFromMinus,
}

/// `constant + scale · Σ_{n≥1} sign(n) m^power K(m · multiple · y)` with
/// `m = n`, or `m = 2n - 1` when `odd_only`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TermSum {
    pub constant: f64,
    pub scale: f64,
    pub power: u32,
    pub sign: SignPattern,
    pub odd_only: bool,
    pub multiple: u32,
    pub kernel: Kernel,
}

impl TermSum {
    /// Sum term by term until a geometric bound on the tail falls below
    /// `eps` times the running magnitude.
    pub fn value(&self, y: f64, eps: f64) -> Result<NumericValue> {
        if !(y > 0.0) {
            return Err(Error::Domain(format!("term sums need y > 0, got {y}")));
        }
        let step = if self.odd_only { 2.0 } else { 1.0 };
        let t_of = |m: f64| m * self.multiple as f64 * y;
        let mut acc = Neumaier::default();
        let mut magnitude = 0.0;
        for n in 1..=MAX_TERMS {
            let m = if self.odd_only { 2.0 * n as f64 - 1.0 } else { n as f64 };
            let sign = match self.sign {
                SignPattern::Constant => 1.0,
                SignPattern::AlternatingFromPlus => if n % 2 == 1 { 1.0 } else { -1.0 },
                SignPattern::AlternatingFromMinus => if n % 2 == 1 { -1.0 } else { 1.0 },
            };
            let term = self.scale * sign * m.powi(self.power as i32) * self.kernel.eval(t_of(m));
            acc.add(term);
            magnitude += term.abs();
            // Every later term ratio is at most r.
            let delta = step * self.multiple as f64 * y;
            let r = ((m + step) / m).powi(self.power as i32) * (-delta).exp() * (1.0 + (-t_of(m)).exp());
            if r < 1.0 {
                let tail = term.abs() * r / (1.0 - r);
                if tail <= eps * magnitude {
                    return Ok(NumericValue {
                        value: self.constant + acc.value(),
                        magnitude: self.constant.abs() + magnitude,
                        tail_bound: tail,
                    });
                }
            }
        }
        Err(Error::NonConvergence { terms: MAX_TERMS })
    }

    /// The same sum as an exact q-series (scale and constant excluded), when
    /// the kernel has a Lambert expansion.
    pub fn lambert_series(&self, order: usize) -> Option<Series> {
        if self.odd_only {
            return None;
        }
        let family = match self.sign {
            SignPattern::Constant => LambertFamily::DPower,
            SignPattern::AlternatingFromPlus => LambertFamily::AltDPower,
            SignPattern::AlternatingFromMinus => return self.flipped().lambert_series(order).map(|s| -s),
        };
        let base = match self.kernel {
            Kernel::ExpMinusOne => lambert_expand(LambertWeight::new(family, self.power, LambertStride::Single), order),
            Kernel::Sinh => lambert_expand(LambertWeight::new(family, self.power, LambertStride::Double), order).scale_i64(2),
            Kernel::ExpPlusOne => return None,
        };
        base.dilate(self.multiple as usize).ok()
    }

    fn flipped(&self) -> TermSum {
        TermSum { sign: SignPattern::AlternatingFromPlus, ..*self }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::point::make_point;
    use crate::generators::SeriesName;

    #[test]
    fn constants_and_theta() {
        let one = Series::one(10);
        assert_eq!(series_value(&one, 1.0, 0.3).unwrap().value, 1.0);
        let q = (-std::f64::consts::PI).exp();
        let v = expr_value(&SeriesExpr::Name(SeriesName::Phi), q).unwrap();
        assert!((v.value - 1.086_434_811_213_308).abs() < 1e-14);
        assert!(series_value(&one, 1.0, 1.0).is_err());
        assert!(truncation_order(-0.5).unwrap() > 8);
    }

    #[test]
    fn sinh3_at_half() {
        let p = make_point(0.5, 1e-15).unwrap();
        let s = TermSum {
            constant: 0.0,
            scale: 1.0,
            power: 3,
            sign: SignPattern::AlternatingFromPlus,
            odd_only: false,
            multiple: 1,
            kernel: Kernel::Sinh,
        };
        let v = s.value(p.y, 1e-16).unwrap();
        let closed = p.x * (1.0 - p.x) * p.z.powi(4) / 8.0;
        assert!((v.value - closed).abs() <= 1e-9 * closed);
    }

    #[test]
    fn sums_agree_with_lambert_series() {
        let p = make_point(0.4, 1e-15).unwrap();
        for kernel in [Kernel::ExpMinusOne, Kernel::Sinh] {
            for sign in [SignPattern::Constant, SignPattern::AlternatingFromPlus, SignPattern::AlternatingFromMinus] {
                for (power, multiple) in [(1, 1), (3, 2), (5, 1), (7, 2)] {
                    let s = TermSum { constant: 0.0, scale: 1.0, power, sign, odd_only: false, multiple, kernel };
                    let direct = s.value(p.y, 1e-16).unwrap();
                    let order = truncation_order(p.q).unwrap();
                    let exact = series_value(&s.lambert_series(order).unwrap(), 1.0, p.q).unwrap();
                    assert!((direct.value - exact.value).abs() <= 1e-12 * direct.magnitude, "{s:?}");
                }
            }
        }
    }

    #[test]
    fn divergence_guard() {
        let s = TermSum {
            constant: 0.0,
            scale: 1.0,
            power: 1,
            sign: SignPattern::Constant,
            odd_only: false,
            multiple: 1,
            kernel: Kernel::ExpMinusOne,
        };
        assert!(s.value(0.0, 1e-12).is_err());
        assert!(s.value(-1.0, 1e-12).is_err());
    }
}
