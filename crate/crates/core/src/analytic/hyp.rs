//! `₂F₁(1/2, 1/2; 1; x)` and its first two derivatives.

use crate::error::{Error, Result};

pub const DOMAIN_MIN: f64 = 0.05;
pub const DOMAIN_MAX: f64 = 0.95;
pub const MAX_TERMS: usize = 100_000;

/// Compensated (Neumaier) running sum.
#[derive(Debug, Clone, Copy, Default)]
pub struct Neumaier {
    sum: f64,
    comp: f64,
}

impl Neumaier {
    pub fn add(&mut self, v: f64) {
        let t = self.sum + v;
        if self.sum.abs() >= v.abs() {
            self.comp += (self.sum - t) + v;
        } else {
            self.comp += (v - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

pub fn check_domain(x: f64) -> Result<()> {
    if x == 0.0 || (DOMAIN_MIN..=DOMAIN_MAX).contains(&x) {
        Ok(())
    } else {
        Err(Error::Domain(format!("x = {x} outside [{DOMAIN_MIN}, {DOMAIN_MAX}]")))
    }
}

/// `d^deriv/dx^deriv ₂F₁(1/2,1/2;1;x)` by its power series, for `|x| < 1`.
///
/// Consecutive term ratios are monotone in `k` with limit `x`, so the tail
/// after term `k` is at most `|t_{k+1}| / (1 - r)` with
/// `r = max(|x|, |t_{k+2}/t_{k+1}|)`. Summation stops once that bound drops
/// below `eps` times the partial sum.
pub fn hyp2f1_half_series(x: f64, eps: f64, deriv: u32) -> Result<f64> {
    if !(x.abs() < 1.0) {
        return Err(Error::Domain(format!("series needs |x| < 1, got {x}")));
    }
    let d = deriv as f64;
    // Ratio t_{k+1}/t_k for the differentiated series.
    let ratio = |k: f64| x * ((k + 0.5) / (k + 1.0)).powi(2) * (k + 1.0) / (k + 1.0 - d);
    let mut c = 1.0;
    for k in 1..=deriv {
        let k = k as f64;
        c *= ((k - 0.5) / k).powi(2) * k;
    }
    let mut term = c;
    let mut k = d;
    let mut acc = Neumaier::default();
    for _ in 0..MAX_TERMS {
        acc.add(term);
        let next = term * ratio(k);
        let r = x.abs().max(ratio(k + 1.0).abs());
        if next == 0.0 || (r < 1.0 && next.abs() / (1.0 - r) <= eps * acc.value().abs()) {
            return Ok(acc.value());
        }
        term = next;
        k += 1.0;
    }
    Err(Error::NonConvergence { terms: MAX_TERMS })
}

/// `z = ₂F₁(1/2,1/2;1;x)` on the working domain (or `x = 0`).
pub fn hyp2f1_half(x: f64, eps: f64) -> Result<f64> {
    check_domain(x)?;
    hyp2f1_half_series(x, eps, 0)
}

pub fn z_prime(x: f64, eps: f64) -> Result<f64> {
    check_domain(x)?;
    hyp2f1_half_series(x, eps, 1)
}

pub fn z_second(x: f64, eps: f64) -> Result<f64> {
    check_domain(x)?;
    hyp2f1_half_series(x, eps, 2)
}

/// Relative residual of `4x(1-x)z'' - z + 4(1-2x)z' = 0`.
pub fn ode_residual(x: f64, eps: f64) -> Result<f64> {
    let (z, z1, z2) = (hyp2f1_half(x, eps)?, z_prime(x, eps)?, z_second(x, eps)?);
    let terms = [4.0 * x * (1.0 - x) * z2, -z, 4.0 * (1.0 - 2.0 * x) * z1];
    let scale: f64 = terms.iter().map(|t| t.abs()).sum();
    Ok(terms.iter().sum::<f64>().abs() / scale)
}

#[cfg(test)]
mod tests {
    use super::*;

    const EPS: f64 = 1e-15;

    #[test]
    fn values() {
        assert_eq!(hyp2f1_half(0.0, EPS).unwrap(), 1.0);
        let z = hyp2f1_half(0.5, EPS).unwrap();
        assert!((z - 1.180_340_599_016_096_2).abs() < 1e-13, "{z}");
        let tight = hyp2f1_half_series(0.5, 1e-18, 0).unwrap();
        assert!((z - tight).abs() <= 1e-14 * z);
        let z25 = hyp2f1_half(0.25, EPS).unwrap();
        assert!(z25 > 1.0625);
        assert_eq!(z_prime(0.0, EPS).unwrap(), 0.25);
    }

    #[test]
    fn domain_and_errors() {
        assert!(matches!(hyp2f1_half(0.01, EPS), Err(Error::Domain(_))));
        assert!(matches!(hyp2f1_half(0.97, EPS), Err(Error::Domain(_))));
        assert!(hyp2f1_half_series(1.0, EPS, 0).is_err());
        assert!(matches!(hyp2f1_half_series(0.999_999_9, 1e-300, 0), Err(Error::NonConvergence { .. })));
    }

    #[test]
    fn derivatives_match_differences() {
        for &x in &[0.1, 0.3, 0.5, 0.7, 0.9] {
            let h = 1e-5;
            let fd = (hyp2f1_half(x + h, EPS).unwrap() - hyp2f1_half(x - h, EPS).unwrap()) / (2.0 * h);
            let zp = z_prime(x, EPS).unwrap();
            assert!((fd - zp).abs() <= 1e-6 * zp, "{x}: {fd} vs {zp}");
            let fd2 = (z_prime(x + h, EPS).unwrap() - z_prime(x - h, EPS).unwrap()) / (2.0 * h);
            let z2 = z_second(x, EPS).unwrap();
            assert!((fd2 - z2).abs() <= 1e-6 * z2);
        }
    }

    #[test]
    fn ode() {
        for i in 1..=9 {
            let x = i as f64 / 10.0;
            assert!(ode_residual(x, EPS).unwrap() < 1e-12, "{x}");
        }
    }

    #[test]
    fn negative_argument() {
        // Pfaff: F(x) = (1-x)^{-1/2} F(x/(x-1)); x = 1/3 maps to -1/2.
        let w = hyp2f1_half_series(1.0 / 3.0, EPS, 0).unwrap();
        let pfaff = (2.0f64 / 3.0).powf(-0.5) * hyp2f1_half_series(-0.5, EPS, 0).unwrap();
        assert!((pfaff - w).abs() < 1e-13, "{pfaff} {w}");
    }
}
