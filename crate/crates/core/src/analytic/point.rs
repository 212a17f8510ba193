use std::f64::consts::PI;

use serde::Serialize;

use crate::error::Result;

use super::hyp::{check_domain, hyp2f1_half_series};

/// The elliptic parametrization at one `x`: `z = ₂F₁(x)`, its derivative,
/// the nome exponent `y` and the nome `q = e^{-y}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EllipticPoint {
    pub x: f64,
    pub z: f64,
    pub z_prime: f64,
    pub y: f64,
    pub q: f64,
    pub precision: f64,
}

/// `y(x) = π ₂F₁(1-x) / ₂F₁(x)` from the raw series (no domain check).
fn nome_exponent(x: f64, eps: f64) -> Result<f64> {
    Ok(PI * hyp2f1_half_series(1.0 - x, eps, 0)? / hyp2f1_half_series(x, eps, 0)?)
}

pub fn make_point(x: f64, eps: f64) -> Result<EllipticPoint> {
    check_domain(x)?;
    if x == 0.0 {
        return Err(crate::error::Error::Domain("the nome needs 0 < x < 1".into()));
    }
    let z = hyp2f1_half_series(x, eps, 0)?;
    let z_prime = hyp2f1_half_series(x, eps, 1)?;
    let y = PI * hyp2f1_half_series(1.0 - x, eps, 0)? / z;
    Ok(EllipticPoint { x, z, z_prime, y, q: (-y).exp(), precision: eps })
}

/// The point reached by `q -> q²`.
pub fn duplicate_point(p: &EllipticPoint) -> EllipticPoint {
    let s = (1.0 - p.x).sqrt();
    let x = ((1.0 - s) / (1.0 + s)).powi(2);
    let z = p.z * (1.0 + s) / 2.0;
    let z_prime = hyp2f1_half_series(x, p.precision, 1).expect("duplicated x lies well inside (0, 1)");
    EllipticPoint { x, z, z_prime, y: 2.0 * p.y, q: p.q * p.q, precision: p.precision }
}

/// Image under `q -> -q`: `(x/(x-1), -q, z√(1-x))`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SignChanged {
    pub x: f64,
    pub q: f64,
    pub z: f64,
}

pub fn sign_change_point(p: &EllipticPoint) -> SignChanged {
    SignChanged { x: p.x / (p.x - 1.0), q: -p.q, z: p.z * (1.0 - p.x).sqrt() }
}

/// Relative gap between a central difference of `y(x)` with step `h` and
/// `-1/(x(1-x)z²)`.
pub fn dy_dx_residual(x: f64, eps: f64, h: f64) -> Result<f64> {
    let p = make_point(x, eps)?;
    let fd = (nome_exponent(x + h, eps)? - nome_exponent(x - h, eps)?) / (2.0 * h);
    let exact = -1.0 / (x * (1.0 - x) * p.z * p.z);
    Ok(((fd - exact) / exact).abs())
}

#[cfg(test)]
mod tests {
    use super::*;

    const EPS: f64 = 1e-15;

    #[test]
    fn half() {
        let p = make_point(0.5, EPS).unwrap();
        assert!((p.y - PI).abs() < 1e-14);
        assert!((p.q - 0.043_213_918_263_772_25).abs() < 1e-15);
        assert!(make_point(0.1, EPS).unwrap().y > PI);
        assert!(make_point(0.0, EPS).is_err());
        assert!(make_point(0.99, EPS).is_err());
    }

    #[test]
    fn invariants() {
        for i in 1..=9 {
            let p = make_point(i as f64 / 10.0, EPS).unwrap();
            assert!(p.q > 0.0 && p.q < 1.0 && p.y > 0.0 && p.z >= 1.0);
        }
    }

    #[test]
    fn duplication() {
        let p = make_point(0.5, EPS).unwrap();
        let d = duplicate_point(&p);
        assert!((d.x - 0.029_437_251_522_859_414).abs() < 1e-15);
        assert_eq!(d.q, p.q * p.q);
        let z = hyp2f1_half_series(d.x, EPS, 0).unwrap();
        assert!((z - d.z).abs() < 1e-14 * z);
        for i in 1..=9 {
            let p = make_point(i as f64 / 10.0, EPS).unwrap();
            let d = duplicate_point(&p);
            assert!((nome_exponent(d.x, EPS).unwrap() - d.y).abs() < 1e-12 * d.y);
        }
    }

    #[test]
    fn sign_change() {
        let p = make_point(0.5, EPS).unwrap();
        let s = sign_change_point(&p);
        assert_eq!((s.x, s.q), (-1.0, -p.q));
        assert!((s.z - p.z / 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn nome_derivative() {
        for i in 1..=9 {
            assert!(dy_dx_residual(i as f64 / 10.0, EPS, 1e-5).unwrap() < 1e-6);
        }
    }
}
