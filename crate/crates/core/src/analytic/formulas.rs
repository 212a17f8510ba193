//! Registered closed-form evaluations in the `(x, z, dz/dx)` parametrization.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::Result;
use crate::identity::{parse_expr, Expected};

use super::point::{duplicate_point, make_point, sign_change_point, EllipticPoint};
use super::sums::{expr_value, Kernel, NumericValue, SignPattern, TermSum};

pub const DEFAULT_TOLERANCE: f64 = 1e-8;
pub const DEFAULT_PRECISION: f64 = 1e-15;
pub const GRID: [f64; 9] = [0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9];

/// The quantities a closed form may use.
#[derive(Debug, Clone, Copy)]
pub struct ClosedArgs {
    pub x: f64,
    pub z: f64,
    pub zp: f64,
}

impl From<&EllipticPoint> for ClosedArgs {
    fn from(p: &EllipticPoint) -> Self {
        ClosedArgs { x: p.x, z: p.z, zp: p.z_prime }
    }
}

#[derive(Debug, Clone, Copy)]
pub enum SeriesSide {
    /// `q^prefactor · expr(q)` for an identity-language expression.
    Expr { source: &'static str, prefactor: f64 },
    Sum(TermSum),
}

#[derive(Debug, Clone, Copy)]
pub struct EvaluationFormula {
    pub id: &'static str,
    pub expected: Expected,
    pub series: SeriesSide,
    pub closed: fn(&ClosedArgs) -> f64,
    /// Human-readable closed form.
    pub closed_text: &'static str,
}

impl EvaluationFormula {
    pub fn series_value(&self, p: &EllipticPoint, eps: f64) -> Result<NumericValue> {
        match self.series {
            SeriesSide::Expr { source, prefactor } => {
                let expr = parse_expr(source)?;
                let v = expr_value(&expr, p.q)?;
                let f = p.q.powf(prefactor);
                Ok(NumericValue { value: v.value * f, magnitude: v.magnitude * f, tail_bound: v.tail_bound * f })
            }
            SeriesSide::Sum(s) => s.value(p.y, eps),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ResidualReport {
    pub id: String,
    pub expected: Expected,
    pub x: f64,
    pub q: f64,
    pub series_value: f64,
    pub closed_value: f64,
    pub residual: f64,
    pub tail_bound: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl ResidualReport {
    pub fn is_regression(&self) -> bool {
        self.expected == Expected::Pass && !self.pass
    }
}

/// Relative residual `|a - b| / max(|a|, |b|, magnitude)`; the magnitude
/// keeps sides that vanish at a grid point from dividing by zero.
pub fn relative_residual(a: f64, b: f64, magnitude: f64) -> (f64, f64) {
    let scale = a.abs().max(b.abs()).max(magnitude).max(f64::MIN_POSITIVE);
    ((a - b).abs() / scale, scale)
}

pub fn check_evaluation(formula: &EvaluationFormula, x: f64, eps: f64, tolerance: f64) -> Result<ResidualReport> {
    let p = make_point(x, eps)?;
    let s = formula.series_value(&p, eps)?;
    let c = (formula.closed)(&ClosedArgs::from(&p));
    let (residual, scale) = relative_residual(s.value, c, s.magnitude);
    Ok(ResidualReport {
        id: formula.id.to_string(),
        expected: formula.expected,
        x,
        q: p.q,
        series_value: s.value,
        closed_value: c,
        residual,
        tail_bound: s.tail_bound,
        tolerance,
        pass: residual <= tolerance + s.tail_bound / scale,
    })
}

/// Every formula at every grid point, in registry-then-grid order.
pub fn check_grid(formulas: &[EvaluationFormula], grid: &[f64], eps: f64, tolerance: f64) -> Result<Vec<ResidualReport>> {
    let jobs: Vec<(&EvaluationFormula, f64)> = formulas.iter().flat_map(|f| grid.iter().map(move |&x| (f, x))).collect();
    jobs.par_iter().map(|(f, x)| check_evaluation(f, *x, eps, tolerance)).collect()
}

/// `ℰ(q²)` summed at the duplicated nome against `z²(1 - x/2)` at the
/// original point.
pub fn duplication_residual(x: f64, eps: f64) -> Result<f64> {
    let p = make_point(x, eps)?;
    let d = duplicate_point(&p);
    let v = expr_value(&parse_expr("GE")?, d.q)?;
    let closed = p.z * p.z * (1.0 - x / 2.0);
    Ok(relative_residual(v.value, closed, v.magnitude).0)
}

/// `𝒬` summed at `-q` against `z⁴` at the original point.
pub fn sign_change_residual(x: f64, eps: f64) -> Result<f64> {
    let p = make_point(x, eps)?;
    let s = sign_change_point(&p);
    let v = expr_value(&parse_expr("GQ")?, s.q)?;
    let closed = p.z.powi(4);
    Ok(relative_residual(v.value, closed, v.magnitude).0)
}

const fn expr(id: &'static str, source: &'static str, closed_text: &'static str, closed: fn(&ClosedArgs) -> f64) -> EvaluationFormula {
    EvaluationFormula { id, expected: Expected::Pass, series: SeriesSide::Expr { source, prefactor: 0.0 }, closed, closed_text }
}

const fn sum(id: &'static str, expected: Expected, s: TermSum, closed_text: &'static str, closed: fn(&ClosedArgs) -> f64) -> EvaluationFormula {
    EvaluationFormula { id, expected, series: SeriesSide::Sum(s), closed, closed_text }
}

const fn lambert(constant: f64, scale: f64, power: u32, sign: SignPattern, multiple: u32) -> TermSum {
    TermSum { constant, scale, power, sign, odd_only: false, multiple, kernel: Kernel::ExpMinusOne }
}

const fn sinh(power: u32, multiple: u32) -> TermSum {
    TermSum {
        constant: 0.0,
        scale: 1.0,
        power,
        sign: SignPattern::AlternatingFromPlus,
        odd_only: false,
        multiple,
        kernel: Kernel::Sinh,
    }
}

fn s(a: &ClosedArgs) -> f64 {
    (1.0 - a.x).sqrt()
}

use SignPattern::{AlternatingFromMinus as Minus, AlternatingFromPlus as Plus};

pub fn evaluation_formulas() -> Vec<EvaluationFormula> {
    vec![
        expr("phixz", "phi", "sqrt(z)", |a| a.z.sqrt()),
        expr("phixz-", "alt(phi)", "(1-x)^(1/4) sqrt(z)", |a| (1.0 - a.x).powf(0.25) * a.z.sqrt()),
        EvaluationFormula {
            id: "psixz",
            expected: Expected::Pass,
            series: SeriesSide::Expr { source: "psi", prefactor: 1.0 / 8.0 },
            closed: |a| 2f64.powf(-0.5) * a.x.powf(1.0 / 8.0) * a.z.sqrt(),
            closed_text: "2^(-1/2) x^(1/8) sqrt(z)",
        },
        EvaluationFormula {
            id: "psixz2",
            expected: Expected::Pass,
            series: SeriesSide::Expr { source: "dilate(psi, 2)", prefactor: 0.25 },
            closed: |a| a.x.powf(0.25) * a.z.sqrt() / 2.0,
            closed_text: "x^(1/4) sqrt(z) / 2",
        },
        EvaluationFormula {
            id: "fxz-",
            expected: Expected::Pass,
            series: SeriesSide::Expr { source: "f", prefactor: 1.0 / 24.0 },
            closed: |a| 2f64.powf(-1.0 / 6.0) * (1.0 - a.x).powf(1.0 / 6.0) * a.x.powf(1.0 / 24.0) * a.z.sqrt(),
            closed_text: "2^(-1/6) (1-x)^(1/6) x^(1/24) sqrt(z)",
        },
        expr("mpxz", "GP", "z^2(1-x) + 4x(1-x) z z'", |a| a.z * a.z * (1.0 - a.x) + 4.0 * a.x * (1.0 - a.x) * a.z * a.zp),
        expr("mexz", "GE", "z^2(1+x)", |a| a.z * a.z * (1.0 + a.x)),
        expr("mqxz", "GQ", "z^4(1-x)^2", |a| a.z.powi(4) * (1.0 - a.x).powi(2)),
        expr("mpxz2", "dilate(GP, 2)", "z^2(1-x) + 2x(1-x) z z'", |a| a.z * a.z * (1.0 - a.x) + 2.0 * a.x * (1.0 - a.x) * a.z * a.zp),
        expr("mexz2", "dilate(GE, 2)", "z^2(1-x/2)", |a| a.z * a.z * (1.0 - a.x / 2.0)),
        expr("mqxz2", "dilate(GQ, 2)", "z^4(1-x)", |a| a.z.powi(4) * (1.0 - a.x)),
        expr("mpxz-", "alt(GP)", "z^2(1-2x) + 4x(1-x) z z'", |a| a.z * a.z * (1.0 - 2.0 * a.x) + 4.0 * a.x * (1.0 - a.x) * a.z * a.zp),
        expr("mexz-", "alt(GE)", "z^2(1-2x)", |a| a.z * a.z * (1.0 - 2.0 * a.x)),
        expr("mqxz-", "alt(GQ)", "z^4", |a| a.z.powi(4)),
        expr("sp0xz", "1/16*(GP + alt(GP) - 2)", "(-2 + (2-3x) z^2 + 8x(1-x) z z') / 16", |a| {
            (-2.0 + (2.0 - 3.0 * a.x) * a.z * a.z + 8.0 * a.x * (1.0 - a.x) * a.z * a.zp) / 16.0
        }),
        expr("sp1xz", "1/16*(GP - alt(GP))", "x z^2 / 16", |a| a.x * a.z * a.z / 16.0),
        expr("se0xz", "1/48*(GE + alt(GE) - 2)", "(-2 + (2-x) z^2) / 48", |a| (-2.0 + (2.0 - a.x) * a.z * a.z) / 48.0),
        expr("se1xz", "1/48*(GE - alt(GE))", "x z^2 / 16", |a| a.x * a.z * a.z / 16.0),
        expr("sq0xz", "1/32*(2 - GQ - alt(GQ))", "(2 - (2-2x+x^2) z^4) / 32", |a| {
            (2.0 - (2.0 - 2.0 * a.x + a.x * a.x) * a.z.powi(4)) / 32.0
        }),
        expr("sq1xz", "1/32*(alt(GQ) - GQ)", "x(2-x) z^4 / 32", |a| a.x * (2.0 - a.x) * a.z.powi(4) / 32.0),
        expr("dmpxz", "D(GP)", "2x(1-x)^2 z^3 z' + 4x^2(1-x)^2 z^2 z'^2", |a| {
            let w = a.x * (1.0 - a.x).powi(2);
            2.0 * w * a.z.powi(3) * a.zp + 4.0 * a.x * w * a.z * a.z * a.zp * a.zp
        }),
        expr("dmpxz2", "D(dilate(GP, 2))", "-x(1-x) z^4 / 2 + 2x(1-x)^2 z^3 z' + 2x^2(1-x)^2 z^2 z'^2", |a| {
            let w = a.x * (1.0 - a.x).powi(2);
            -a.x * (1.0 - a.x) * a.z.powi(4) / 2.0 + 2.0 * w * a.z.powi(3) * a.zp + 2.0 * a.x * w * a.z * a.z * a.zp * a.zp
        }),
        expr("dmexz", "D(GE)", "x(1-x) z^4 + 2x(1-x)(1+x) z^3 z'", |a| {
            a.x * (1.0 - a.x) * a.z.powi(4) + 2.0 * a.x * (1.0 - a.x) * (1.0 + a.x) * a.z.powi(3) * a.zp
        }),
        expr("dmexz2", "D(dilate(GE, 2))", "-x(1-x) z^4 / 2 + x(1-x)(2-x) z^3 z'", |a| {
            -a.x * (1.0 - a.x) * a.z.powi(4) / 2.0 + a.x * (1.0 - a.x) * (2.0 - a.x) * a.z.powi(3) * a.zp
        }),
        sum(
            "2e-e",
            Expected::Pass,
            TermSum { constant: 1.0, scale: -24.0, power: 1, sign: SignPattern::Constant, odd_only: true, multiple: 1, kernel: Kernel::ExpPlusOne },
            "(1-2x) z^2",
            |a| (1.0 - 2.0 * a.x) * a.z * a.z,
        ),
        sum("sinh3", Expected::Pass, sinh(3, 1), "x(1-x) z^4 / 8", |a| a.x * (1.0 - a.x) * a.z.powi(4) / 8.0),
        sum("sinh5", Expected::Pass, sinh(5, 1), "x(1-x)(1-2x) z^6 / 8", |a| a.x * (1.0 - a.x) * (1.0 - 2.0 * a.x) * a.z.powi(6) / 8.0),
        sum("sinh7", Expected::Pass, sinh(7, 1), "x(1-x)(2-17x+17x^2) z^8 / 16", |a| {
            a.x * (1.0 - a.x) * (2.0 - 17.0 * a.x + 17.0 * a.x * a.x) * a.z.powi(8) / 16.0
        }),
        sum("2sinh3", Expected::Pass, sinh(3, 2), "s(1-s)^2 z^4 / 32, s = sqrt(1-x)", |a| s(a) * (1.0 - s(a)).powi(2) * a.z.powi(4) / 32.0),
        sum("2sinh5", Expected::Audit, sinh(5, 2), "s(1-s)^2 (x-2+6s) z^6 / 64", |a| {
            s(a) * (1.0 - s(a)).powi(2) * (a.x - 2.0 + 6.0 * s(a)) * a.z.powi(6) / 64.0
        }),
        sum("2sinh5-corrected", Expected::Pass, sinh(5, 2), "s(1-s)^2 (x-2+6s) z^6 / 128", |a| {
            s(a) * (1.0 - s(a)).powi(2) * (a.x - 2.0 + 6.0 * s(a)) * a.z.powi(6) / 128.0
        }),
        sum("2sinh7", Expected::Audit, sinh(7, 2), "(1-x)(1-s)^2 (76s - 30(2-x) + x^2) z^8 / 512", |a| {
            (1.0 - a.x) * (1.0 - s(a)).powi(2) * (76.0 * s(a) - 30.0 * (2.0 - a.x) + a.x * a.x) * a.z.powi(8) / 512.0
        }),
        sum("2sinh7-corrected", Expected::Pass, sinh(7, 2), "s(1-s)^2 (76(1-x) - 30(2-x)s + x^2) z^8 / 512", |a| {
            s(a) * (1.0 - s(a)).powi(2) * (76.0 * (1.0 - a.x) - 30.0 * (2.0 - a.x) * s(a) + a.x * a.x) * a.z.powi(8) / 512.0
        }),
        sum("ss5", Expected::Pass, lambert(1.0, 8.0, 5, Plus, 1), "(1-x)(1-x^2) z^6", |a| (1.0 - a.x) * (1.0 - a.x * a.x) * a.z.powi(6)),
        sum("ss7", Expected::Pass, lambert(17.0, -32.0, 7, Plus, 1), "(1-x)^2 (17-2x+17x^2) z^8", |a| {
            (1.0 - a.x).powi(2) * (17.0 - 2.0 * a.x + 17.0 * a.x * a.x) * a.z.powi(8)
        }),
        sum("2ss5", Expected::Audit, lambert(1.0, 8.0, 5, Minus, 2), "(1-x)(1-x/2) z^6", |a| (1.0 - a.x) * (1.0 - a.x / 2.0) * a.z.powi(6)),
        sum("2ss5-corrected", Expected::Pass, lambert(1.0, 8.0, 5, Plus, 2), "(1-x)(1-x/2) z^6", |a| {
            (1.0 - a.x) * (1.0 - a.x / 2.0) * a.z.powi(6)
        }),
        sum("2ss7", Expected::Audit, lambert(17.0, -32.0, 7, Minus, 2), "(1-x)(17-17x+2x^2) z^8", |a| {
            (1.0 - a.x) * (17.0 - 17.0 * a.x + 2.0 * a.x * a.x) * a.z.powi(8)
        }),
        sum("2ss7-corrected", Expected::Pass, lambert(17.0, -32.0, 7, Plus, 2), "(1-x)(17-17x+2x^2) z^8", |a| {
            (1.0 - a.x) * (17.0 - 17.0 * a.x + 2.0 * a.x * a.x) * a.z.powi(8)
        }),
    ]
}

pub fn formula(id: &str) -> Option<EvaluationFormula> {
    evaluation_formulas().into_iter().find(|f| f.id == id)
}
