use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::One;

use crate::generators::{build, SeriesName};
use crate::qseries::{Parity, Series};

use super::ast::{SeriesExpr, UnaryOp};

/// `numerator / denominator` with a positive integer denominator.
#[derive(Debug, Clone, PartialEq)]
pub struct Evaluated {
    pub numerator: Series,
    pub denominator: BigInt,
}

impl Evaluated {
    pub fn coeff(&self, n: usize) -> BigRational {
        BigRational::new(self.numerator.coeff(n), self.denominator.clone())
    }

    pub fn order(&self) -> usize {
        self.numerator.order()
    }

    pub fn is_zero(&self) -> bool {
        self.numerator.is_zero()
    }
}

/// Evaluates expressions at a fixed order, building each named series once.
pub struct Evaluator {
    order: usize,
    cache: HashMap<SeriesName, Series>,
}

impl Evaluator {
    pub fn new(order: usize) -> Self {
        Evaluator { order, cache: HashMap::new() }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    fn named(&mut self, name: SeriesName) -> Series {
        let order = self.order;
        self.cache.entry(name).or_insert_with(|| build(name, order)).clone()
    }

    /// Sums take the lcm of the operand denominators; products and powers
    /// multiply them. Literals enter in lowest terms.
    pub fn eval(&mut self, expr: &SeriesExpr) -> Evaluated {
        let order = self.order;
        match expr {
            SeriesExpr::Literal(l) => {
                let g = l.numerator.gcd(&l.denominator);
                Evaluated {
                    numerator: Series::constant(&l.numerator / &g, order),
                    denominator: &l.denominator / &g,
                }
            }
            SeriesExpr::Name(n) => Evaluated { numerator: self.named(*n), denominator: BigInt::one() },
            SeriesExpr::Add(a, b) | SeriesExpr::Sub(a, b) => {
                let (a, b) = (self.eval(a), self.eval(b));
                let l = a.denominator.lcm(&b.denominator);
                let x = a.numerator.scale(&(&l / &a.denominator));
                let y = b.numerator.scale(&(&l / &b.denominator));
                let numerator = if matches!(expr, SeriesExpr::Add(..)) { x + y } else { x - y };
                Evaluated { numerator, denominator: l }
            }
            SeriesExpr::Mul(a, b) => {
                let (a, b) = (self.eval(a), self.eval(b));
                Evaluated { numerator: a.numerator * b.numerator, denominator: a.denominator * b.denominator }
            }
            SeriesExpr::Neg(a) => {
                let a = self.eval(a);
                Evaluated { numerator: -a.numerator, denominator: a.denominator }
            }
            SeriesExpr::Pow(a, e) => {
                let a = self.eval(a);
                Evaluated { numerator: a.numerator.power(*e), denominator: num_traits::pow(a.denominator, *e as usize) }
            }
            SeriesExpr::Apply(op, a) => {
                let a = self.eval(a);
                let numerator = match op {
                    UnaryOp::D => a.numerator.theta_derivative(),
                    UnaryOp::Dilate(k) => a.numerator.dilate(*k).expect("parser rejects k = 0"),
                    UnaryOp::Alt => a.numerator.alternate(),
                    UnaryOp::Even => a.numerator.parity_part(Parity::Even),
                    UnaryOp::Odd => a.numerator.parity_part(Parity::Odd),
                };
                Evaluated { numerator, denominator: a.denominator }
            }
        }
    }
}

/// `expr` as `numerator / denominator`, exact through `q^order`.
pub fn evaluate(expr: &SeriesExpr, order: usize) -> Evaluated {
    Evaluator::new(order).eval(expr)
}
