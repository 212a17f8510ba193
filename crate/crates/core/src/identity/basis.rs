use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

use super::ast::{Literal, SeriesExpr};
use super::eval::{Evaluated, Evaluator};

/// Extra leading rows beyond the basis size used for elimination.
pub const GUARD_ROWS: usize = 8;

/// Rationals `c_i` with `target = Σ c_i basis_i` through `q^order`.
///
/// Elimination runs on the leading `basis.len() + GUARD_ROWS` coefficient
/// rows, taking the first nonzero row as pivot in each column; the solution
/// is then checked against every remaining row. `Ok(None)` means no
/// combination matches. An identically zero target yields zeros for any
/// basis.
pub fn express_in_basis(target: &SeriesExpr, basis: &[SeriesExpr], order: usize) -> Result<Option<Vec<BigRational>>> {
    let mut ev = Evaluator::new(order);
    let t = ev.eval(target);
    let cols: Vec<Evaluated> = basis.iter().map(|b| ev.eval(b)).collect();
    let k = cols.len();
    if t.is_zero() {
        return Ok(Some(vec![BigRational::zero(); k]));
    }
    let rows = (k + GUARD_ROWS).min(order + 1);
    // Augmented matrix: rows are coefficient indices, last column is the target.
    let mut m: Vec<Vec<BigRational>> = (0..rows)
        .map(|n| cols.iter().map(|c| c.coeff(n)).chain(std::iter::once(t.coeff(n))).collect())
        .collect();
    let mut pivot_rows = Vec::with_capacity(k);
    for col in 0..k {
        let Some(p) = (0..rows).find(|r| !pivot_rows.contains(r) && !m[*r][col].is_zero()) else {
            return Err(Error::DegenerateBasis { rank: pivot_rows.len(), size: k });
        };
        let inv = m[p][col].recip();
        for x in m[p].iter_mut() {
            *x *= &inv;
        }
        let pivot = m[p].clone();
        for (r, row) in m.iter_mut().enumerate() {
            if r != p && !row[col].is_zero() {
                let factor = row[col].clone();
                for (x, y) in row.iter_mut().zip(&pivot) {
                    *x -= &factor * y;
                }
            }
        }
        pivot_rows.push(p);
    }
    if (0..rows).any(|r| !pivot_rows.contains(&r) && !m[r][k].is_zero()) {
        return Ok(None);
    }
    let coeffs: Vec<BigRational> = pivot_rows.iter().map(|&p| m[p][k].clone()).collect();
    for n in rows..=order {
        let mut acc = BigRational::zero();
        for (c, col) in coeffs.iter().zip(&cols) {
            acc += c * col.coeff(n);
        }
        if acc != t.coeff(n) {
            return Ok(None);
        }
    }
    Ok(Some(coeffs))
}

fn literal(c: &BigRational) -> SeriesExpr {
    SeriesExpr::Literal(Literal::ratio(c.numer().clone(), c.denom().clone()))
}

/// `Σ c_i basis_i` as an expression, dropping zero terms.
pub fn combination_expr(basis: &[SeriesExpr], coeffs: &[BigRational]) -> SeriesExpr {
    let mut acc: Option<SeriesExpr> = None;
    for (b, c) in basis.iter().zip(coeffs) {
        if c.is_zero() {
            continue;
        }
        let negative = *c < BigRational::zero();
        let mag = if negative { -c } else { c.clone() };
        let term = if mag.is_one() { b.clone() } else { literal(&mag).mul(b.clone()) };
        acc = Some(match (acc, negative) {
            (None, false) => term,
            (None, true) => term.neg(),
            (Some(a), false) => a.add(term),
            (Some(a), true) => a.sub(term),
        });
    }
    acc.unwrap_or_else(|| SeriesExpr::Literal(Literal::integer(BigInt::zero())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::identity::ast::{Expected, IdentityRecord};
    use crate::identity::parser::parse_expr;
    use crate::identity::verify::verify;

    fn exprs(list: &[&str]) -> Vec<SeriesExpr> {
        list.iter().map(|s| parse_expr(s).unwrap()).collect()
    }

    fn ints(v: &[BigRational]) -> Vec<i64> {
        v.iter().map(|c| c.to_integer().try_into().unwrap()).collect()
    }

    #[test]
    fn recovers_mpmp2() {
        let t = parse_expr("GP*dilate(GP,2)").unwrap();
        let b = exprs(&["dilate(GQ,2)", "D(GP)", "D(dilate(GP,2))"]);
        let c = express_in_basis(&t, &b, 60).unwrap().unwrap();
        assert_eq!(ints(&c), [1, 1, 2]);
        let rec = IdentityRecord::new("re", t, combination_expr(&b, &c), Expected::Pass);
        assert!(verify(&rec, 120).passed());
    }

    #[test]
    fn recovers_whwh_proof() {
        let t = parse_expr("GE^2").unwrap();
        let b = exprs(&["GQ", "dilate(GQ,2)", "GQ12"]);
        assert_eq!(ints(&express_in_basis(&t, &b, 40).unwrap().unwrap()), [5, -4, 128]);
    }

    #[test]
    fn rational_coefficients() {
        let t = parse_expr("1/3*GE - 2/7*GP").unwrap();
        let b = exprs(&["GP", "GE"]);
        let c = express_in_basis(&t, &b, 30).unwrap().unwrap();
        assert_eq!(c, [BigRational::new((-2).into(), 7.into()), BigRational::new(1.into(), 3.into())]);
    }

    #[test]
    fn zero_none_and_degenerate() {
        let b = exprs(&["GP", "GQ"]);
        let zero = parse_expr("0").unwrap();
        assert_eq!(express_in_basis(&zero, &b, 10).unwrap().unwrap(), vec![BigRational::zero(); 2]);
        let t = parse_expr("GE").unwrap();
        assert_eq!(express_in_basis(&t, &b, 30).unwrap(), None);
        let dup = exprs(&["GP", "2*GP"]);
        assert_eq!(express_in_basis(&t, &dup, 30), Err(Error::DegenerateBasis { rank: 1, size: 2 }));
        let zero_basis = exprs(&["0"]);
        assert!(matches!(express_in_basis(&t, &zero_basis, 5), Err(Error::DegenerateBasis { .. })));
    }

    #[test]
    fn combination_printing() {
        let b = exprs(&["GP", "GQ", "GE"]);
        let c = [BigRational::new(1.into(), 2.into()), BigRational::zero(), BigRational::from_integer((-3).into())];
        assert_eq!(combination_expr(&b, &c).to_string(), "1/2*GP - 3*GE");
    }
}
