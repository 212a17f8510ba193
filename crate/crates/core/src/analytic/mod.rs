//! Floating-point checks of closed-form evaluations in `x = k²` and
//! `z = ₂F₁(1/2, 1/2; 1; x)`.

pub mod formulas;
pub mod hyp;
pub mod point;
pub mod sums;

pub use formulas::{check_evaluation, check_grid, evaluation_formulas, EvaluationFormula, ResidualReport};
pub use hyp::{hyp2f1_half, ode_residual, z_prime, z_second};
pub use point::{duplicate_point, dy_dx_residual, make_point, sign_change_point, EllipticPoint};
pub use sums::{series_value, truncation_order, NumericValue, TermSum};
