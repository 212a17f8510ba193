//! Identity language, exact verification, and linear-combination recovery.

pub mod ast;
pub mod basis;
pub mod convolutions;
pub mod eval;
pub mod parser;
pub mod registry;
pub mod verify;

pub use ast::{Expected, IdentityRecord, Literal, SeriesExpr, UnaryOp};
pub use basis::{combination_expr, express_in_basis};
pub use eval::{evaluate, Evaluated, Evaluator};
pub use parser::{parse, parse_expr};
pub use registry::builtin_registry;
pub use verify::{run_suite, verify, Failure, Status, SuiteEntry, SuiteReport, VerificationOutcome};
