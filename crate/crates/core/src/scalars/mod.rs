//! Exact arithmetic kernel: Gaussian rationals and multivariate polynomials
//! over them, together with the textual expression language used by scene
//! files and reports.

mod gaussrat;
mod parser;
mod poly;

pub use gaussrat::GaussRat;
pub use parser::parse;
pub use poly::{Monomial, Scalar, Vars, vars};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScalarError {
    #[error("operands are defined over different variable lists")]
    VariableMismatch,
    #[error("unknown coordinate `{0}`")]
    UnknownCoordinate(String),
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unknown identifier `{0}`")]
    UnknownIdentifier(String),
}
