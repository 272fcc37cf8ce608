//! Exact multivariate polynomial arithmetic over ℚ.
//!
//! Provides monomial orders, sparse rational polynomials, Buchberger's
//! algorithm with elimination, polynomial gcd and squarefree parts, and the
//! text/JSON serialization formats used for computed relations.

pub mod gcd;
pub mod groebner;
pub mod io;
pub mod monomial;
pub mod poly;

pub use gcd::{div_exact, gcd, lcm, squarefree_part};
pub use groebner::{
    buchberger, buchberger_with, divide, eliminate, eliminate_with, is_groebner_basis, is_reduced,
    normal_form, s_polynomial, Elimination, GroebnerConfig, GroebnerStats, DEFAULT_STEP_BUDGET,
};
pub use io::{PolyDocument, TermRecord};
pub use monomial::{Monomial, MonomialOrder};
pub use poly::MPoly;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum PolyError {
    #[error("arity mismatch: expected {expected}, found {found}")]
    ArityMismatch { expected: usize, found: usize },
    #[error("empty generator or divisor list")]
    EmptyInput,
    #[error("division by the zero polynomial")]
    ZeroDivisor,
    #[error("polynomial involves one of the first {count} variables")]
    VariableOccurs { count: usize },
    #[error("inexact division")]
    InexactDivision,
    #[error("Gröbner step budget exceeded: {0}")]
    BudgetExceeded(Box<GroebnerStats>),
    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("invalid document: {0}")]
    Document(String),
}
