use thiserror::Error;

use crate::bigraded::Bideg;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("module mismatch: {0}")]
    ModuleMismatch(String),
    #[error("map has bidegree {found}, expected {expected}")]
    Bidegree { expected: Bideg, found: Bideg },
    #[error("field mismatch: document uses {found}, expected {expected}")]
    FieldMismatch { expected: String, found: String },
    #[error("not a subspace: {0}")]
    NotSubspace(String),
    #[error("induced map is not well defined: {0}")]
    NotWellDefined(String),
    #[error("filtration violated: {0}")]
    Filtration(String),
    #[error("matrix is not invertible: {0}")]
    Singular(String),
    #[error("no solution: {0}")]
    NoSolution(String),
    #[error("truncation too small: {0}")]
    Truncation(String),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
