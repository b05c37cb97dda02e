use thiserror::Error;

use crate::generator::Series;

#[derive(Debug, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("rank {rank} is out of range for series {series}")]
    RankOutOfRange { series: Series, rank: usize },
    #[error("generator {0} is not in the algebra basis")]
    ForeignGenerator(String),
    #[error("subalgebra is not closed: [{left}, {right}] leaves the span")]
    ClosureFailure { left: String, right: String },
    #[error("splitting spec does not fit the algebra: {0}")]
    SpecMismatch(String),
    #[error("span is not a subalgebra: [{left}, {right}] leaves it")]
    NotSubalgebra { left: String, right: String },
    #[error("matrix is singular")]
    Singular,
    #[error("representation error: {0}")]
    Representation(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
