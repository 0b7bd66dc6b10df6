use thiserror::Error;

use crate::field::FieldSpec;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("ring dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("coefficient field mismatch: {left} vs {right}")]
    FieldMismatch { left: FieldSpec, right: FieldSpec },

    #[error("variable index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },

    #[error("{0} is not a prime")]
    NotPrime(u64),

    #[error("matrix is singular over {0}")]
    SingularMatrix(FieldSpec),

    #[error("characteristic {characteristic} too small for degree {degree}")]
    CharacteristicTooSmall { characteristic: u64, degree: usize },

    #[error("division by zero")]
    DivisionByZero,

    #[error("zero linear form where a non-zero form is required")]
    ZeroLinearForm,

    #[error("precondition violated: {0}")]
    Precondition(String),
}
