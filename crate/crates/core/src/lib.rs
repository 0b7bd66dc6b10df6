//! Exact computations with constant-coefficient differential operators,
//! the Weyl algebra and polynomials over `Q`, `Q(i)` and `F_p`, plus an
//! experiment harness for vanishing statements of the form
//! `Λ^m (g f^m) = 0`.

pub mod diffop;
pub mod error;
pub mod expr;
pub mod field;
pub mod lab;
pub mod poly;
pub mod reduction;
pub mod weyl;

pub use diffop::{Decomposition, DiffOp, PowerStrategy};
pub use error::{Error, Result};
pub use field::{FieldSpec, Prime, Scalar};
pub use poly::{ExponentVector, Matrix, Polynomial};
pub use reduction::{ExtendedRing, LinearForm, PowerSumDecomposition};
pub use weyl::WeylElement;
