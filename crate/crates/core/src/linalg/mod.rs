//! Exact dense linear algebra over `F_p` and `Q`.

pub mod field;
pub mod matrix;
pub mod subspace;

pub use field::{Field, FieldConfig, PrimeField, Rationals};
pub use matrix::{Matrix, Rref};
pub use subspace::{extend_closure, quotient_with_section, span_closure, Quotient, Subspace};
