//! Exact linear algebra over a [`Field`](crate::field::Field).

mod matrix;
mod subquotient;

pub use matrix::{Matrix, Rref};
pub use subquotient::{induced_map, Subquotient};
