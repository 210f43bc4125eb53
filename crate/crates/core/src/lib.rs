//! Exact computations with twisted complexes, their spectral sequences,
//! derived A-infinity algebras and the homotopies between their morphisms.

/// Structural equality for types whose maps compare up to zero blocks.
macro_rules! impl_field_eq {
    ($t:ident { $($f:ident),* }) => {
        impl<F: $crate::field::Field> PartialEq for $t<F> {
            fn eq(&self, o: &Self) -> bool {
                true $(&& self.$f == o.$f)*
            }
        }

        impl<F: $crate::field::Field> Eq for $t<F> {}
    };
}

pub mod bigraded;
pub mod dainf;
pub mod doc;
pub mod error;
pub mod field;
pub mod filtered;
pub mod gen;
pub mod linalg;
pub mod oracle;
pub mod report;
pub mod twisted;

pub use error::{Error, Result};
