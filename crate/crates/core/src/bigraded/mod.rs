//! Bigraded vector spaces, homogeneous maps and tensor products.

mod lincomb;
mod map;
mod module;
mod multilinear;
mod sum;
mod tensor;

pub use lincomb::LinComb;
pub use map::{BigradedMap, Vector};
pub use module::{joint_width, BasisElem, Bideg, BigradedModule};
pub use sum::SumLayout;
pub use multilinear::{apply_factors, apply_operation, koszul_odd, Factor, Operation};
pub use tensor::{extend_tensor, symmetry_iso, tensor_maps, TensorLayout, TensorVector, Tuple};
