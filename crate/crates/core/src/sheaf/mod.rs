//! Cellular sheaves, bounded complexes of them, and morphisms.

mod cellular;
mod complex;
mod function;
mod io;
mod morphism;
mod ops;

pub(crate) use cellular::same_base;
pub use cellular::CellularSheaf;
pub use complex::SheafComplex;
pub use function::ConstructibleFunction;
pub use io::{matrix_from_json, matrix_to_json, resolve_complex};
pub use morphism::SheafMorphism;
pub use ops::{direct_sum, extension_by_zero, local_system, tensor};
