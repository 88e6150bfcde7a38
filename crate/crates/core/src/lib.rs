//! Exact computations in the derived category of constructible sheaves on
//! finite simplicial complexes: six operations, Verdier duality, Euler
//! calculus and characteristic cycles.

pub mod complex;
pub mod corpus;
pub mod error;
pub mod euler;
pub mod functors;
pub mod linalg;
pub mod microlocal;
pub mod random;
pub mod sheaf;

pub use complex::{CellId, CellRegion, RegionKind, Simplex, SimplicialComplex};
pub use error::{Error, Result};
pub use linalg::{GradedDims, Matrix, Rational, SpaceComplex};
pub use microlocal::{ConormalChamber, ConormalCycle};
pub use sheaf::{CellularSheaf, ConstructibleFunction, SheafComplex, SheafMorphism};
