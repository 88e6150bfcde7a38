//! Finite simplicial complexes with exact rational embeddings.

mod io;
mod product;
mod region;
mod simplex;
mod simplicial;
mod subdivide;

pub use io::ComplexFile;
pub use product::{staircase_product, StaircaseProduct};
pub use region::{CellRegion, RegionKind};
pub use simplex::{Simplex, VertexId};
pub use simplicial::{CellId, SimplicialComplex};
pub use subdivide::{barycentric_subdivision, level_sides, subdivide_along_level, Refinement};
