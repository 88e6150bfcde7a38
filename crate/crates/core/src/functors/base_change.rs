use serde::Serialize;

use super::duality::pushforward_proper;
use super::map::SimplicialMap;
use super::sections::derived_sections_compact;
use crate::complex::{CellId, CellRegion};
use crate::error::{Error, Result};
use crate::linalg::GradedDims;
use crate::sheaf::SheafComplex;

/// Both sides of `(R^k f_! F)_y ≅ H^k_c(f^{-1}(y), F)` at an open cell `y`.
#[derive(Clone, Debug, Serialize)]
pub struct BaseChangeReport {
    pub stalk: GradedDims,
    pub fiber: GradedDims,
    pub holds: bool,
}

/// The fiber over a point of the open cell `y` is read off the cell region
/// `R_y = {σ : f(σ) = y}`, which is a product of that fiber with the open
/// cell, so `H_c(fiber) = H_c(R_y)[dim y]`.
pub fn base_change_point_fiber(f: &SimplicialMap, sheaf: &SheafComplex, y: CellId) -> Result<BaseChangeReport> {
    let target = f.target();
    if y >= target.num_cells() || !f.target_domain().contains(y) {
        return Err(Error::Invalid(format!("cell {y} is not in the target region")));
    }
    let stalk = pushforward_proper(f, sheaf)?.stalk(y);
    let fiber_cells = f.cell_fiber(y);
    let fiber = if fiber_cells.is_empty() {
        GradedDims::zero()
    } else {
        let region = CellRegion::infer(f.source(), fiber_cells)?;
        derived_sections_compact(&sheaf.restrict(&region)?)?.shifted(target.cell_dim(y) as i32)
    };
    Ok(BaseChangeReport { holds: stalk == fiber, stalk, fiber })
}
