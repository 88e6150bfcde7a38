use super::injective::{injective_resolution, InjectiveComplex};
use crate::complex::{CellId, CellRegion, SimplicialComplex};
use crate::error::{Error, Result};
use crate::linalg::{GradedDims, Matrix, SpaceComplex};
use crate::sheaf::{CellularSheaf, SheafComplex};

/// `Γ(U, G)` for a single sheaf: the limit of stalks over the face poset of
/// `U`, as a basis of the kernel of `x ↦ (ρ x_τ − x_σ)` over codimension-one
/// pairs. Columns live in `⊕_{c ∈ U} G(c)` (cells in id order).
pub fn sheaf_sections(g: &CellularSheaf, u: &CellRegion) -> Matrix {
    let x = g.base();
    let cells: Vec<CellId> = u.cells().collect();
    let mut off = vec![0; x.num_cells()];
    let mut total = 0;
    for &c in &cells {
        off[c] = total;
        total += g.stalk_dim(c);
    }
    let mut rows = Vec::new();
    for &s in &cells {
        for &(t, _) in x.facets(s) {
            if !u.contains(t) {
                continue;
            }
            let rho = g.restriction_one(t, s);
            for i in 0..g.stalk_dim(s) {
                let mut row = vec![crate::linalg::int(0); total];
                for j in 0..g.stalk_dim(t) {
                    row[off[t] + j] = rho.get(i, j).clone();
                }
                row[off[s] + i] -= crate::linalg::int(1);
                rows.push(row);
            }
        }
    }
    Matrix::from_rows(rows, total).kernel()
}

/// `Γ(U, F)` for a complex of sheaves, degreewise by limits, with the
/// differential induced on the section spaces. Not derived.
pub fn sections_by_limit(f: &SheafComplex, u: &CellRegion) -> SpaceComplex {
    let cells: Vec<CellId> = u.cells().collect();
    let bases: Vec<Matrix> = f.terms().iter().map(|t| sheaf_sections(t, u)).collect();
    let diffs = f
        .degrees()
        .zip(bases.windows(2))
        .map(|(k, w)| {
            let blocks: Vec<Matrix> = cells.iter().map(|&c| f.diff(k, c)).collect();
            let image = &Matrix::block_diag(&blocks) * &w[0];
            w[1].solve(&image).expect("differentials preserve sections")
        })
        .collect();
    SpaceComplex::new(f.min_degree(), bases.iter().map(Matrix::cols).collect(), diffs).expect("induced differential")
}

fn check_open_in_domain(f: &SheafComplex, u: &CellRegion) -> Result<()> {
    let x = f.base();
    for c in u.cells() {
        if !f.domain().contains(c) {
            return Err(Error::RegionKind { expected: "inside the domain", detail: x.cell_name(c) });
        }
        for &(t, _) in x.cofacets(c) {
            if f.domain().contains(t) && !u.contains(t) {
                return Err(Error::RegionKind { expected: "open", detail: x.cell_name(c) });
            }
        }
    }
    Ok(())
}

/// Hypercohomology `H^k(U, F)` of an open region of the domain.
pub fn derived_sections(u: &CellRegion, f: &SheafComplex) -> Result<GradedDims> {
    Ok(derived_section_complex(u, f)?.cohomology())
}

/// The complex `Γ(U, I)` for the canonical resolution `F → I`.
pub fn derived_section_complex(u: &CellRegion, f: &SheafComplex) -> Result<SpaceComplex> {
    check_open_in_domain(f, u)?;
    let i = injective_resolution(f)?;
    Ok(sections_by_limit(&i.to_sheaf_complex(), u))
}

/// `H^k(X, F)` over the whole domain.
pub fn global_sections(f: &SheafComplex) -> Result<GradedDims> {
    derived_sections(&f.domain().clone(), f)
}

/// `H^k_c(U, F) = H^k(X, j_! F)`, extending by zero to the whole complex.
pub fn derived_sections_compact(f: &SheafComplex) -> Result<GradedDims> {
    let whole = CellRegion::whole(f.base());
    let ext = f.extend_by_zero(&whole)?;
    global_sections(&ext)
}

/// Euler characteristic of `RΓ(W, F)` from stalk data alone.
///
/// Each sheaf's canonical resolution has multiplicities determined by its
/// stalk dimensions, and `Γ(W, E_σ) = ℚ` iff `σ ∈ W`.
pub fn euler_sections_fast(x: &SimplicialComplex, domain: &CellRegion, term_dims: &[Vec<i64>], w: &CellRegion) -> i64 {
    let n = x.num_cells();
    // Signed stalk dims: Σ_k (−1)^k dim F^k(c); resolution levels alternate.
    let mut level: Vec<i64> = (0..n).map(|c| term_dims.iter().map(|t| t[c]).sum()).collect();
    let mut total = 0i64;
    let mut sign = 1;
    for _ in 0..=x.dim() + 1 {
        total += sign * w.cells().map(|c| level[c]).sum::<i64>();
        level = (0..n)
            .map(|t| {
                if !domain.contains(t) {
                    return 0;
                }
                x.cofaces(t).into_iter().filter(|&s| s != t && domain.contains(s)).map(|s| level[s]).sum()
            })
            .collect();
        sign = -sign;
    }
    total
}

/// Signed term dimensions `(−1)^k dim F^k(c)` per degree, for
/// [`euler_sections_fast`].
pub fn signed_term_dims(f: &SheafComplex) -> Vec<Vec<i64>> {
    f.degrees()
        .map(|k| {
            let s = if k.rem_euclid(2) == 0 { 1 } else { -1 };
            (0..f.base().num_cells()).map(|c| s * f.stalk_dim(k, c) as i64).collect()
        })
        .collect()
}

/// Convenience: `χ(RΓ(W, F))` through the stalk-dimension shortcut.
pub fn euler_sections(w: &CellRegion, f: &SheafComplex) -> i64 {
    euler_sections_fast(f.base(), f.domain(), &signed_term_dims(f), w)
}

/// Summand route for sections, kept for comparison with the limit route.
pub fn derived_sections_by_summands(u: &CellRegion, f: &SheafComplex) -> Result<GradedDims> {
    let i: InjectiveComplex = injective_resolution(f)?;
    Ok(i.sections(u)?.cohomology())
}
