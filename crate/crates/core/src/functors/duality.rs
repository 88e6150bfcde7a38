use std::sync::Arc;

use super::images::{pullback, pushforward_derived};
use super::map::SimplicialMap;
use crate::complex::{CellId, SimplicialComplex};
use crate::error::Result;
use crate::linalg::{int, Matrix};
use crate::sheaf::{CellularSheaf, SheafComplex};

/// Summands `(τ, p)` of `(𝔻F)^n(σ)`: cells τ ⊇ σ of the domain and degrees
/// `p` with `n = −dim τ − p`, τ in id order.
fn dual_summands(f: &SheafComplex, sigma: CellId, n: i32) -> Vec<(CellId, i32, usize)> {
    let x = f.base();
    x.cofaces(sigma)
        .into_iter()
        .filter(|&t| f.domain().contains(t))
        .filter_map(|t| {
            let p = -(x.cell_dim(t) as i32) - n;
            let d = f.stalk_dim(p, t);
            (d > 0).then_some((t, p, d))
        })
        .collect()
}

fn offsets(list: &[(CellId, i32, usize)]) -> Vec<usize> {
    let mut off = 0;
    list.iter()
        .map(|s| {
            let o = off;
            off += s.2;
            o
        })
        .collect()
}

/// Combinatorial Verdier dual.
///
/// `(𝔻F)^n(σ) = ⊕ F^p(τ)^*` over τ ⊇ σ with `dim τ + p = −n`. The
/// differential transposes restrictions, weighted by incidence numbers, and
/// transposes the internal differential with sign `(−1)^{dim τ}`. Restrictions
/// of `𝔻F` are the projections onto summands over the larger cell.
pub fn verdier_dual(f: &SheafComplex) -> SheafComplex {
    let x = f.base().clone();
    let n_cells = x.num_cells();
    let domain = f.domain().clone();
    let lo = -(x.dim() as i32) - f.max_degree();
    let hi = -f.min_degree();
    let layout: Vec<Vec<Vec<(CellId, i32, usize)>>> =
        (lo..=hi).map(|n| (0..n_cells).map(|s| if domain.contains(s) { dual_summands(f, s, n) } else { vec![] }).collect()).collect();
    let total = |i: usize, s: CellId| -> usize { layout[i][s].iter().map(|t| t.2).sum() };

    let mut terms = Vec::new();
    for (i, per_cell) in layout.iter().enumerate() {
        let stalks = (0..n_cells).map(|s| total(i, s)).collect();
        terms.push(CellularSheaf::from_fn(x.clone(), domain.clone(), stalks, |a, b| {
            let (src, dst) = (&per_cell[a], &per_cell[b]);
            let (so, dof) = (offsets(src), offsets(dst));
            let mut m = Matrix::zeros(total(i, b), total(i, a));
            for (j, &(t, p, d)) in dst.iter().enumerate() {
                let k = src.iter().position(|&(t2, p2, _)| t2 == t && p2 == p).expect("summand over a coface");
                m.set_block(dof[j], so[k], &Matrix::identity(d));
            }
            m
        }));
    }

    let mut diffs = Vec::new();
    for i in 0..layout.len().saturating_sub(1) {
        let d: Vec<Matrix> = (0..n_cells)
            .map(|s| {
                let (src, dst) = (&layout[i][s], &layout[i + 1][s]);
                let (so, dof) = (offsets(src), offsets(dst));
                let mut m = Matrix::zeros(total(i + 1, s), total(i, s));
                for (a, &(t, p, _)) in src.iter().enumerate() {
                    for (b, &(t2, p2, _)) in dst.iter().enumerate() {
                        if p2 == p && x.cell_dim(t2) + 1 == x.cell_dim(t) && x.is_face(t2, t) {
                            let rho = f.term(p).expect("degree in range").restriction_one(t2, t);
                            let block = rho.transpose().scale_int(x.incidence(t2, t));
                            m.set_block(dof[b], so[a], &block);
                        } else if t2 == t && p2 == p - 1 {
                            let sign = if x.cell_dim(t).is_multiple_of(2) { int(1) } else { int(-1) };
                            m.set_block(dof[b], so[a], &f.diff(p - 1, t).transpose().scale(&sign));
                        }
                    }
                }
                m
            })
            .collect();
        diffs.push(d);
    }
    SheafComplex::with_parts(x, domain, lo, terms, diffs).trimmed()
}

/// `𝔻_X = 𝔻(ℚ_X)`.
pub fn dualizing_complex(x: &Arc<SimplicialComplex>) -> SheafComplex {
    verdier_dual(&SheafComplex::constant(x.clone(), 1))
}

/// `Rf_! = 𝔻 ∘ Rf_* ∘ 𝔻`.
pub fn pushforward_proper(f: &SimplicialMap, sheaf: &SheafComplex) -> Result<SheafComplex> {
    Ok(verdier_dual(&pushforward_derived(f, &verdier_dual(sheaf))?))
}

/// `f^! = 𝔻 ∘ f^* ∘ 𝔻`.
pub fn upper_shriek(f: &SimplicialMap, g: &SheafComplex) -> Result<SheafComplex> {
    Ok(verdier_dual(&pullback(f, &verdier_dual(g))?))
}
