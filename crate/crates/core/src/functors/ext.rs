use super::injective::{injective_resolution, InjectiveComplex};
use crate::complex::CellId;
use crate::error::{Error, Result};
use crate::linalg::{GradedDims, Matrix, SpaceComplex};
use crate::sheaf::{same_base, CellularSheaf, SheafComplex};

/// A component `Hom(F^p(σ), V)` of the Hom complex, stored row-major.
#[derive(Clone, Copy)]
struct Slot {
    p: i32,
    summand: usize,
    cell: CellId,
    mult: usize,
    fdim: usize,
    offset: usize,
}

fn slots(f: &SheafComplex, i: &InjectiveComplex, n: i32) -> Vec<Slot> {
    let mut out = Vec::new();
    let mut off = 0;
    for p in f.degrees() {
        for (summand, &(cell, mult)) in i.summands(p + n).iter().enumerate() {
            let fdim = f.stalk_dim(p, cell);
            out.push(Slot { p, summand, cell, mult, fdim, offset: off });
            off += mult * fdim;
        }
    }
    out
}

fn width(s: &[Slot]) -> usize {
    s.iter().map(|t| t.mult * t.fdim).sum()
}

/// The complex `Hom^•(F, I)` for an injective complex `I`, with
/// `D φ = d_I ∘ φ − (−1)^n φ ∘ d_F`. `Hom(F, E_σ ⊗ V) = Hom(F(σ), V)`.
pub fn hom_complex(f: &SheafComplex, i: &InjectiveComplex) -> Result<SpaceComplex> {
    if !same_base(f.base(), i.base()) || f.domain() != i.domain() {
        return Err(Error::BaseMismatch);
    }
    let x = f.base();
    let lo = i.min_degree() - f.max_degree();
    let hi = i.max_degree() - f.min_degree();
    let layouts: Vec<Vec<Slot>> = (lo..=hi).map(|n| slots(f, i, n)).collect();
    let mut diffs = Vec::new();
    for (idx, n) in (lo..hi).enumerate() {
        let (src, dst) = (&layouts[idx], &layouts[idx + 1]);
        let mut m = Matrix::zeros(width(dst), width(src));
        for s in src {
            if s.mult * s.fdim == 0 {
                continue;
            }
            // Composition with d_I: slots (p, t) with t a summand of I^{p+n+1}.
            let offs = i.offsets(s.p + n);
            let offt = i.offsets(s.p + n + 1);
            let d_i = i.diff(s.p + n);
            for t in dst.iter().filter(|t| t.p == s.p) {
                if t.mult * t.fdim == 0 || !x.is_face(t.cell, s.cell) {
                    continue;
                }
                let a = d_i.block(offt[t.summand].1, offs[s.summand].1, t.mult, s.mult);
                if a.is_zero() {
                    continue;
                }
                let rho = f.term(s.p).unwrap().restriction(t.cell, s.cell);
                m.add_block(t.offset, s.offset, &a.kron(&rho.transpose()));
            }
            // Precomposition with d_F^{p−1}: slot (p−1, same summand).
            if let Some(t) = dst.iter().find(|t| t.p == s.p - 1 && t.summand == s.summand) {
                if t.mult * t.fdim > 0 {
                    let b = f.diff(s.p - 1, s.cell);
                    let sign = if n.rem_euclid(2) == 0 { -1 } else { 1 };
                    m.add_block(t.offset, s.offset, &Matrix::identity(s.mult).kron(&b.transpose()).scale_int(sign));
                }
            }
        }
        diffs.push(m);
    }
    SpaceComplex::new(lo, layouts.iter().map(|l| width(l)).collect(), diffs)
}

/// `Ext^k(F, G) = H^k(Hom^•(F, I))` for the canonical resolution `G → I`.
pub fn hyperext(f: &SheafComplex, g: &SheafComplex) -> Result<GradedDims> {
    if !same_base(f.base(), g.base()) || f.domain() != g.domain() {
        return Err(Error::BaseMismatch);
    }
    let i = injective_resolution(g)?;
    Ok(hom_complex(f, &i)?.cohomology())
}

/// `dim Hom(F, G)` for single sheaves, as the solution space of the
/// naturality equations `ρ^G φ_τ = φ_σ ρ^F`.
pub fn hom_dimension(f: &CellularSheaf, g: &CellularSheaf) -> Result<usize> {
    if !same_base(f.base(), g.base()) || f.domain() != g.domain() {
        return Err(Error::BaseMismatch);
    }
    let x = f.base();
    let n = x.num_cells();
    let mut off = vec![0; n];
    let mut total = 0;
    for c in f.domain().cells() {
        off[c] = total;
        total += f.stalk_dim(c) * g.stalk_dim(c);
    }
    let mut eqs = Matrix::zeros(0, total);
    for s in f.domain().cells() {
        for &(t, _) in x.facets(s) {
            if !f.domain().contains(t) {
                continue;
            }
            let rows = g.stalk_dim(s) * f.stalk_dim(t);
            if rows == 0 {
                continue;
            }
            let mut block = Matrix::zeros(rows, total);
            let a = g.restriction_one(t, s).kron(&Matrix::identity(f.stalk_dim(t)));
            let b = Matrix::identity(g.stalk_dim(s)).kron(&f.restriction_one(t, s).transpose());
            block.add_block(0, off[t], &a);
            block.add_block(0, off[s], &b.scale_int(-1));
            eqs = eqs.vstack(&block);
        }
    }
    Ok(total - eqs.rank())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::CellRegion;
    use crate::functors::sections::derived_sections;
    use crate::sheaf::extension_by_zero;
    use std::sync::Arc;

    #[test]
    fn self_ext_of_constant_is_cohomology() {
        let x = Arc::new(crate::corpus::octahedron());
        let f = SheafComplex::constant(x.clone(), 1);
        assert_eq!(hyperext(&f, &f).unwrap(), GradedDims::from_slice(0, &[1, 0, 1]));
    }

    #[test]
    fn skyscraper_self_ext() {
        let x = Arc::new(crate::corpus::interval());
        let sky = extension_by_zero(x.clone(), &CellRegion::closed(&x, [0]).unwrap(), 1).unwrap();
        assert_eq!(hyperext(&sky, &sky).unwrap(), GradedDims::from_slice(0, &[1]));
    }

    #[test]
    fn extension_by_zero_adjunction() {
        let x = Arc::new(crate::corpus::octahedron());
        let (star, _) = x.star_link(0);
        let f = SheafComplex::constant(x.clone(), 1);
        let j = extension_by_zero(x.clone(), &star, 1).unwrap();
        assert_eq!(hyperext(&j, &f).unwrap(), derived_sections(&star, &f).unwrap());
    }

    #[test]
    fn yoneda_degree_zero() {
        let x = Arc::new(crate::corpus::interval());
        let u = CellRegion::open(&x, [2]).unwrap();
        let a = extension_by_zero(x.clone(), &u, 1).unwrap();
        let b = SheafComplex::constant(x.clone(), 1);
        for (f, g) in [(&a, &b), (&b, &a), (&b, &b), (&a, &a)] {
            let hom = hom_dimension(&f.terms()[0], &g.terms()[0]).unwrap();
            assert_eq!(hyperext(f, g).unwrap().get(0), hom);
        }
        // ℚ_X → j_!ℚ_U has no nonzero maps; the reverse inclusion does.
        assert_eq!(hom_dimension(&b.terms()[0], &a.terms()[0]).unwrap(), 0);
        assert_eq!(hom_dimension(&a.terms()[0], &b.terms()[0]).unwrap(), 1);
    }
}
