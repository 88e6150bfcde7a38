use std::collections::BTreeMap;

use serde::Serialize;

use super::ext::hyperext;
use super::injective::{injective_resolution, InjectiveComplex};
use crate::complex::CellRegion;
use crate::error::{Error, Result};
use crate::linalg::{GradedDims, Matrix, SpaceComplex};
use crate::sheaf::{extension_by_zero, SheafComplex};

fn check_locally_closed(f: &SheafComplex, z: &CellRegion) -> Result<()> {
    if !z.is_subset(f.domain()) || !z.is_locally_closed(f.base()) {
        return Err(Error::RegionKind { expected: "locally closed inside the domain", detail: format!("{:?}", z.names(f.base())) });
    }
    Ok(())
}

/// Restriction `Γ(W₁, I) → Γ(W₂, I)` for opens `W₂ ⊆ W₁`, as the projection
/// onto the summands in `W₂`.
fn restriction_map(i: &InjectiveComplex, w1: &CellRegion, w2: &CellRegion) -> BTreeMap<i32, Matrix> {
    (i.min_degree()..=i.max_degree())
        .map(|k| {
            let src: Vec<_> = i.summands(k).iter().filter(|(s, _)| w1.contains(*s)).collect();
            let rows: usize = src.iter().filter(|(s, _)| w2.contains(*s)).map(|(_, m)| m).sum();
            let cols: usize = src.iter().map(|(_, m)| m).sum();
            let mut m = Matrix::zeros(rows, cols);
            let (mut r, mut c) = (0, 0);
            for &&(s, mult) in &src {
                if w2.contains(s) {
                    m.set_block(r, c, &Matrix::identity(mult));
                    r += mult;
                }
                c += mult;
            }
            (k, m)
        })
        .collect()
}

/// `RΓ_Z(X, F)` for `Z = Y ∖ Y′` (`Y` the closure of `Z`), as the cone of
/// `RΓ(X ∖ Y′) → RΓ(X ∖ Y)` shifted by −1.
pub fn local_cohomology_complex(z: &CellRegion, f: &SheafComplex) -> Result<SpaceComplex> {
    check_locally_closed(f, z)?;
    let x = f.base();
    let (y, y_prime) = z.closed_pair(x)?;
    let d = f.domain();
    let w1 = CellRegion::infer(x, d.cells().filter(|&c| !y_prime.contains(c)))?;
    let w2 = CellRegion::infer(x, d.cells().filter(|&c| !y.contains(c)))?;
    let i = injective_resolution(f)?;
    let a = i.sections(&w1)?;
    let b = i.sections(&w2)?;
    Ok(a.cone(&b, &restriction_map(&i, &w1, &w2))?.shift(-1))
}

/// `H^k_Z(X, F)` via the cone route.
pub fn local_cohomology(z: &CellRegion, f: &SheafComplex) -> Result<GradedDims> {
    Ok(local_cohomology_complex(z, f)?.cohomology())
}

/// `H^k_Z` as the cohomology of `Γ_Z(I)`, the summands supported in `Z`.
pub fn local_cohomology_by_support(z: &CellRegion, f: &SheafComplex) -> Result<GradedDims> {
    check_locally_closed(f, z)?;
    Ok(injective_resolution(f)?.supported_sections(z)?.cohomology())
}

/// `H^k_Z = Ext^k(ℚ_Z, F)` with `ℚ_Z` extended by zero.
pub fn local_cohomology_by_ext(z: &CellRegion, f: &SheafComplex) -> Result<GradedDims> {
    check_locally_closed(f, z)?;
    let q = extension_by_zero(f.base().clone(), z, 1)?.restrict(f.domain())?;
    hyperext(&q, f)
}

/// Long exact sequence `H_Y → H_Z → H_{Z∖Y} → H_Y[1]` for `Y` closed in `Z`.
#[derive(Clone, Debug, Serialize)]
pub struct TripleReport {
    pub h_y: GradedDims,
    pub h_z: GradedDims,
    pub h_quotient: GradedDims,
    /// Ranks of `H^k_Y → H^k_Z`, `H^k_Z → H^k_{Z∖Y}` and `H^k_{Z∖Y} → H^{k+1}_Y`.
    pub ranks: BTreeMap<i32, [usize; 3]>,
    pub exact: bool,
    pub euler_additive: bool,
}

pub fn triple_sequence(y: &CellRegion, z: &CellRegion, f: &SheafComplex) -> Result<TripleReport> {
    check_locally_closed(f, z)?;
    let x = f.base();
    if !y.is_subset(z) {
        return Err(Error::RegionKind { expected: "a subset of Z", detail: format!("{:?}", y.names(x)) });
    }
    let closed_in_z = y.cells().all(|c| x.faces(c).into_iter().all(|t| !z.contains(t) || y.contains(t)));
    if !closed_in_z {
        return Err(Error::RegionKind { expected: "closed in Z", detail: format!("{:?}", y.names(x)) });
    }
    let i = injective_resolution(f)?;
    let a = i.restrict_summands(|s| y.contains(s));
    let b = i.restrict_summands(|s| z.contains(s));
    let c = i.restrict_summands(|s| z.contains(s) && !y.contains(s));
    let (ha, hb, hc) = (a.cohomology(), b.cohomology(), c.cohomology());

    // Positions of the Y-summands and of the complementary ones inside Γ_Z.
    let split = |k: i32| -> (Vec<usize>, Vec<usize>) {
        let mut ys = Vec::new();
        let mut cs = Vec::new();
        let mut off = 0;
        for &(s, m) in i.summands(k).iter().filter(|(s, _)| z.contains(*s)) {
            let target = if y.contains(s) { &mut ys } else { &mut cs };
            target.extend(off..off + m);
            off += m;
        }
        (ys, cs)
    };
    let lo = i.min_degree() - 1;
    let hi = i.max_degree() + 1;
    let mut ranks = BTreeMap::new();
    for k in lo..=hi {
        let (ys, cs) = split(k);
        let nb = b.dim(k);
        let sel = |rows: &[usize], n: usize| -> Matrix {
            let mut m = Matrix::zeros(rows.len(), n);
            for (r, &j) in rows.iter().enumerate() {
                m.set(r, j, crate::linalg::int(1));
            }
            m
        };
        let incl = sel(&ys, nb).transpose();
        let proj = sel(&cs, nb);
        let (ys1, _) = split(k + 1);
        let delta = b.diff(k).select(&ys1, &cs);
        let r_alpha = a.induced_rank(&b, k, &incl);
        let r_beta = b.induced_rank(&c, k, &proj);
        let r_delta = c.induced_rank(&a.shift(1), k, &delta);
        ranks.insert(k, [r_alpha, r_beta, r_delta]);
    }
    let rank = |k: i32, j: usize| ranks.get(&k).map_or(0, |r: &[usize; 3]| r[j]);
    let exact = (lo..=hi).all(|k| {
        ha.get(k) == rank(k - 1, 2) + rank(k, 0) && hb.get(k) == rank(k, 0) + rank(k, 1) && hc.get(k) == rank(k, 1) + rank(k, 2)
    });
    let euler_additive = hb.euler() == ha.euler() + hc.euler();
    Ok(TripleReport { h_y: ha, h_z: hb, h_quotient: hc, ranks, exact, euler_additive })
}

/// Excision: `H_Z(X, F) = H_Z(V, F|V)` for an open `V ⊇ Z`.
#[derive(Clone, Debug, Serialize)]
pub struct ExcisionReport {
    pub on_x: GradedDims,
    pub on_v: GradedDims,
    pub holds: bool,
}

pub fn excision(z: &CellRegion, v: &CellRegion, f: &SheafComplex) -> Result<ExcisionReport> {
    let x = f.base();
    if !z.is_subset(v) || !v.is_open(x) {
        return Err(Error::RegionKind { expected: "an open region containing Z", detail: format!("{:?}", v.names(x)) });
    }
    let on_x = local_cohomology(z, f)?;
    let restricted = f.restrict(&v.intersect(x, f.domain())?)?;
    let on_v = local_cohomology(z, &restricted)?;
    Ok(ExcisionReport { holds: on_x == on_v, on_x, on_v })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::SimplicialComplex;
    use std::sync::Arc;

    fn subdivided() -> Arc<SimplicialComplex> {
        Arc::new(SimplicialComplex::from_int_coords(&[&[0], &[1], &[2]], &[&[0, 1], &[1, 2]]).unwrap())
    }

    #[test]
    fn endpoint_and_midpoint() {
        let x = Arc::new(crate::corpus::interval());
        let f = SheafComplex::constant(x.clone(), 1);
        let end = CellRegion::closed(&x, [0]).unwrap();
        assert!(local_cohomology(&end, &f).unwrap().is_zero());
        let y = subdivided();
        let g = SheafComplex::constant(y.clone(), 1);
        let mid = CellRegion::closed(&y, [1]).unwrap();
        assert_eq!(local_cohomology(&mid, &g).unwrap(), GradedDims::from_slice(1, &[1]));
    }

    #[test]
    fn three_routes_agree_on_the_equator() {
        let x = Arc::new(crate::corpus::octahedron());
        let f = SheafComplex::constant(x.clone(), 1);
        let eq: Vec<_> = (0..x.num_cells())
            .filter(|&c| x.cell(c).vertices().iter().all(|&v| x.coords(v)[2] == crate::linalg::int(0)))
            .collect();
        let z = CellRegion::closed(&x, eq).unwrap();
        let a = local_cohomology(&z, &f).unwrap();
        assert_eq!(a, local_cohomology_by_support(&z, &f).unwrap());
        assert_eq!(a, local_cohomology_by_ext(&z, &f).unwrap());
        // The complement is two open discs: H^1 = coker(ℚ → ℚ²), H^2 = H^2(S²).
        assert_eq!(a, GradedDims::from_slice(1, &[1, 1]));
    }

    #[test]
    fn triple_and_excision() {
        let x = subdivided();
        let f = SheafComplex::constant(x.clone(), 1);
        let z = CellRegion::whole(&x);
        let y = CellRegion::closed(&x, [1]).unwrap();
        let rep = triple_sequence(&y, &z, &f).unwrap();
        assert!(rep.exact && rep.euler_additive);
        let (star, _) = x.star_link(1);
        let ex = excision(&y, &star, &f).unwrap();
        assert!(ex.holds);
    }
}
