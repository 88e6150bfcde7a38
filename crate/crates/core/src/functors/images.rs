use std::sync::Arc;

use super::injective::injective_resolution;
use super::map::SimplicialMap;
use crate::complex::{CellId, CellRegion, Refinement, SimplicialComplex};
use crate::error::{Error, Result};
use crate::sheaf::{same_base, CellularSheaf, SheafComplex};

/// `(φ^*G)(σ) = G(φ(σ))` along a cell map `φ` that is monotone on faces.
fn pullback_by_cells(
    g: &SheafComplex,
    base: Arc<SimplicialComplex>,
    domain: CellRegion,
    cell_map: impl Fn(CellId) -> CellId,
) -> SheafComplex {
    let n = base.num_cells();
    let image: Vec<CellId> = (0..n).map(&cell_map).collect();
    let terms = g
        .terms()
        .iter()
        .map(|t| {
            let stalks = (0..n).map(|c| if domain.contains(c) { t.stalk_dim(image[c]) } else { 0 }).collect();
            CellularSheaf::from_fn(base.clone(), domain.clone(), stalks, |a, b| t.restriction(image[a], image[b]))
        })
        .collect();
    let diffs = g
        .degrees()
        .take(g.terms().len().saturating_sub(1))
        .map(|k| {
            (0..n)
                .map(|c| {
                    if domain.contains(c) {
                        g.diff(k, image[c])
                    } else {
                        crate::linalg::Matrix::zeros(0, 0)
                    }
                })
                .collect()
        })
        .collect();
    SheafComplex::new_unchecked(g.min_degree(), terms, diffs)
}

/// Inverse image `f^*G`. Exact, so no resolution is involved.
pub fn pullback(f: &SimplicialMap, g: &SheafComplex) -> Result<SheafComplex> {
    if !same_base(f.target(), g.base()) {
        return Err(Error::BaseMismatch);
    }
    if !f.target_domain().is_subset(g.domain()) {
        return Err(Error::Invalid("the map leaves the domain of the sheaf".into()));
    }
    Ok(pullback_by_cells(g, f.source().clone(), f.source_domain().clone(), |c| f.apply(c)))
}

/// Pullback along a refinement: each new cell takes the data of its carrier.
pub fn pullback_refinement(r: &Refinement, g: &SheafComplex) -> Result<SheafComplex> {
    let base = Arc::new(r.complex.clone());
    let cells: Vec<CellId> = (0..base.num_cells()).filter(|&c| g.domain().contains(r.carrier[c])).collect();
    let domain = CellRegion::infer(&base, cells)?;
    Ok(pullback_by_cells(g, base, domain, |c| r.carrier[c]))
}

/// `Rf_*F`: resolve, then push each elementary injective `E_σ` to `E_{f(σ)}`.
pub fn pushforward_derived(f: &SimplicialMap, sheaf: &SheafComplex) -> Result<SheafComplex> {
    if !same_base(f.source(), sheaf.base()) || f.source_domain() != sheaf.domain() {
        return Err(Error::BaseMismatch);
    }
    let i = injective_resolution(sheaf)?;
    Ok(i.pushforward(f)?.to_sheaf_complex())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::functors::sections::global_sections;
    use crate::linalg::GradedDims;
    use crate::sheaf::extension_by_zero;

    fn circle() -> Arc<SimplicialComplex> {
        Arc::new(
            SimplicialComplex::from_int_coords(&[&[0, 0], &[1, 0], &[0, 1]], &[&[0, 1], &[1, 2], &[0, 2]]).unwrap(),
        )
    }

    #[test]
    fn open_edge_pushes_to_constant() {
        let x = Arc::new(crate::corpus::interval());
        let u = CellRegion::open(&x, [2]).unwrap();
        let j = SimplicialMap::inclusion(&x, &u).unwrap();
        let f = SheafComplex::constant(x.clone(), 1).restrict(&u).unwrap();
        let rj = pushforward_derived(&j, &f).unwrap();
        rj.validate().unwrap();
        assert!(rj.stalks_agree(&SheafComplex::constant(x.clone(), 1)));
    }

    #[test]
    fn circle_to_point() {
        let x = circle();
        let p = SimplicialMap::to_point(&x, &CellRegion::whole(&x));
        let r = pushforward_derived(&p, &SheafComplex::constant(x.clone(), 1)).unwrap();
        assert_eq!(r.stalk(0), GradedDims::from_slice(0, &[1, 1]));
    }

    #[test]
    fn pullback_identity_and_to_point() {
        let x = circle();
        let f = extension_by_zero(x.clone(), &CellRegion::closed(&x, [0]).unwrap(), 2).unwrap();
        let id = SimplicialMap::identity(&x);
        assert_eq!(pullback(&id, &f).unwrap(), f);
        let p = SimplicialMap::to_point(&x, &CellRegion::whole(&x));
        let pt = p.target().clone();
        let g = SheafComplex::constant(pt, 3);
        let pulled = pullback(&p, &g).unwrap();
        pulled.validate().unwrap();
        assert_eq!(pulled, SheafComplex::constant(x, 3));
    }

    #[test]
    fn refinement_preserves_cohomology() {
        let x = Arc::new(crate::corpus::octahedron());
        let r = crate::complex::barycentric_subdivision(&x);
        let f = SheafComplex::constant(x.clone(), 1);
        let g = pullback_refinement(&r, &f).unwrap();
        g.validate().unwrap();
        assert_eq!(global_sections(&g).unwrap(), global_sections(&f).unwrap());
    }
}
