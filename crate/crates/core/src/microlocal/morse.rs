use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::Zero;

use super::chambers::{ConormalChamber, ConormalFan};
use crate::complex::{level_sides, subdivide_along_level, CellId, CellRegion, Refinement, SimplicialComplex};
use crate::error::{Error, Result};
use crate::functors::{derived_sections, pullback_refinement};
use crate::linalg::{dot, Rational};
use crate::sheaf::SheafComplex;

/// The open lower half-star `st(σ) ∩ {ξ < c}`, as a region of the closed
/// star refined along the level `ξ = c`.
#[derive(Clone, Debug)]
pub struct LowerStar {
    pub refinement: Refinement,
    pub region: CellRegion,
}

pub fn lower_star(x: &SimplicialComplex, sigma: CellId, xi: &[Rational]) -> Result<LowerStar> {
    let vs = x.cell(sigma).vertices();
    let c = dot(xi, x.coords(vs[0]));
    if vs.iter().any(|&v| dot(xi, x.coords(v)) != c) {
        return Err(Error::NotConormal(x.cell_name(sigma)));
    }
    let star = x.cofaces(sigma);
    let (sub, vmap) = x.subcomplex(&star);
    let cut = subdivide_along_level(&sub, xi, &c);
    let to_x = |s: CellId| -> CellId {
        let v: Vec<_> = sub.cell(s).vertices().iter().map(|&v| vmap[v]).collect();
        x.find_vertices(&v).expect("subcomplex cell")
    };
    let carrier: Vec<CellId> = cut.carrier.iter().map(|&s| to_x(s)).collect();
    let sides = level_sides(&cut.complex, xi, &c);
    let cells = (0..cut.complex.num_cells()).filter(|&t| sides[t] < 0 && x.is_face(sigma, carrier[t]));
    let region = CellRegion::open(&cut.complex, cells)?;
    Ok(LowerStar { refinement: Refinement { complex: cut.complex, carrier }, region })
}

impl LowerStar {
    /// `χ(RΓ(W, F)) = Σ_τ w_τ χ(F)_τ`: for an open `W` of a complex and a
    /// sheaf on the whole complex, a cell `t ∈ W` contributes
    /// `(−1)^{dim t} χ_c(t̄ ∩ W) χ(F)_t`. Weights are collected by carrier.
    pub fn weights(&self) -> Vec<(CellId, i64)> {
        let y = &self.refinement.complex;
        let mut acc: BTreeMap<CellId, i64> = BTreeMap::new();
        for t in self.region.cells() {
            let chi_c: i64 = y
                .faces(t)
                .into_iter()
                .filter(|&f| self.region.contains(f))
                .map(|f| if y.cell_dim(f).is_multiple_of(2) { 1 } else { -1 })
                .sum();
            let w = if y.cell_dim(t).is_multiple_of(2) { chi_c } else { -chi_c };
            *acc.entry(self.refinement.carrier[t]).or_default() += w;
        }
        acc.into_iter().filter(|&(_, w)| w != 0).collect()
    }
}

/// `m = χ(F)_σ − Σ_τ w_τ χ(F)_τ`.
pub(crate) fn apply_weights(chi: &[i64], sigma: CellId, weights: &[(CellId, i64)]) -> i64 {
    chi[sigma] - weights.iter().map(|&(t, w)| w * chi[t]).sum::<i64>()
}

fn on_whole(f: &SheafComplex) -> Result<SheafComplex> {
    if f.domain().is_whole() {
        return Ok(f.clone());
    }
    f.extend_by_zero(&CellRegion::whole(f.base()))
}

/// The local Morse index `χ(F)_σ − χ(RΓ(st(σ) ∩ {ξ < c}, F))`, with the
/// sections computed on the refined star. A sheaf on a smaller domain is
/// extended by zero first.
pub fn microlocal_multiplicity(f: &SheafComplex, chamber: &ConormalChamber) -> Result<i64> {
    let f = on_whole(f)?;
    let sigma = chamber.cell;
    let chi = f.stalk(sigma).euler();
    if chamber.is_zero() {
        return Ok(chi);
    }
    let ls = lower_star(f.base(), sigma, &chamber.witness)?;
    if ls.region.is_empty() {
        return Ok(chi);
    }
    let g = pullback_refinement(&ls.refinement, &f)?;
    Ok(chi - derived_sections(&ls.region, &g)?.euler())
}

/// The Morse index at an arbitrary conormal covector, generic for the link,
/// through the Euler-characteristic weights.
pub fn multiplicity_at_covector(f: &SheafComplex, sigma: CellId, xi: &[Rational]) -> Result<i64> {
    let f = on_whole(f)?;
    let x = f.base();
    ConormalFan::new(x, sigma).signs_of(x, xi)?;
    let chi = f.chi_local();
    if xi.iter().all(Zero::is_zero) {
        return Ok(chi.get(sigma));
    }
    let w = lower_star(x, sigma, xi)?.weights();
    Ok(apply_weights(chi.values(), sigma, &w))
}

pub(crate) fn probe_weights(x: &Arc<SimplicialComplex>, chamber: &ConormalChamber) -> Result<Vec<(CellId, i64)>> {
    if chamber.is_zero() {
        return Ok(Vec::new());
    }
    Ok(lower_star(x, chamber.cell, &chamber.witness)?.weights())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::functors::euler_sections;
    use crate::microlocal::chambers;
    use num_traits::Signed;

    #[test]
    fn weights_match_sections() {
        let it = corpus::item("hemispheres").unwrap();
        let x = it.complex.clone();
        for sigma in [0, 4, 5, 8] {
            for ch in chambers(&x, sigma) {
                let ls = lower_star(&x, sigma, &ch.witness).unwrap();
                for (name, f) in &it.sheaves {
                    let g = pullback_refinement(&ls.refinement, f).unwrap();
                    let direct = euler_sections(&ls.region, &g);
                    let chi = f.chi_local();
                    let weighted: i64 = ls.weights().iter().map(|&(t, w)| w * chi.get(t)).sum();
                    assert_eq!(direct, weighted, "{name} at {sigma}");
                }
            }
        }
    }

    #[test]
    fn example_one_table() {
        let it = corpus::item("interval").unwrap();
        let f = it.sheaf("pushforward_open").unwrap();
        let x = it.complex.clone();
        // Keyed by the sign of the covector as a multiple of dx.
        let table = |g: &SheafComplex, c: CellId| -> Vec<(bool, i64)> {
            let mut v: Vec<(bool, i64)> = chambers(&x, c)
                .iter()
                .map(|ch| (ch.witness[0].is_positive(), microlocal_multiplicity(g, ch).unwrap()))
                .collect();
            v.sort();
            v
        };
        assert_eq!(table(f, 0), vec![(false, 0), (true, 1)]);
        assert_eq!(table(f, 1), vec![(false, 1), (true, 0)]);
        assert_eq!(table(f, 2), vec![(false, 1)]);
        let j = it.sheaf("extension_by_zero").unwrap();
        assert_eq!(table(j, 0), vec![(false, -1), (true, 0)]);
    }
}
