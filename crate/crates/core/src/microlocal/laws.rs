use std::sync::Arc;

use rand::Rng;
use serde::Serialize;

use super::cycle::{ConormalCycle, ConormalGeometry};
use super::morse::multiplicity_at_covector;
use crate::complex::{staircase_product, CellId, CellRegion, SimplicialComplex, VertexId};
use crate::error::{Error, Result};
use crate::euler::euler_global;
use crate::functors::{pullback, SimplicialMap};
use crate::linalg::{dot, int, Rational};
use crate::sheaf::{same_base, tensor, SheafComplex, SheafMorphism};

/// Pushes a cycle forward along a closed embedding sharing ambient
/// coordinates: a chamber of `Y` over `i(σ)` takes the value of the
/// `X`-chamber of `σ` containing its witness.
pub fn cc_pushforward_closed(
    c: &ConormalCycle,
    i: &SimplicialMap,
    target: &Arc<ConormalGeometry>,
) -> Result<ConormalCycle> {
    if !same_base(i.source(), c.base()) {
        return Err(Error::BaseMismatch);
    }
    if !i.source_domain().is_whole() || !i.is_isometric_embedding() {
        return Err(Error::Invalid("not a closed subcomplex embedding".into()));
    }
    let y = target.base();
    if !same_base(i.target(), y) {
        return Err(Error::BaseMismatch);
    }
    let mut preimage: Vec<Option<CellId>> = vec![None; y.num_cells()];
    for s in 0..c.base().num_cells() {
        preimage[i.apply(s)] = Some(s);
    }
    let mut err = None;
    let out = ConormalCycle::from_fn(target, |ch| match preimage[ch.cell] {
        None => 0,
        Some(s) => c.at_covector(s, &ch.witness).unwrap_or_else(|e| {
            err.get_or_insert(e);
            0
        }),
    });
    match err {
        Some(e) => Err(e),
        None => Ok(out),
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ProductReport {
    pub pairs_checked: usize,
    /// `(v, w, product multiplicity, m_F · m_G)` for every disagreement.
    pub failures: Vec<(VertexId, VertexId, i64, i64)>,
    pub euler: [i64; 3],
    pub holds: bool,
}

fn generic_at<R: Rng>(x: &SimplicialComplex, v: VertexId, rng: &mut R) -> Vec<Rational> {
    let link = x.link_vertices(x.vertex_cell(v));
    loop {
        let xi: Vec<Rational> = (0..x.ambient_dim()).map(|_| int(rng.gen_range(-9..=9))).collect();
        let p = dot(&xi, x.coords(v));
        if link.iter().all(|&w| dot(&xi, x.coords(w)) != p) {
            return xi;
        }
    }
}

/// `F ⊠ G` on the staircase product, with the product map data.
pub fn external_product(f: &SheafComplex, g: &SheafComplex) -> Result<(SheafComplex, Vec<VertexId>, Vec<VertexId>)> {
    let (x, z) = (f.base(), g.base());
    let prod = staircase_product(x, z);
    let p = Arc::new(prod.complex);
    let whole = CellRegion::whole(&p);
    let left = SimplicialMap::new(p.clone(), whole.clone(), x.clone(), f.domain().clone(), prod.to_left.clone())?;
    let right = SimplicialMap::new(p.clone(), whole, z.clone(), g.domain().clone(), prod.to_right.clone())?;
    Ok((tensor(&pullback(&left, f)?, &pullback(&right, g)?)?, prod.to_left, prod.to_right))
}

/// `m_{F⊠G}((v,w), ξ⊕η) = m_F(v, ξ) m_G(w, η)` at every vertex pair for
/// `samples` random covectors each, and `χ(F⊠G) = χ(F) χ(G)`.
pub fn external_multiplicativity<R: Rng>(
    f: &SheafComplex,
    g: &SheafComplex,
    samples: usize,
    rng: &mut R,
) -> Result<ProductReport> {
    let (x, z) = (f.base().clone(), g.base().clone());
    let (fg, _, _) = external_product(f, g)?;
    let p = fg.base().clone();
    let mut failures = Vec::new();
    let mut pairs_checked = 0;
    for v in 0..x.num_vertices() {
        for w in 0..z.num_vertices() {
            let pv = v * z.num_vertices() + w;
            let plink = p.link_vertices(p.vertex_cell(pv));
            for _ in 0..samples {
                let (xi, eta, both) = loop {
                    let xi = generic_at(&x, v, rng);
                    let eta = generic_at(&z, w, rng);
                    let both: Vec<Rational> = xi.iter().chain(&eta).cloned().collect();
                    let at = dot(&both, p.coords(pv));
                    if plink.iter().all(|&u| dot(&both, p.coords(u)) != at) {
                        break (xi, eta, both);
                    }
                };
                let lhs = multiplicity_at_covector(&fg, p.vertex_cell(pv), &both)?;
                let rhs = multiplicity_at_covector(f, x.vertex_cell(v), &xi)? * multiplicity_at_covector(g, z.vertex_cell(w), &eta)?;
                pairs_checked += 1;
                if lhs != rhs {
                    failures.push((v, w, lhs, rhs));
                }
            }
        }
    }
    let euler = [euler_global(&fg)?, euler_global(f)?, euler_global(g)?];
    let holds = failures.is_empty() && euler[0] == euler[1] * euler[2];
    Ok(ProductReport { pairs_checked, failures, euler, holds })
}

#[derive(Clone, Debug, Serialize)]
pub struct AdditivityReport {
    /// `CC(cone) = CC(target) − CC(source)`.
    pub cone: bool,
    /// `CC(cone) = Σ_k (−1)^k CC(H^k(cone))`.
    pub cohomology: bool,
    /// Local Euler characteristics add up.
    pub chi_local: bool,
    /// `χ(cone) = χ(target) − χ(source)`.
    pub euler: bool,
    /// Chambers (cell name and signs) where some identity fails.
    pub violations: Vec<String>,
}

impl AdditivityReport {
    pub fn holds(&self) -> bool {
        self.cone && self.cohomology && self.chi_local && self.euler
    }
}

pub fn cc_additivity_check(phi: &SheafMorphism, geometry: &Arc<ConormalGeometry>) -> Result<AdditivityReport> {
    let (a, b) = (phi.source(), phi.target());
    let cone = phi.mapping_cone();
    let cc = |f: &SheafComplex| geometry.characteristic_cycle(f);
    let cc_cone = cc(&cone)?;
    let difference = cc(b)?.sub(&cc(a)?)?;
    let mut expansion = ConormalCycle::zero(geometry);
    for (k, h) in cone.cohomology_sheaves() {
        let term = cc(&SheafComplex::concentrated(h, 0))?;
        expansion = expansion.add(&term.scale(if k.rem_euclid(2) == 0 { 1 } else { -1 }))?;
    }
    let x = geometry.base();
    let mut violations = Vec::new();
    for ((ch, m), (d, e)) in cc_cone.entries().zip(difference.values().iter().zip(expansion.values())) {
        if m != *d || m != *e {
            violations.push(format!("{} {:?}: cone {m}, difference {d}, cohomology {e}", x.cell_name(ch.cell), ch.signs));
        }
    }
    let chi_local = cone.chi_local() == &b.chi_local() - &a.chi_local();
    let euler = euler_global(&cone)? == euler_global(b)? - euler_global(a)?;
    Ok(AdditivityReport { cone: cc_cone == difference, cohomology: cc_cone == expansion, chi_local, euler, violations })
}
