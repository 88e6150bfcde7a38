use std::collections::BTreeMap;
use std::sync::Arc;

use super::cellular::{same_base, CellularSheaf};
use super::complex::SheafComplex;
use crate::complex::{CellId, CellRegion, SimplicialComplex};
use crate::error::{Error, Result};
use crate::linalg::Matrix;

/// Rank-`r` constant sheaf on a locally closed region, extended by zero to
/// the whole complex, in degree 0.
pub fn extension_by_zero(base: Arc<SimplicialComplex>, z: &CellRegion, r: usize) -> Result<SheafComplex> {
    if !z.is_locally_closed(&base) {
        return Err(Error::RegionKind { expected: "open or locally closed", detail: format!("{z:?}") });
    }
    let on_z = CellularSheaf::constant(base.clone(), z.clone(), r);
    let whole = CellRegion::whole(&base);
    Ok(SheafComplex::concentrated(on_z.extend_by_zero(&whole)?, 0))
}

/// Local system from transports along edges. `transport[e]` for an edge
/// `e = {a < b}` is the parallel transport from `a` to `b`; missing edges
/// carry the identity. Higher cells are identified with their smallest
/// vertex, so every triangle must have trivial holonomy.
pub fn local_system(
    base: Arc<SimplicialComplex>,
    rank: usize,
    transport: &BTreeMap<CellId, Matrix>,
) -> Result<CellularSheaf> {
    let x = base.clone();
    for (&e, m) in transport {
        if x.cell_dim(e) != 1 {
            return Err(Error::Invalid(format!("{} is not an edge", x.cell_name(e))));
        }
        if m.shape() != (rank, rank) || m.rank() != rank {
            return Err(Error::NotInvertible(format!("transport along {}", x.cell_name(e))));
        }
    }
    let forward = |a: usize, b: usize| -> Matrix {
        // Transport a → b for an edge with a < b.
        let e = x.find_vertices(&[a, b]).expect("edge of the complex");
        transport.get(&e).cloned().unwrap_or_else(|| Matrix::identity(rank))
    };
    let between = |a: usize, b: usize| -> Matrix {
        use std::cmp::Ordering::*;
        match a.cmp(&b) {
            Equal => Matrix::identity(rank),
            Less => forward(a, b),
            Greater => forward(b, a).inverse().expect("checked invertible"),
        }
    };
    for t in x.cells_of_dim(2) {
        let v = x.cell(t).vertices();
        if &forward(v[1], v[2]) * &forward(v[0], v[1]) != forward(v[0], v[2]) {
            return Err(Error::NonCommuting(format!("holonomy around {} is not trivial", x.cell_name(t))));
        }
    }
    let domain = CellRegion::whole(&x);
    let stalks = vec![rank; x.num_cells()];
    let f = CellularSheaf::from_fn(base.clone(), domain, stalks, |t, s| {
        between(x.cell(t).vertices()[0], x.cell(s).vertices()[0])
    });
    f.validate()?;
    Ok(f)
}

/// Cellwise tensor product, totalized with differential
/// `d_F ⊗ 1 + (-1)^p 1 ⊗ d_G`.
pub fn tensor(f: &SheafComplex, g: &SheafComplex) -> Result<SheafComplex> {
    if !same_base(f.base(), g.base()) || f.domain() != g.domain() {
        return Err(Error::BaseMismatch);
    }
    let x = f.base().clone();
    let n = x.num_cells();
    let lo = f.min_degree() + g.min_degree();
    let hi = f.max_degree() + g.max_degree();
    // Summand layout of total degree k at cell c: pairs (p, q) ordered by p.
    let layout = |k: i32, c: CellId| -> Vec<(i32, usize, usize)> {
        let mut off = 0;
        let mut v = Vec::new();
        for p in f.degrees() {
            let q = k - p;
            let d = f.stalk_dim(p, c) * g.stalk_dim(q, c);
            v.push((p, off, d));
            off += d;
        }
        v
    };
    let total = |k: i32, c: CellId| -> usize { layout(k, c).iter().map(|t| t.2).sum() };
    let mut terms = Vec::new();
    for k in lo..=hi {
        let stalks = (0..n).map(|c| total(k, c)).collect();
        terms.push(CellularSheaf::from_fn(x.clone(), f.domain().clone(), stalks, |t, s| {
            let mut m = Matrix::zeros(total(k, s), total(k, t));
            for ((p, ro, rd), (_, co, cd)) in layout(k, s).into_iter().zip(layout(k, t)) {
                if rd == 0 || cd == 0 {
                    continue;
                }
                let q = k - p;
                let rf = f.term(p).unwrap().restriction_one(t, s);
                let rg = g.term(q).unwrap().restriction_one(t, s);
                m.set_block(ro, co, &rf.kron(&rg));
            }
            m
        }));
    }
    let mut diffs = Vec::new();
    for k in lo..hi {
        let d = (0..n)
            .map(|c| {
                let src = layout(k, c);
                let dst = layout(k + 1, c);
                let mut m = Matrix::zeros(total(k + 1, c), total(k, c));
                for &(p, co, cd) in &src {
                    if cd == 0 {
                        continue;
                    }
                    let q = k - p;
                    // d_F ⊗ 1 lands in (p+1, q).
                    if let Some(&(_, ro, rd)) = dst.iter().find(|t| t.0 == p + 1) {
                        if rd > 0 {
                            let block = f.diff(p, c).kron(&Matrix::identity(g.stalk_dim(q, c)));
                            m.set_block(ro, co, &block);
                        }
                    }
                    // (-1)^p 1 ⊗ d_G lands in (p, q+1).
                    if let Some(&(_, ro, rd)) = dst.iter().find(|t| t.0 == p) {
                        if rd > 0 {
                            let s = if p.rem_euclid(2) == 0 { 1 } else { -1 };
                            let block = Matrix::identity(f.stalk_dim(p, c)).kron(&g.diff(q, c)).scale_int(s);
                            m.set_block(ro, co, &block);
                        }
                    }
                }
                m
            })
            .collect();
        diffs.push(d);
    }
    Ok(SheafComplex::new_unchecked(lo, terms, diffs))
}

/// Direct sum of sheaves on a common domain, summands in the given order.
pub fn direct_sum(parts: &[CellularSheaf]) -> Result<CellularSheaf> {
    let first = parts.first().ok_or_else(|| Error::Invalid("empty direct sum".into()))?;
    if parts.iter().any(|p| !same_base(p.base(), first.base()) || p.domain() != first.domain()) {
        return Err(Error::BaseMismatch);
    }
    let n = first.base().num_cells();
    let stalks = (0..n).map(|c| parts.iter().map(|p| p.stalk_dim(c)).sum()).collect();
    Ok(CellularSheaf::from_fn(first.base().clone(), first.domain().clone(), stalks, |t, s| {
        Matrix::block_diag(&parts.iter().map(|p| p.restriction_one(t, s)).collect::<Vec<_>>())
    }))
}
