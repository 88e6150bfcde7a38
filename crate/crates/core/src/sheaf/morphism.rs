use std::collections::BTreeMap;

use super::cellular::{same_base, CellularSheaf};
use super::complex::SheafComplex;
use crate::error::{Error, Result};
use crate::linalg::Matrix;

/// A chain map of sheaf complexes, given per degree and per cell. Degrees
/// without an entry are zero.
#[derive(Clone, Debug)]
pub struct SheafMorphism {
    source: SheafComplex,
    target: SheafComplex,
    components: BTreeMap<i32, Vec<Matrix>>,
}

impl SheafMorphism {
    pub fn new(source: SheafComplex, target: SheafComplex, components: BTreeMap<i32, Vec<Matrix>>) -> Result<Self> {
        let phi = SheafMorphism { source, target, components };
        phi.validate()?;
        Ok(phi)
    }

    pub(crate) fn new_unchecked(
        source: SheafComplex,
        target: SheafComplex,
        components: BTreeMap<i32, Vec<Matrix>>,
    ) -> Self {
        SheafMorphism { source, target, components }
    }

    pub fn identity(f: &SheafComplex) -> Self {
        let n = f.base().num_cells();
        let components =
            f.degrees().map(|k| (k, (0..n).map(|c| Matrix::identity(f.stalk_dim(k, c))).collect())).collect();
        SheafMorphism { source: f.clone(), target: f.clone(), components }
    }

    pub fn zero(source: &SheafComplex, target: &SheafComplex) -> Self {
        SheafMorphism { source: source.clone(), target: target.clone(), components: BTreeMap::new() }
    }

    pub fn source(&self) -> &SheafComplex {
        &self.source
    }

    pub fn target(&self) -> &SheafComplex {
        &self.target
    }

    pub fn component(&self, k: i32, c: usize) -> Matrix {
        match self.components.get(&k) {
            Some(v) => v[c].clone(),
            None => Matrix::zeros(self.target.stalk_dim(k, c), self.source.stalk_dim(k, c)),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let (a, b) = (&self.source, &self.target);
        if !same_base(a.base(), b.base()) || a.domain() != b.domain() {
            return Err(Error::BaseMismatch);
        }
        let x = a.base();
        for (&k, comps) in &self.components {
            if comps.len() != x.num_cells() {
                return Err(Error::InvalidMorphism(format!("degree {k} does not cover every cell")));
            }
            for (c, m) in comps.iter().enumerate() {
                if m.shape() != (b.stalk_dim(k, c), a.stalk_dim(k, c)) {
                    return Err(Error::InvalidMorphism(format!("degree {k} at {} has the wrong shape", x.cell_name(c))));
                }
            }
            if let (Some(ta), Some(tb)) = (a.term(k), b.term(k)) {
                for (t, s) in ta.codim_one_pairs() {
                    if &comps[s] * &ta.restriction_one(t, s) != &tb.restriction_one(t, s) * &comps[t] {
                        return Err(Error::InvalidMorphism(format!(
                            "not natural in degree {k} along {}<{}",
                            x.cell_name(t),
                            x.cell_name(s)
                        )));
                    }
                }
            }
        }
        let lo = a.min_degree().min(b.min_degree()) - 1;
        let hi = a.max_degree().max(b.max_degree());
        for k in lo..=hi {
            for c in a.domain().cells() {
                let lhs = &b.diff(k, c) * &self.component(k, c);
                let rhs = &self.component(k + 1, c) * &a.diff(k, c);
                if lhs != rhs {
                    return Err(Error::InvalidMorphism(format!(
                        "does not commute with differentials in degree {k} at {}",
                        x.cell_name(c)
                    )));
                }
            }
        }
        Ok(())
    }

    /// Mapping cone: degree `k` is `A^{k+1} ⊕ B^k` with differential
    /// `[[-d_A, 0], [u, d_B]]`.
    pub fn mapping_cone(&self) -> SheafComplex {
        let (a, b) = (&self.source, &self.target);
        let x = a.base().clone();
        let n = x.num_cells();
        let lo = (a.min_degree() - 1).min(b.min_degree());
        let hi = (a.max_degree() - 1).max(b.max_degree());
        let zero = CellularSheaf::zero(x.clone(), a.domain().clone());
        let mut terms = Vec::new();
        for k in lo..=hi {
            let ta = a.term(k + 1).unwrap_or(&zero);
            let tb = b.term(k).unwrap_or(&zero);
            let stalks = (0..n).map(|c| ta.stalk_dim(c) + tb.stalk_dim(c)).collect();
            terms.push(CellularSheaf::from_fn(x.clone(), a.domain().clone(), stalks, |t, s| {
                Matrix::block_diag(&[ta.restriction_one(t, s), tb.restriction_one(t, s)])
            }));
        }
        let mut diffs = Vec::new();
        for k in lo..hi {
            let d = (0..n)
                .map(|c| {
                    let (a1, b0) = (a.stalk_dim(k + 1, c), b.stalk_dim(k, c));
                    let (a2, b1) = (a.stalk_dim(k + 2, c), b.stalk_dim(k + 1, c));
                    let mut m = Matrix::zeros(a2 + b1, a1 + b0);
                    m.set_block(0, 0, &-&a.diff(k + 1, c));
                    m.set_block(a2, 0, &self.component(k + 1, c));
                    m.set_block(a2, a1, &b.diff(k, c));
                    m
                })
                .collect();
            diffs.push(d);
        }
        SheafComplex::new_unchecked(lo, terms, diffs)
    }

    /// The triangle `B → C(u) → A[1]` as its two non-trivial morphisms.
    pub fn triangle(&self) -> (SheafMorphism, SheafMorphism) {
        let (a, b) = (&self.source, &self.target);
        let cone = self.mapping_cone();
        let shifted = a.shift(1);
        let n = a.base().num_cells();
        let mut inc = BTreeMap::new();
        let mut proj = BTreeMap::new();
        for k in cone.degrees() {
            let mut ik = Vec::with_capacity(n);
            let mut pk = Vec::with_capacity(n);
            for c in 0..n {
                let (a1, b0) = (a.stalk_dim(k + 1, c), b.stalk_dim(k, c));
                let mut i = Matrix::zeros(a1 + b0, b0);
                i.set_block(a1, 0, &Matrix::identity(b0));
                let mut p = Matrix::zeros(a1, a1 + b0);
                p.set_block(0, 0, &Matrix::identity(a1));
                ik.push(i);
                pk.push(p);
            }
            inc.insert(k, ik);
            proj.insert(k, pk);
        }
        (SheafMorphism::new_unchecked(b.clone(), cone.clone(), inc), SheafMorphism::new_unchecked(cone, shifted, proj))
    }
}
