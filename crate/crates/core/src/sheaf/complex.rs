use std::sync::Arc;

use super::cellular::{same_base, CellularSheaf};
use super::function::ConstructibleFunction;
use crate::complex::{CellId, CellRegion, SimplicialComplex};
use crate::error::{Error, Result};
use crate::linalg::{GradedDims, Matrix, SpaceComplex, Subquotient};

/// A bounded complex of cellular sheaves on a common domain: an object of
/// the derived category. `diffs[i][c]` maps `terms[i](c) → terms[i+1](c)`.
#[derive(Clone, Debug, PartialEq)]
pub struct SheafComplex {
    base: Arc<SimplicialComplex>,
    domain: CellRegion,
    min_degree: i32,
    terms: Vec<CellularSheaf>,
    diffs: Vec<Vec<Matrix>>,
}

fn sign(k: i32) -> i64 {
    if k.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

impl SheafComplex {
    pub fn new(min_degree: i32, terms: Vec<CellularSheaf>, diffs: Vec<Vec<Matrix>>) -> Result<Self> {
        let first = terms.first().ok_or_else(|| Error::Invalid("a sheaf complex needs at least one term".into()))?;
        let f = SheafComplex {
            base: first.base().clone(),
            domain: first.domain().clone(),
            min_degree,
            terms,
            diffs,
        };
        f.validate()?;
        Ok(f)
    }

    pub(crate) fn new_unchecked(min_degree: i32, terms: Vec<CellularSheaf>, diffs: Vec<Vec<Matrix>>) -> Self {
        let first = &terms[0];
        SheafComplex { base: first.base().clone(), domain: first.domain().clone(), min_degree, terms, diffs }
    }

    /// A single sheaf placed in degree `k`.
    pub fn concentrated(f: CellularSheaf, k: i32) -> Self {
        SheafComplex { base: f.base().clone(), domain: f.domain().clone(), min_degree: k, terms: vec![f], diffs: vec![] }
    }

    pub fn zero(base: Arc<SimplicialComplex>, domain: CellRegion) -> Self {
        Self::concentrated(CellularSheaf::zero(base, domain), 0)
    }

    pub fn constant(base: Arc<SimplicialComplex>, rank: usize) -> Self {
        let domain = CellRegion::whole(&base);
        Self::concentrated(CellularSheaf::constant(base, domain, rank), 0)
    }

    pub fn base(&self) -> &Arc<SimplicialComplex> {
        &self.base
    }

    pub fn domain(&self) -> &CellRegion {
        &self.domain
    }

    pub fn min_degree(&self) -> i32 {
        self.min_degree
    }

    pub fn max_degree(&self) -> i32 {
        self.min_degree + self.terms.len() as i32 - 1
    }

    pub fn degrees(&self) -> std::ops::RangeInclusive<i32> {
        self.min_degree..=self.max_degree()
    }

    pub fn terms(&self) -> &[CellularSheaf] {
        &self.terms
    }

    /// Term in degree `k`, if inside the stored range.
    pub fn term(&self, k: i32) -> Option<&CellularSheaf> {
        let i = k - self.min_degree;
        if i < 0 {
            None
        } else {
            self.terms.get(i as usize)
        }
    }

    pub fn stalk_dim(&self, k: i32, c: CellId) -> usize {
        self.term(k).map_or(0, |t| t.stalk_dim(c))
    }

    /// Differential `F^k(c) → F^{k+1}(c)`.
    pub fn diff(&self, k: i32, c: CellId) -> Matrix {
        let i = k - self.min_degree;
        if i >= 0 && (i as usize) < self.diffs.len() {
            self.diffs[i as usize][c].clone()
        } else {
            Matrix::zeros(self.stalk_dim(k + 1, c), self.stalk_dim(k, c))
        }
    }

    pub(crate) fn diffs(&self) -> &[Vec<Matrix>] {
        &self.diffs
    }

    pub fn validate(&self) -> Result<()> {
        let x = &self.base;
        if self.diffs.len() + 1 != self.terms.len() {
            return Err(Error::Shape(format!("{} differentials for {} terms", self.diffs.len(), self.terms.len())));
        }
        for t in &self.terms {
            if !same_base(t.base(), &self.base) || t.domain() != &self.domain {
                return Err(Error::BaseMismatch);
            }
            t.validate()?;
        }
        for (i, d) in self.diffs.iter().enumerate() {
            let k = self.min_degree + i as i32;
            if d.len() != x.num_cells() {
                return Err(Error::Shape(format!("differential in degree {k} does not cover every cell")));
            }
            let (a, b) = (&self.terms[i], &self.terms[i + 1]);
            for c in 0..x.num_cells() {
                if d[c].shape() != (b.stalk_dim(c), a.stalk_dim(c)) {
                    return Err(Error::Shape(format!("differential in degree {k} at {} has the wrong shape", x.cell_name(c))));
                }
            }
            for (t, s) in a.codim_one_pairs() {
                if &d[s] * &a.restriction_one(t, s) != &b.restriction_one(t, s) * &d[t] {
                    return Err(Error::NonCommuting(format!(
                        "differential in degree {k} and restriction {}<{}",
                        x.cell_name(t),
                        x.cell_name(s)
                    )));
                }
            }
            if i + 1 < self.diffs.len() {
                for c in 0..x.num_cells() {
                    if !(&self.diffs[i + 1][c] * &d[c]).is_zero() {
                        return Err(Error::NotAComplex(format!("d∘d ≠ 0 at degree {k}, cell {}", x.cell_name(c))));
                    }
                }
            }
        }
        Ok(())
    }

    /// The complex of stalks at an open cell.
    pub fn stalk_complex(&self, c: CellId) -> SpaceComplex {
        let dims: Vec<usize> = self.terms.iter().map(|t| t.stalk_dim(c)).collect();
        let diffs = self.diffs.iter().map(|d| d[c].clone()).collect();
        SpaceComplex::new(self.min_degree, dims, diffs).expect("validated complex")
    }

    /// Graded dimensions of the cohomology of the stalk at `c`.
    pub fn stalk(&self, c: CellId) -> GradedDims {
        self.stalk_complex(c).cohomology()
    }

    pub fn term_dims(&self, c: CellId) -> GradedDims {
        let mut g = GradedDims::zero();
        for k in self.degrees() {
            g.set(k, self.stalk_dim(k, c));
        }
        g
    }

    /// Local Euler characteristic, computed from cohomology and from term
    /// dimensions; the two must agree.
    pub fn chi_local(&self) -> ConstructibleFunction {
        let values = (0..self.base.num_cells())
            .map(|c| {
                let from_terms = self.term_dims(c).euler();
                let from_cohomology = self.stalk(c).euler();
                assert_eq!(from_terms, from_cohomology, "local Euler characteristic routes disagree");
                from_terms
            })
            .collect();
        ConstructibleFunction::new(self.base.clone(), values)
    }

    /// Local Euler characteristic from term dimensions only.
    pub fn chi_terms(&self) -> ConstructibleFunction {
        let values = (0..self.base.num_cells()).map(|c| self.term_dims(c).euler()).collect();
        ConstructibleFunction::new(self.base.clone(), values)
    }

    pub fn is_acyclic(&self) -> bool {
        (0..self.base.num_cells()).all(|c| self.stalk(c).is_zero())
    }

    /// `F[k]`: degree `n` holds `F^{n+k}`, differentials scaled by `(-1)^k`.
    pub fn shift(&self, k: i32) -> SheafComplex {
        let s = sign(k);
        SheafComplex {
            base: self.base.clone(),
            domain: self.domain.clone(),
            min_degree: self.min_degree - k,
            terms: self.terms.clone(),
            diffs: self.diffs.iter().map(|d| d.iter().map(|m| m.scale_int(s)).collect()).collect(),
        }
    }

    /// Cohomology sheaves `H^k(F)` with induced restrictions.
    pub fn cohomology_sheaves(&self) -> Vec<(i32, CellularSheaf)> {
        let x = &self.base;
        let n = x.num_cells();
        let mut out = Vec::new();
        for k in self.degrees() {
            let quotients: Vec<Subquotient> = (0..n)
                .map(|c| {
                    let ker = self.diff(k, c).kernel();
                    let im = self.diff(k - 1, c);
                    Subquotient::new(&ker, &im)
                })
                .collect();
            let term = self.term(k).expect("degree in range");
            let stalks = quotients.iter().map(Subquotient::dim).collect();
            let h = CellularSheaf::from_fn(x.clone(), self.domain.clone(), stalks, |t, s| {
                &(&quotients[s].proj * &term.restriction_one(t, s)) * &quotients[t].reps
            });
            out.push((k, h));
        }
        out
    }

    /// Restriction to a locally closed subregion of the domain.
    pub fn restrict(&self, region: &CellRegion) -> Result<SheafComplex> {
        let terms = self.terms.iter().map(|t| t.restrict(region)).collect::<Result<Vec<_>>>()?;
        let diffs = self
            .diffs
            .iter()
            .enumerate()
            .map(|(i, d)| {
                d.iter()
                    .enumerate()
                    .map(|(c, m)| {
                        if region.contains(c) {
                            m.clone()
                        } else {
                            Matrix::zeros(terms[i + 1].stalk_dim(c), terms[i].stalk_dim(c))
                        }
                    })
                    .collect()
            })
            .collect();
        Ok(SheafComplex::new_unchecked(self.min_degree, terms, diffs))
    }

    /// Extension by zero to a larger domain (`j_!` for an open domain, `i_*`
    /// for a closed one).
    pub fn extend_by_zero(&self, domain: &CellRegion) -> Result<SheafComplex> {
        let terms = self.terms.iter().map(|t| t.extend_by_zero(domain)).collect::<Result<Vec<_>>>()?;
        Ok(SheafComplex::new_unchecked(self.min_degree, terms, self.diffs.clone()))
    }

    /// Drops zero terms at both ends.
    pub fn trimmed(&self) -> SheafComplex {
        let nonzero: Vec<usize> = (0..self.terms.len()).filter(|&i| !self.terms[i].is_zero()).collect();
        let (Some(&lo), Some(&hi)) = (nonzero.first(), nonzero.last()) else {
            return SheafComplex::zero(self.base.clone(), self.domain.clone());
        };
        SheafComplex {
            base: self.base.clone(),
            domain: self.domain.clone(),
            min_degree: self.min_degree + lo as i32,
            terms: self.terms[lo..=hi].to_vec(),
            diffs: self.diffs[lo..hi].to_vec(),
        }
    }

    /// Re-indexes so that the stored range covers `lo..=hi` (padding with
    /// zero terms).
    pub fn padded(&self, lo: i32, hi: i32) -> SheafComplex {
        let lo = lo.min(self.min_degree);
        let hi = hi.max(self.max_degree());
        let n = self.base.num_cells();
        let zero = CellularSheaf::zero(self.base.clone(), self.domain.clone());
        let terms: Vec<CellularSheaf> = (lo..=hi).map(|k| self.term(k).cloned().unwrap_or_else(|| zero.clone())).collect();
        let diffs = (lo..hi)
            .map(|k| {
                (0..n)
                    .map(|c| {
                        let i = k - self.min_degree;
                        if i >= 0 && (i as usize) < self.diffs.len() {
                            self.diffs[i as usize][c].clone()
                        } else {
                            Matrix::zeros(self.stalk_dim(k + 1, c), self.stalk_dim(k, c))
                        }
                    })
                    .collect()
            })
            .collect();
        SheafComplex { base: self.base.clone(), domain: self.domain.clone(), min_degree: lo, terms, diffs }
    }

    /// Per-cell stalk cohomology table.
    pub fn stalk_table(&self) -> Vec<GradedDims> {
        (0..self.base.num_cells()).map(|c| self.stalk(c)).collect()
    }

    /// Same stalkwise cohomology dimensions on the same domain.
    pub fn stalks_agree(&self, other: &SheafComplex) -> bool {
        same_base(&self.base, &other.base)
            && (0..self.base.num_cells()).all(|c| self.stalk(c) == other.stalk(c))
    }

    pub(crate) fn with_parts(
        base: Arc<SimplicialComplex>,
        domain: CellRegion,
        min_degree: i32,
        terms: Vec<CellularSheaf>,
        diffs: Vec<Vec<Matrix>>,
    ) -> Self {
        if terms.is_empty() {
            return SheafComplex::zero(base, domain);
        }
        SheafComplex { base, domain, min_degree, terms, diffs }
    }
}
