use std::collections::BTreeMap;
use std::sync::Arc;

use crate::complex::{CellId, CellRegion, SimplicialComplex};
use crate::error::{Error, Result};
use crate::linalg::Matrix;

pub(crate) fn same_base(a: &Arc<SimplicialComplex>, b: &Arc<SimplicialComplex>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

/// A cellular sheaf on a locally closed region of a complex: a stalk per
/// open cell and a restriction `F(τ) → F(σ)` per codimension-one pair
/// `τ ⊂ σ`. Missing restriction entries are zero maps.
#[derive(Clone, Debug)]
pub struct CellularSheaf {
    base: Arc<SimplicialComplex>,
    domain: CellRegion,
    stalks: Vec<usize>,
    restrictions: BTreeMap<(CellId, CellId), Matrix>,
}

impl PartialEq for CellularSheaf {
    fn eq(&self, other: &Self) -> bool {
        same_base(&self.base, &other.base)
            && self.domain == other.domain
            && self.stalks == other.stalks
            && self.codim_one_pairs().all(|(t, s)| self.restriction_one(t, s) == other.restriction_one(t, s))
    }
}

impl CellularSheaf {
    /// Validating constructor.
    pub fn new(
        base: Arc<SimplicialComplex>,
        domain: CellRegion,
        stalks: Vec<usize>,
        restrictions: BTreeMap<(CellId, CellId), Matrix>,
    ) -> Result<Self> {
        let f = Self::new_unchecked(base, domain, stalks, restrictions);
        f.validate()?;
        Ok(f)
    }

    pub(crate) fn new_unchecked(
        base: Arc<SimplicialComplex>,
        domain: CellRegion,
        mut stalks: Vec<usize>,
        restrictions: BTreeMap<(CellId, CellId), Matrix>,
    ) -> Self {
        for (c, s) in stalks.iter_mut().enumerate() {
            if !domain.contains(c) {
                *s = 0;
            }
        }
        CellularSheaf { base, domain, stalks, restrictions }
    }

    /// The zero sheaf on `domain`.
    pub fn zero(base: Arc<SimplicialComplex>, domain: CellRegion) -> Self {
        let n = base.num_cells();
        CellularSheaf { base, domain, stalks: vec![0; n], restrictions: BTreeMap::new() }
    }

    /// Rank-`r` constant sheaf on `domain` (identity restrictions).
    pub fn constant(base: Arc<SimplicialComplex>, domain: CellRegion, r: usize) -> Self {
        let stalks = (0..base.num_cells()).map(|c| if domain.contains(c) { r } else { 0 }).collect();
        let mut restrictions = BTreeMap::new();
        for s in domain.cells() {
            for &(t, _) in base.facets(s) {
                if domain.contains(t) {
                    restrictions.insert((t, s), Matrix::identity(r));
                }
            }
        }
        CellularSheaf { base, domain, stalks, restrictions }
    }

    pub fn base(&self) -> &Arc<SimplicialComplex> {
        &self.base
    }

    pub fn domain(&self) -> &CellRegion {
        &self.domain
    }

    pub fn stalk_dim(&self, c: CellId) -> usize {
        self.stalks[c]
    }

    pub fn stalk_dims(&self) -> &[usize] {
        &self.stalks
    }

    pub fn is_zero(&self) -> bool {
        self.stalks.iter().all(|&d| d == 0)
    }

    pub(crate) fn codim_one_pairs(&self) -> impl Iterator<Item = (CellId, CellId)> + '_ {
        self.domain.cells().flat_map(move |s| {
            self.base.facets(s).iter().filter(|(t, _)| self.domain.contains(*t)).map(move |&(t, _)| (t, s))
        })
    }

    /// Restriction along a codimension-one pair `τ ⊂ σ`.
    pub fn restriction_one(&self, t: CellId, s: CellId) -> Matrix {
        self.restrictions
            .get(&(t, s))
            .cloned()
            .unwrap_or_else(|| Matrix::zeros(self.stalks[s], self.stalks[t]))
    }

    /// Composite restriction `F(τ) → F(σ)` for `τ ⊆ σ` in the domain, taken
    /// along the chain that adds the missing vertices in increasing order.
    pub fn restriction(&self, t: CellId, s: CellId) -> Matrix {
        if t == s {
            return Matrix::identity(self.stalks[t]);
        }
        let x = &self.base;
        let target = x.cell(s);
        let mut current: Vec<usize> = x.cell(t).vertices().to_vec();
        let mut cur_id = t;
        let mut m = Matrix::identity(self.stalks[t]);
        for &v in target.vertices() {
            if current.contains(&v) {
                continue;
            }
            current.push(v);
            let next = x.find_vertices(&current).expect("face of a cell");
            m = &self.restriction_one(cur_id, next) * &m;
            cur_id = next;
        }
        m
    }

    pub fn validate(&self) -> Result<()> {
        let x = &self.base;
        if self.stalks.len() != x.num_cells() || self.domain.mask().len() != x.num_cells() {
            return Err(Error::Shape("stalk table does not match the complex".into()));
        }
        if !self.domain.is_locally_closed(x) {
            return Err(Error::RegionKind { expected: "locally closed", detail: "sheaf domain".into() });
        }
        for (&(t, s), m) in &self.restrictions {
            if !self.domain.contains(t) || !self.domain.contains(s) || x.incidence(t, s) == 0 {
                return Err(Error::Shape(format!(
                    "restriction {}<{} is not a codimension-one pair of the domain",
                    x.cell_name(t),
                    x.cell_name(s)
                )));
            }
            if m.shape() != (self.stalks[s], self.stalks[t]) {
                return Err(Error::Shape(format!(
                    "restriction {}<{} has shape {:?}, stalks are {} and {}",
                    x.cell_name(t),
                    x.cell_name(s),
                    m.shape(),
                    self.stalks[t],
                    self.stalks[s]
                )));
            }
        }
        // Codimension-two squares.
        for s in self.domain.cells() {
            for &(m1, _) in x.facets(s) {
                if !self.domain.contains(m1) {
                    continue;
                }
                for &(t, _) in x.facets(m1) {
                    if !self.domain.contains(t) {
                        continue;
                    }
                    let via = &self.restriction_one(m1, s) * &self.restriction_one(t, m1);
                    for &(m2, _) in x.facets(s) {
                        if m2 > m1 && self.domain.contains(m2) && x.is_face(t, m2) {
                            let other = &self.restriction_one(m2, s) * &self.restriction_one(t, m2);
                            if via != other {
                                return Err(Error::NonCommuting(format!(
                                    "{} → {} via {} and {}",
                                    x.cell_name(t),
                                    x.cell_name(s),
                                    x.cell_name(m1),
                                    x.cell_name(m2)
                                )));
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// All restriction maps invertible.
    pub fn is_local_system(&self) -> bool {
        self.codim_one_pairs().all(|(t, s)| {
            let m = self.restriction_one(t, s);
            m.rows() == m.cols() && m.rank() == m.rows()
        })
    }

    /// Restriction to a locally closed subregion of the domain.
    pub fn restrict(&self, region: &CellRegion) -> Result<Self> {
        if !region.is_subset(&self.domain) {
            return Err(Error::RegionKind { expected: "inside the sheaf domain", detail: format!("{region:?}") });
        }
        let restrictions = self
            .restrictions
            .iter()
            .filter(|((t, s), _)| region.contains(*t) && region.contains(*s))
            .map(|(k, m)| (*k, m.clone()))
            .collect();
        let f = Self::new_unchecked(self.base.clone(), region.clone(), self.stalks.clone(), restrictions);
        if !region.is_locally_closed(&self.base) {
            return Err(Error::RegionKind { expected: "locally closed", detail: format!("{region:?}") });
        }
        Ok(f)
    }

    /// Extension by zero to a larger domain.
    pub fn extend_by_zero(&self, domain: &CellRegion) -> Result<Self> {
        if !self.domain.is_subset(domain) {
            return Err(Error::RegionKind { expected: "containing the sheaf domain", detail: format!("{domain:?}") });
        }
        Ok(Self::new_unchecked(self.base.clone(), domain.clone(), self.stalks.clone(), self.restrictions.clone()))
    }

    /// Cellwise change of basis `ρ ↦ A_σ ρ A_τ⁻¹`.
    pub fn gauge(&self, a: &[Matrix]) -> Result<Self> {
        let inv = a
            .iter()
            .enumerate()
            .map(|(c, m)| {
                if m.shape() != (self.stalks[c], self.stalks[c]) {
                    return Err(Error::Shape(format!("gauge at {} has the wrong size", self.base.cell_name(c))));
                }
                m.inverse().ok_or_else(|| Error::NotInvertible(self.base.cell_name(c)))
            })
            .collect::<Result<Vec<_>>>()?;
        let restrictions = self
            .codim_one_pairs()
            .map(|(t, s)| ((t, s), &(&a[s] * &self.restriction_one(t, s)) * &inv[t]))
            .collect();
        Ok(Self::new_unchecked(self.base.clone(), self.domain.clone(), self.stalks.clone(), restrictions))
    }

    /// Build from per-cell dims and a rule for codimension-one restrictions.
    pub(crate) fn from_fn(
        base: Arc<SimplicialComplex>,
        domain: CellRegion,
        stalks: Vec<usize>,
        mut rho: impl FnMut(CellId, CellId) -> Matrix,
    ) -> Self {
        let mut restrictions = BTreeMap::new();
        for s in domain.cells() {
            for &(t, _) in base.facets(s) {
                if domain.contains(t) {
                    restrictions.insert((t, s), rho(t, s));
                }
            }
        }
        Self::new_unchecked(base, domain, stalks, restrictions)
    }
}
