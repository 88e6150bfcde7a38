use std::collections::BTreeMap;
use std::sync::Arc;

use super::map::SimplicialMap;
use crate::complex::{CellId, CellRegion, SimplicialComplex};
use crate::error::{Error, Result};
use crate::linalg::{DoubleComplex, Matrix, SpaceComplex, Subquotient};
use crate::sheaf::{CellularSheaf, SheafComplex};

/// A bounded complex whose terms are sums of elementary injectives
/// `E_σ ⊗ ℚ^m` (constant on the closed cell σ̄, within the domain).
///
/// Each degree lists its summands `(σ, m)`; the differential is one matrix
/// on the concatenated multiplicity spaces whose block from σ to σ′ can be
/// nonzero only when σ′ ⊆ σ.
#[derive(Clone, Debug)]
pub struct InjectiveComplex {
    base: Arc<SimplicialComplex>,
    domain: CellRegion,
    min_degree: i32,
    summands: Vec<Vec<(CellId, usize)>>,
    diffs: Vec<Matrix>,
}

impl InjectiveComplex {
    pub fn new(
        base: Arc<SimplicialComplex>,
        domain: CellRegion,
        min_degree: i32,
        summands: Vec<Vec<(CellId, usize)>>,
        diffs: Vec<Matrix>,
    ) -> Result<Self> {
        let i = InjectiveComplex { base, domain, min_degree, summands, diffs };
        i.validate()?;
        Ok(i)
    }

    /// `E_σ ⊗ ℚ^m` in degree `k`.
    pub fn elementary(base: Arc<SimplicialComplex>, domain: CellRegion, sigma: CellId, m: usize, k: i32) -> Self {
        InjectiveComplex { base, domain, min_degree: k, summands: vec![vec![(sigma, m)]], diffs: vec![] }
    }

    pub fn validate(&self) -> Result<()> {
        if self.summands.is_empty() || self.diffs.len() + 1 != self.summands.len() {
            return Err(Error::Shape("summand lists and differentials do not match".into()));
        }
        for list in &self.summands {
            if let Some(&(s, _)) = list.iter().find(|(s, _)| !self.domain.contains(*s)) {
                return Err(Error::Invalid(format!("summand {} lies outside the domain", self.base.cell_name(s))));
            }
        }
        for (i, d) in self.diffs.iter().enumerate() {
            let k = self.min_degree + i as i32;
            if d.shape() != (self.total_dim(k + 1), self.total_dim(k)) {
                return Err(Error::Shape(format!("differential in degree {k} has the wrong shape")));
            }
            let (src, dst) = (self.offsets(k), self.offsets(k + 1));
            for &(s, off_s, ms) in &src {
                for &(t, off_t, mt) in &dst {
                    if !self.base.is_face(t, s) && !d.block(off_t, off_s, mt, ms).is_zero() {
                        return Err(Error::Invalid(format!(
                            "nonzero map E_{} → E_{} in degree {k}",
                            self.base.cell_name(s),
                            self.base.cell_name(t)
                        )));
                    }
                }
            }
            if i + 1 < self.diffs.len() && !(&self.diffs[i + 1] * d).is_zero() {
                return Err(Error::NotAComplex(format!("D∘D ≠ 0 at degree {k}")));
            }
        }
        Ok(())
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
        self.min_degree + self.summands.len() as i32 - 1
    }

    pub fn summands(&self, k: i32) -> &[(CellId, usize)] {
        let i = k - self.min_degree;
        if i < 0 || i as usize >= self.summands.len() {
            &[]
        } else {
            &self.summands[i as usize]
        }
    }

    /// `(cell, offset, multiplicity)` for each summand in degree `k`.
    pub fn offsets(&self, k: i32) -> Vec<(CellId, usize, usize)> {
        let mut off = 0;
        self.summands(k)
            .iter()
            .map(|&(s, m)| {
                let r = (s, off, m);
                off += m;
                r
            })
            .collect()
    }

    pub fn total_dim(&self, k: i32) -> usize {
        self.summands(k).iter().map(|s| s.1).sum()
    }

    pub fn diff(&self, k: i32) -> Matrix {
        let i = k - self.min_degree;
        if i >= 0 && (i as usize) < self.diffs.len() {
            self.diffs[i as usize].clone()
        } else {
            Matrix::zeros(self.total_dim(k + 1), self.total_dim(k))
        }
    }

    fn indices(&self, k: i32, keep: &impl Fn(CellId) -> bool) -> Vec<usize> {
        self.offsets(k).into_iter().filter(|(s, _, _)| keep(*s)).flat_map(|(_, o, m)| o..o + m).collect()
    }

    /// The complex of spaces spanned by the summands selected by `keep`.
    /// It is a genuine complex when the selection is convex in the face
    /// poset (open, closed or locally closed).
    pub fn restrict_summands(&self, keep: impl Fn(CellId) -> bool) -> SpaceComplex {
        let idx: Vec<Vec<usize>> = (self.min_degree..=self.max_degree()).map(|k| self.indices(k, &keep)).collect();
        let dims = idx.iter().map(Vec::len).collect();
        let diffs = self.diffs.iter().enumerate().map(|(i, d)| d.select(&idx[i + 1], &idx[i])).collect();
        SpaceComplex::new(self.min_degree, dims, diffs).expect("convex selections give complexes")
    }

    /// `Γ(W, I)` for an open `W` of the domain: `Γ(W, E_σ) = ℚ` exactly when
    /// `σ ∈ W`.
    pub fn sections(&self, w: &CellRegion) -> Result<SpaceComplex> {
        self.check_open(w)?;
        Ok(self.restrict_summands(|s| w.contains(s)))
    }

    /// `Γ_Z(I)` for a locally closed `Z`: summands supported in `Z`.
    pub fn supported_sections(&self, z: &CellRegion) -> Result<SpaceComplex> {
        if !z.is_subset(&self.domain) || !z.is_locally_closed(&self.base) {
            return Err(Error::RegionKind { expected: "locally closed in the domain", detail: format!("{z:?}") });
        }
        Ok(self.restrict_summands(|s| z.contains(s)))
    }

    pub(crate) fn check_open(&self, w: &CellRegion) -> Result<()> {
        let x = &self.base;
        for c in w.cells() {
            if !self.domain.contains(c) {
                return Err(Error::RegionKind { expected: "inside the domain", detail: x.cell_name(c) });
            }
            if let Some(&(t, _)) = x.cofacets(c).iter().find(|(t, _)| self.domain.contains(*t) && !w.contains(*t)) {
                return Err(Error::RegionKind {
                    expected: "open",
                    detail: format!("{} is in the region but its coface {} is not", x.cell_name(c), x.cell_name(t)),
                });
            }
        }
        Ok(())
    }

    /// Stalk at an open cell τ: summands with σ ⊇ τ.
    pub fn stalk_complex(&self, tau: CellId) -> SpaceComplex {
        let x = self.base.clone();
        self.restrict_summands(move |s| x.is_face(tau, s))
    }

    /// The underlying complex of sheaves.
    pub fn to_sheaf_complex(&self) -> SheafComplex {
        let x = &self.base;
        let n = x.num_cells();
        let stalk_idx = |k: i32, tau: CellId| -> Vec<usize> { self.indices(k, &|s| x.is_face(tau, s)) };
        let mut terms = Vec::new();
        let mut idx_by_degree = Vec::new();
        for k in self.min_degree..=self.max_degree() {
            let idx: Vec<Vec<usize>> =
                (0..n).map(|c| if self.domain.contains(c) { stalk_idx(k, c) } else { Vec::new() }).collect();
            let stalks = idx.iter().map(Vec::len).collect();
            let sheaf = CellularSheaf::from_fn(x.clone(), self.domain.clone(), stalks, |t, s| {
                // Projection: positions of idx[s] inside idx[t].
                let mut m = Matrix::zeros(idx[s].len(), idx[t].len());
                for (r, g) in idx[s].iter().enumerate() {
                    let col = idx[t].iter().position(|h| h == g).expect("summands over a coface are a subset");
                    m.set(r, col, crate::linalg::int(1));
                }
                m
            });
            terms.push(sheaf);
            idx_by_degree.push(idx);
        }
        let diffs = self
            .diffs
            .iter()
            .enumerate()
            .map(|(i, d)| (0..n).map(|c| d.select(&idx_by_degree[i + 1][c], &idx_by_degree[i][c])).collect())
            .collect();
        SheafComplex::new_unchecked(self.min_degree, terms, diffs)
    }

    /// `f_*` of an injective complex: `f_*(E_σ ⊗ V) = E_{f(σ)} ⊗ V`, with the
    /// same structure matrices.
    pub fn pushforward(&self, f: &SimplicialMap) -> Result<InjectiveComplex> {
        if !crate::sheaf::same_base(&self.base, f.source()) || &self.domain != f.source_domain() {
            return Err(Error::BaseMismatch);
        }
        let summands = self.summands.iter().map(|l| l.iter().map(|&(s, m)| (f.apply(s), m)).collect()).collect();
        Ok(InjectiveComplex {
            base: f.target().clone(),
            domain: f.target_domain().clone(),
            min_degree: self.min_degree,
            summands,
            diffs: self.diffs.clone(),
        })
    }

    /// Alternating sum of summand multiplicities over cells selected by
    /// `keep`: the Euler characteristic of the corresponding section complex.
    pub fn euler_on(&self, keep: impl Fn(CellId) -> bool) -> i64 {
        (self.min_degree..=self.max_degree())
            .map(|k| {
                let d: usize = self.summands(k).iter().filter(|(s, _)| keep(*s)).map(|(_, m)| m).sum();
                if k.rem_euclid(2) == 0 {
                    d as i64
                } else {
                    -(d as i64)
                }
            })
            .sum()
    }

    /// Multiset of summands per degree, for inspection.
    pub fn summand_table(&self) -> BTreeMap<i32, Vec<(CellId, usize)>> {
        (self.min_degree..=self.max_degree()).map(|k| (k, self.summands(k).to_vec())).collect()
    }
}

/// One canonical step for a single sheaf: the embedding
/// `G → ⊕_σ E_σ ⊗ G(σ)` and its cokernel.
struct Step {
    /// Domain cells σ ⊇ τ, per τ.
    above: Vec<Vec<CellId>>,
    coker: Vec<Subquotient>,
    next: CellularSheaf,
}

fn canonical_step(g: &CellularSheaf) -> Step {
    let x = g.base();
    let n = x.num_cells();
    let domain = g.domain();
    let above: Vec<Vec<CellId>> = (0..n)
        .map(|t| if domain.contains(t) { x.cofaces(t).into_iter().filter(|&s| domain.contains(s)).collect() } else { vec![] })
        .collect();
    let coker: Vec<Subquotient> = (0..n)
        .map(|t| {
            let rows: usize = above[t].iter().map(|&s| g.stalk_dim(s)).sum();
            let mut eps = Matrix::zeros(rows, g.stalk_dim(t));
            let mut off = 0;
            for &s in &above[t] {
                eps.set_block(off, 0, &g.restriction(t, s));
                off += g.stalk_dim(s);
            }
            Subquotient::cokernel(&eps)
        })
        .collect();
    let stalks = coker.iter().map(Subquotient::dim).collect();
    let next = CellularSheaf::from_fn(x.clone(), domain.clone(), stalks, |t, s| {
        let select = selection(g, &above[t], &above[s]);
        &(&coker[s].proj * &select) * &coker[t].reps
    });
    Step { above, coker, next }
}

/// Projection from `⊕_{σ ∈ from} G(σ)` onto `⊕_{σ ∈ to} G(σ)`, `to ⊆ from`.
fn selection(g: &CellularSheaf, from: &[CellId], to: &[CellId]) -> Matrix {
    let rows: usize = to.iter().map(|&s| g.stalk_dim(s)).sum();
    let cols: usize = from.iter().map(|&s| g.stalk_dim(s)).sum();
    let mut m = Matrix::zeros(rows, cols);
    let mut col_off = BTreeMap::new();
    let mut off = 0;
    for &s in from {
        col_off.insert(s, off);
        off += g.stalk_dim(s);
    }
    let mut r = 0;
    for &s in to {
        let d = g.stalk_dim(s);
        m.set_block(r, col_off[&s], &Matrix::identity(d));
        r += d;
    }
    m
}

/// Offset of each domain cell in the concatenated multiplicity space of a
/// level with stalk dimensions `dims` (cells in id order).
fn level_offsets(dims: &[usize]) -> Vec<usize> {
    let mut off = 0;
    dims.iter()
        .map(|&d| {
            let o = off;
            off += d;
            o
        })
        .collect()
}

/// Canonical injective resolution `F → I`, certified stalkwise: the cone of
/// the augmentation is acyclic at every cell of the domain.
pub fn injective_resolution(f: &SheafComplex) -> Result<InjectiveComplex> {
    let x = f.base().clone();
    let domain = f.domain().clone();
    let n = x.num_cells();
    let bound = x.dim() + 2;
    let degrees: Vec<i32> = f.degrees().collect();
    let np = degrees.len();

    // levels[p][q]: the sheaf Q_q of the resolution of F^p; steps[p][q] its
    // canonical step.
    let mut levels: Vec<Vec<CellularSheaf>> = Vec::with_capacity(np);
    let mut steps: Vec<Vec<Step>> = Vec::with_capacity(np);
    for t in f.terms() {
        let mut ls = vec![t.clone()];
        let mut ss = Vec::new();
        while !ls.last().unwrap().is_zero() {
            if ls.len() > bound {
                return Err(Error::ResolutionDiverged(bound));
            }
            let st = canonical_step(ls.last().unwrap());
            ls.push(st.next.clone());
            ss.push(st);
        }
        levels.push(ls);
        steps.push(ss);
    }
    let nq = levels.iter().map(|l| l.len() - 1).max().unwrap_or(0).max(1);
    let dim_at = |p: usize, q: usize, c: CellId| -> usize { levels[p].get(q).map_or(0, |g| g.stalk_dim(c)) };

    // Horizontal maps per level, cellwise: h[p][q][c]: Q^p_q(c) → Q^{p+1}_q(c).
    let mut h: Vec<Vec<Vec<Matrix>>> = Vec::new();
    for p in 0..np.saturating_sub(1) {
        let k = degrees[p];
        let mut per_level: Vec<Vec<Matrix>> = vec![(0..n).map(|c| f.diff(k, c)).collect()];
        for q in 0..nq - 1 {
            let prev = &per_level[q];
            let cur: Vec<Matrix> = (0..n)
                .map(|t| {
                    let (rows, cols) = (dim_at(p + 1, q + 1, t), dim_at(p, q + 1, t));
                    if rows == 0 || cols == 0 || !domain.contains(t) {
                        return Matrix::zeros(rows, cols);
                    }
                    let (sa, sb) = (&steps[p][q], &steps[p + 1][q]);
                    let diag = Matrix::block_diag(&sa.above[t].iter().map(|&s| prev[s].clone()).collect::<Vec<_>>());
                    &(&sb.coker[t].proj * &diag) * &sa.coker[t].reps
                })
                .collect();
            per_level.push(cur);
        }
        h.push(per_level);
    }

    let mut dc = DoubleComplex {
        p_start: f.min_degree(),
        q_start: 0,
        dims: (0..np).map(|p| (0..nq).map(|q| (0..n).map(|c| dim_at(p, q, c)).sum()).collect()).collect(),
        horizontal: BTreeMap::new(),
        vertical: BTreeMap::new(),
    };
    for p in 0..np {
        for q in 0..nq {
            let pk = degrees[p];
            let src_dims: Vec<usize> = (0..n).map(|c| dim_at(p, q, c)).collect();
            let src_off = level_offsets(&src_dims);
            if q + 1 < levels[p].len() && q < steps[p].len() {
                let dst_dims: Vec<usize> = (0..n).map(|c| dim_at(p, q + 1, c)).collect();
                let dst_off = level_offsets(&dst_dims);
                let step = &steps[p][q];
                let mut v = Matrix::zeros(dst_dims.iter().sum(), src_dims.iter().sum());
                for t in 0..n {
                    if dst_dims[t] == 0 {
                        continue;
                    }
                    let mut inner = 0;
                    for &s in &step.above[t] {
                        let d = src_dims[s];
                        if d > 0 {
                            v.set_block(dst_off[t], src_off[s], &step.coker[t].proj.block(0, inner, dst_dims[t], d));
                        }
                        inner += d;
                    }
                }
                dc.vertical.insert((pk, q as i32), v);
            }
            if p + 1 < np {
                let dst_dims: Vec<usize> = (0..n).map(|c| dim_at(p + 1, q, c)).collect();
                let dst_off = level_offsets(&dst_dims);
                let mut m = Matrix::zeros(dst_dims.iter().sum(), src_dims.iter().sum());
                for c in 0..n {
                    if src_dims[c] > 0 && dst_dims[c] > 0 {
                        m.set_block(dst_off[c], src_off[c], &h[p][q][c]);
                    }
                }
                dc.horizontal.insert((pk, q as i32), m);
            }
        }
    }
    let total = dc.total()?;
    let lo = f.min_degree();
    let hi = f.max_degree() + nq as i32 - 1;
    let summands: Vec<Vec<(CellId, usize)>> = (lo..=hi)
        .map(|k| {
            let mut list = Vec::new();
            for p in 0..np {
                let q = k - degrees[p];
                if q < 0 || q as usize >= nq {
                    continue;
                }
                for c in 0..n {
                    let d = dim_at(p, q as usize, c);
                    if d > 0 {
                        list.push((c, d));
                    }
                }
            }
            list
        })
        .collect();
    let diffs = (lo..hi).map(|k| total.diff(k)).collect();
    let inj = InjectiveComplex { base: x.clone(), domain: domain.clone(), min_degree: lo, summands, diffs };
    debug_assert!(inj.validate().is_ok());

    // Certificate: augmentation F^k(τ) → I^k(τ) (into the q = 0 summands)
    // has acyclic cone at every τ.
    for tau in domain.cells() {
        let fs = f.stalk_complex(tau);
        let is = inj.stalk_complex(tau);
        let mut aug = BTreeMap::new();
        for (p, &k) in degrees.iter().enumerate() {
            let mut m = Matrix::zeros(is.dim(k), f.stalk_dim(k, tau));
            let mut r = 0;
            for pp in 0..np {
                let q = k - degrees[pp];
                if q < 0 || q as usize >= nq {
                    continue;
                }
                for c in 0..n {
                    let d = dim_at(pp, q as usize, c);
                    if d == 0 || !x.is_face(tau, c) {
                        continue;
                    }
                    if pp == p && q == 0 {
                        m.set_block(r, 0, &levels[p][0].restriction(tau, c));
                    }
                    r += d;
                }
            }
            aug.insert(k, m);
        }
        let cone = fs.cone(&is, &aug)?;
        if !cone.cohomology().is_zero() {
            return Err(Error::NotQuasiIsomorphic(x.cell_name(tau)));
        }
    }
    Ok(inj)
}

/// Summand multiplicities of the canonical resolution of a single sheaf,
/// from stalk dimensions alone: `q_{j+1}(τ) = Σ_{σ ⊋ τ} q_j(σ)`.
pub fn canonical_multiplicities(x: &SimplicialComplex, domain: &CellRegion, dims: &[usize]) -> Vec<Vec<usize>> {
    let n = x.num_cells();
    let mut levels = vec![dims.to_vec()];
    loop {
        let q = levels.last().unwrap();
        if q.iter().all(|&d| d == 0) {
            levels.pop();
            break;
        }
        let next: Vec<usize> = (0..n)
            .map(|t| {
                if !domain.contains(t) {
                    return 0;
                }
                x.cofaces(t).into_iter().filter(|&s| s != t && domain.contains(s)).map(|s| q[s]).sum()
            })
            .collect();
        levels.push(next);
    }
    levels
}
