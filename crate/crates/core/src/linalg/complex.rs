use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::Matrix;
use crate::error::{Error, Result};

/// Graded dimensions with only the nonzero degrees stored.
#[derive(Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct GradedDims(BTreeMap<i32, usize>);

impl GradedDims {
    pub fn zero() -> Self {
        GradedDims(BTreeMap::new())
    }

    /// `dims[i]` is the dimension in degree `start + i`.
    pub fn from_slice(start: i32, dims: &[usize]) -> Self {
        let mut g = GradedDims::zero();
        for (i, &d) in dims.iter().enumerate() {
            g.set(start + i as i32, d);
        }
        g
    }

    pub fn get(&self, k: i32) -> usize {
        self.0.get(&k).copied().unwrap_or(0)
    }

    pub fn set(&mut self, k: i32, d: usize) {
        if d == 0 {
            self.0.remove(&k);
        } else {
            self.0.insert(k, d);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn euler(&self) -> i64 {
        self.0.iter().map(|(&k, &d)| if k.rem_euclid(2) == 0 { d as i64 } else { -(d as i64) }).sum()
    }

    pub fn shifted(&self, k: i32) -> GradedDims {
        GradedDims(self.0.iter().map(|(&deg, &d)| (deg - k, d)).collect())
    }

    pub fn iter(&self) -> impl Iterator<Item = (i32, usize)> + '_ {
        self.0.iter().map(|(&k, &d)| (k, d))
    }

    pub fn min_degree(&self) -> Option<i32> {
        self.0.keys().next().copied()
    }

    pub fn max_degree(&self) -> Option<i32> {
        self.0.keys().next_back().copied()
    }

    /// Dimensions from degree `start` through `end` inclusive.
    pub fn to_vec(&self, start: i32, end: i32) -> Vec<usize> {
        (start..=end).map(|k| self.get(k)).collect()
    }
}

impl fmt::Debug for GradedDims {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for GradedDims {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.0.iter().map(|(k, d)| format!("H^{k}={d}")).collect();
        write!(f, "{}", parts.join(" "))
    }
}

/// A bounded complex of finite-dimensional spaces. `diffs[i]` maps degree
/// `min_degree + i` to the next degree and has shape `dims[i+1] × dims[i]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpaceComplex {
    min_degree: i32,
    dims: Vec<usize>,
    diffs: Vec<Matrix>,
}

impl SpaceComplex {
    pub fn new(min_degree: i32, dims: Vec<usize>, diffs: Vec<Matrix>) -> Result<Self> {
        if diffs.len() + 1 != dims.len().max(1) {
            return Err(Error::Shape(format!("{} differentials for {} terms", diffs.len(), dims.len())));
        }
        for (i, d) in diffs.iter().enumerate() {
            if d.shape() != (dims[i + 1], dims[i]) {
                return Err(Error::Shape(format!(
                    "differential in degree {} has shape {:?}, expected {:?}",
                    min_degree + i as i32,
                    d.shape(),
                    (dims[i + 1], dims[i])
                )));
            }
        }
        for (i, w) in diffs.windows(2).enumerate() {
            if !(&w[1] * &w[0]).is_zero() {
                return Err(Error::NotAComplex(format!("D∘D ≠ 0 at degree {}", min_degree + i as i32)));
            }
        }
        Ok(SpaceComplex { min_degree, dims, diffs })
    }

    pub fn zero() -> Self {
        SpaceComplex { min_degree: 0, dims: Vec::new(), diffs: Vec::new() }
    }

    /// Zero differentials, dimensions as given.
    pub fn concentrated(dims: &GradedDims) -> Self {
        let (Some(lo), Some(hi)) = (dims.min_degree(), dims.max_degree()) else {
            return SpaceComplex::zero();
        };
        let d = dims.to_vec(lo, hi);
        let diffs = d.windows(2).map(|w| Matrix::zeros(w[1], w[0])).collect();
        SpaceComplex { min_degree: lo, dims: d, diffs }
    }

    pub fn min_degree(&self) -> i32 {
        self.min_degree
    }

    pub fn max_degree(&self) -> i32 {
        self.min_degree + self.dims.len() as i32 - 1
    }

    pub fn dim(&self, k: i32) -> usize {
        let i = k - self.min_degree;
        if i < 0 {
            return 0;
        }
        self.dims.get(i as usize).copied().unwrap_or(0)
    }

    /// The differential leaving degree `k` (a zero matrix outside the range).
    pub fn diff(&self, k: i32) -> Matrix {
        let i = k - self.min_degree;
        if i >= 0 && (i as usize) < self.diffs.len() {
            self.diffs[i as usize].clone()
        } else {
            Matrix::zeros(self.dim(k + 1), self.dim(k))
        }
    }

    pub fn cohomology(&self) -> GradedDims {
        let ranks: Vec<usize> = self.diffs.iter().map(Matrix::rank).collect();
        let mut h = GradedDims::zero();
        for (i, &d) in self.dims.iter().enumerate() {
            let out = ranks.get(i).copied().unwrap_or(0);
            let inc = if i > 0 { ranks[i - 1] } else { 0 };
            h.set(self.min_degree + i as i32, d - out - inc);
        }
        h
    }

    /// Alternating sum of term dimensions.
    pub fn euler(&self) -> i64 {
        GradedDims::from_slice(self.min_degree, &self.dims).euler()
    }

    pub fn term_dims(&self) -> GradedDims {
        GradedDims::from_slice(self.min_degree, &self.dims)
    }

    /// `A[k]`: degree `i` holds `A^{i+k}`, differentials multiplied by `(-1)^k`.
    pub fn shift(&self, k: i32) -> SpaceComplex {
        let sign = if k.rem_euclid(2) == 0 { 1 } else { -1 };
        SpaceComplex {
            min_degree: self.min_degree - k,
            dims: self.dims.clone(),
            diffs: self.diffs.iter().map(|d| d.scale_int(sign)).collect(),
        }
    }

    /// Mapping cone of the chain map `u: self → target`, where `u[k]` is the
    /// component in degree `k` (missing degrees are zero).
    pub fn cone(&self, target: &SpaceComplex, u: &BTreeMap<i32, Matrix>) -> Result<SpaceComplex> {
        let lo = (self.min_degree - 1).min(target.min_degree);
        let hi = (self.max_degree() - 1).max(target.max_degree());
        let comp = |k: i32| -> Matrix {
            u.get(&k).cloned().unwrap_or_else(|| Matrix::zeros(target.dim(k), self.dim(k)))
        };
        for (&k, m) in u {
            if m.shape() != (target.dim(k), self.dim(k)) {
                return Err(Error::Shape(format!("chain map component in degree {k} has wrong shape")));
            }
        }
        let mut dims = Vec::new();
        let mut diffs = Vec::new();
        for k in lo..=hi {
            dims.push(self.dim(k + 1) + target.dim(k));
            if k < hi {
                let (a1, b0) = (self.dim(k + 1), target.dim(k));
                let (a2, b1) = (self.dim(k + 2), target.dim(k + 1));
                let mut d = Matrix::zeros(a2 + b1, a1 + b0);
                d.set_block(0, 0, &-&self.diff(k + 1));
                d.set_block(a2, 0, &comp(k + 1));
                d.set_block(a2, a1, &target.diff(k));
                diffs.push(d);
            }
        }
        SpaceComplex::new(lo, dims, diffs)
    }

    /// Rank of the map induced on cohomology in degree `k` by the chain map
    /// component `u_k: self^k → target^k`.
    pub fn induced_rank(&self, target: &SpaceComplex, k: i32, u_k: &Matrix) -> usize {
        let cycles = self.diff(k).kernel();
        let boundaries = target.diff(k - 1);
        let img = &(u_k * &cycles);
        let base = boundaries.rank();
        boundaries.hstack(img).rank() - base
    }
}

/// A first-quadrant-style grid of spaces with horizontal maps
/// `(p,q) → (p+1,q)` and vertical maps `(p,q) → (p,q+1)` whose squares
/// commute. Totalization twists the vertical maps by `(-1)^p`.
#[derive(Clone, Debug)]
pub struct DoubleComplex {
    pub p_start: i32,
    pub q_start: i32,
    /// `dims[p][q]`, offsets relative to the starts.
    pub dims: Vec<Vec<usize>>,
    pub horizontal: BTreeMap<(i32, i32), Matrix>,
    pub vertical: BTreeMap<(i32, i32), Matrix>,
}

impl DoubleComplex {
    pub fn dim(&self, p: i32, q: i32) -> usize {
        let (i, j) = (p - self.p_start, q - self.q_start);
        if i < 0 || j < 0 {
            return 0;
        }
        self.dims.get(i as usize).and_then(|r| r.get(j as usize)).copied().unwrap_or(0)
    }

    fn map(&self, which: &BTreeMap<(i32, i32), Matrix>, p: i32, q: i32, tp: i32, tq: i32) -> Matrix {
        which.get(&(p, q)).cloned().unwrap_or_else(|| Matrix::zeros(self.dim(tp, tq), self.dim(p, q)))
    }

    pub fn total(&self) -> Result<SpaceComplex> {
        let np = self.dims.len() as i32;
        let nq = self.dims.iter().map(Vec::len).max().unwrap_or(0) as i32;
        if np == 0 || nq == 0 {
            return Ok(SpaceComplex::zero());
        }
        let lo = self.p_start + self.q_start;
        let hi = lo + np + nq - 2;
        let ps = self.p_start..self.p_start + np;
        let layout = |n: i32| -> Vec<(i32, i32, usize)> {
            let mut off = 0;
            let mut v = Vec::new();
            for p in ps.clone() {
                let q = n - p;
                let d = self.dim(p, q);
                v.push((p, q, off));
                off += d;
            }
            v
        };
        let total_dim = |n: i32| -> usize { ps.clone().map(|p| self.dim(p, n - p)).sum() };
        let mut dims = Vec::new();
        let mut diffs = Vec::new();
        for n in lo..=hi {
            dims.push(total_dim(n));
            if n == hi {
                break;
            }
            let src = layout(n);
            let dst = layout(n + 1);
            let offset_of = |p: i32| dst.iter().find(|(pp, _, _)| *pp == p).map(|t| t.2);
            let mut d = Matrix::zeros(total_dim(n + 1), total_dim(n));
            for &(p, q, c) in &src {
                if self.dim(p, q) == 0 {
                    continue;
                }
                if let Some(r) = offset_of(p + 1) {
                    d.set_block(r, c, &self.map(&self.horizontal, p, q, p + 1, q));
                }
                if let Some(r) = offset_of(p) {
                    let sign = if p.rem_euclid(2) == 0 { 1 } else { -1 };
                    d.set_block(r, c, &self.map(&self.vertical, p, q, p, q + 1).scale_int(sign));
                }
            }
            diffs.push(d);
        }
        SpaceComplex::new(lo, dims, diffs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn identity_two_term_complex_is_acyclic() {
        let c = SpaceComplex::new(0, vec![1, 1], vec![Matrix::identity(1)]).unwrap();
        assert!(c.cohomology().is_zero());
    }

    #[test]
    fn zero_differentials_give_term_dims() {
        let g = GradedDims::from_slice(-1, &[2, 0, 3]);
        assert_eq!(SpaceComplex::concentrated(&g).cohomology(), g);
    }

    #[test]
    fn non_complex_is_rejected() {
        let d = Matrix::identity(1);
        assert!(matches!(SpaceComplex::new(0, vec![1, 1, 1], vec![d.clone(), d]), Err(Error::NotAComplex(_))));
    }

    #[test]
    fn shift_regrades_and_signs() {
        let c = SpaceComplex::new(0, vec![1, 2], vec![Matrix::from_i64(&[&[1], &[0]])]).unwrap();
        let s = c.shift(1);
        assert_eq!(s.min_degree(), -1);
        assert_eq!(s.diff(-1), Matrix::from_i64(&[&[-1], &[0]]));
        assert_eq!(s.cohomology(), c.cohomology().shifted(1));
    }

    #[test]
    fn cone_of_identity_is_acyclic_and_cone_of_zero_map_is_target() {
        let a = SpaceComplex::new(0, vec![2, 1], vec![Matrix::from_i64(&[&[1, 0]])]).unwrap();
        let mut u = BTreeMap::new();
        u.insert(0, Matrix::identity(2));
        u.insert(1, Matrix::identity(1));
        assert!(a.cone(&a, &u).unwrap().cohomology().is_zero());
        let zero = SpaceComplex::zero();
        assert_eq!(zero.cone(&a, &BTreeMap::new()).unwrap().cohomology(), a.cohomology());
    }

    #[test]
    fn single_row_double_complex_is_the_row() {
        let mut horizontal = BTreeMap::new();
        horizontal.insert((0, 0), Matrix::from_i64(&[&[1, 1]]));
        let dc = DoubleComplex { p_start: 0, q_start: 0, dims: vec![vec![2], vec![1]], horizontal, vertical: BTreeMap::new() };
        let t = dc.total().unwrap();
        assert_eq!(t.diff(0), Matrix::from_i64(&[&[1, 1]]));
        assert_eq!(t.cohomology(), GradedDims::from_slice(0, &[1, 0]));
    }

    #[test]
    fn zero_grid_totalizes_to_zero_differentials() {
        let dc = DoubleComplex {
            p_start: 0,
            q_start: 0,
            dims: vec![vec![1, 2, 1], vec![2, 1, 1], vec![1, 1, 2]],
            horizontal: BTreeMap::new(),
            vertical: BTreeMap::new(),
        };
        let t = dc.total().unwrap();
        for n in t.min_degree()..t.max_degree() {
            assert!(t.diff(n).is_zero());
        }
        assert_eq!(t.cohomology(), t.term_dims());
    }

    #[test]
    fn commuting_square_totalizes_to_a_complex() {
        // ℚ --1--> ℚ over ℚ --1--> ℚ, vertical identities: cone-like, acyclic.
        let one = Matrix::identity(1);
        let mut horizontal = BTreeMap::new();
        horizontal.insert((0, 0), one.clone());
        horizontal.insert((0, 1), one.clone());
        let mut vertical = BTreeMap::new();
        vertical.insert((0, 0), one.clone());
        vertical.insert((1, 0), one);
        let dc = DoubleComplex { p_start: 0, q_start: 0, dims: vec![vec![1, 1], vec![1, 1]], horizontal, vertical };
        assert!(dc.total().unwrap().cohomology().is_zero());
    }

    fn small_matrix(rows: usize, cols: usize) -> impl Strategy<Value = Matrix> {
        proptest::collection::vec(-3i64..=3, rows * cols).prop_map(move |v| {
            let rows_v: Vec<Vec<_>> = v.chunks(cols.max(1)).take(rows).map(|c| c.iter().map(|&x| super::super::int(x)).collect()).collect();
            if cols == 0 {
                Matrix::zeros(rows, 0)
            } else {
                Matrix::from_rows(rows_v, cols)
            }
        })
    }

    proptest! {
        #[test]
        fn rank_nullity(m in (0usize..5, 0usize..5).prop_flat_map(|(r, c)| small_matrix(r, c))) {
            prop_assert_eq!(m.rank() + m.kernel().cols(), m.cols());
            prop_assert_eq!(m.rank(), m.transpose().rank());
        }

        #[test]
        fn complex_and_its_cohomology_have_equal_cohomology(
            a in small_matrix(3, 2), b in small_matrix(2, 3)
        ) {
            // Build d1∘d0 = 0 by composing with a projection onto ker(b).
            let k = b.kernel();
            let d0 = if k.cols() == 0 { Matrix::zeros(3, 2) } else {
                let p = &k * &k.transpose();
                &p * &a
            };
            let c = SpaceComplex::new(0, vec![2, 3, 2], vec![d0, b]).unwrap();
            let h = c.cohomology();
            prop_assert_eq!(SpaceComplex::concentrated(&h).cohomology(), h.clone());
            prop_assert_eq!(h.euler(), c.euler());
        }
    }
}
