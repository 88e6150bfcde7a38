use std::collections::{BTreeSet, HashMap};
use std::fmt;

use num_traits::{One, Zero};

use super::region::CellRegion;
use super::simplex::{Simplex, VertexId};
use crate::error::{Error, Result};
use crate::linalg::{int, LinearProgram, LpOutcome, Matrix, Rational};

/// Index of a cell (open simplex) inside its complex.
pub type CellId = usize;

/// A finite simplicial complex with an exact rational embedding.
///
/// Cells are stored sorted by `(dimension, vertex list)`, so the vertices
/// occupy cell ids `0..num_vertices()` in vertex order. Immutable after
/// construction.
#[derive(Clone)]
pub struct SimplicialComplex {
    ambient_dim: usize,
    labels: Vec<String>,
    coords: Vec<Vec<Rational>>,
    cells: Vec<Simplex>,
    index: HashMap<Simplex, CellId>,
    facets: Vec<Vec<(CellId, i64)>>,
    cofacets: Vec<Vec<(CellId, i64)>>,
}

impl fmt::Debug for SimplicialComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SimplicialComplex(ambient {}, f-vector {:?})", self.ambient_dim, self.f_vector())
    }
}

impl PartialEq for SimplicialComplex {
    fn eq(&self, other: &Self) -> bool {
        self.ambient_dim == other.ambient_dim
            && self.labels == other.labels
            && self.coords == other.coords
            && self.cells == other.cells
    }
}

impl Eq for SimplicialComplex {}

impl SimplicialComplex {
    /// Validating constructor: closes the maximal cells under faces, checks
    /// affine independence of every simplex and that distinct open cells
    /// have disjoint realizations.
    pub fn build(
        ambient_dim: usize,
        labels: Vec<String>,
        coords: Vec<Vec<Rational>>,
        maximal: Vec<Vec<VertexId>>,
    ) -> Result<Self> {
        if labels.len() != coords.len() {
            return Err(Error::Shape("one label per vertex required".into()));
        }
        for (l, c) in labels.iter().zip(&coords) {
            if c.len() != ambient_dim {
                return Err(Error::Shape(format!("vertex {l:?} has {} coordinates, expected {ambient_dim}", c.len())));
            }
        }
        for cell in &maximal {
            if let Some(&v) = cell.iter().find(|&&v| v >= labels.len()) {
                return Err(Error::UnknownVertex(v.to_string()));
            }
        }
        let complex = Self::assemble(ambient_dim, labels, coords, maximal);
        complex.check_embedding()?;
        Ok(complex)
    }

    /// Labelled convenience constructor; cells reference labels.
    pub fn from_labelled(
        ambient_dim: usize,
        vertices: Vec<(String, Vec<Rational>)>,
        maximal: Vec<Vec<String>>,
    ) -> Result<Self> {
        let pos: HashMap<&str, usize> = vertices.iter().enumerate().map(|(i, (l, _))| (l.as_str(), i)).collect();
        let cells = maximal
            .iter()
            .map(|c| {
                c.iter().map(|l| pos.get(l.as_str()).copied().ok_or_else(|| Error::UnknownVertex(l.clone()))).collect()
            })
            .collect::<Result<Vec<Vec<usize>>>>()?;
        let (labels, coords) = vertices.into_iter().unzip();
        Self::build(ambient_dim, labels, coords, cells)
    }

    /// Integer-coordinate shorthand used by fixtures and tests.
    pub fn from_int_coords(coords: &[&[i64]], maximal: &[&[usize]]) -> Result<Self> {
        let ambient = coords.first().map_or(0, |c| c.len());
        Self::build(
            ambient,
            (0..coords.len()).map(|i| i.to_string()).collect(),
            coords.iter().map(|c| c.iter().map(|&x| int(x)).collect()).collect(),
            maximal.iter().map(|c| c.to_vec()).collect(),
        )
    }

    /// The one-point complex in ambient dimension zero.
    pub fn point() -> Self {
        Self::assemble(0, vec!["pt".into()], vec![vec![]], vec![vec![0]])
    }

    /// Non-validating constructor for complexes produced by trusted
    /// refinements and products.
    pub(crate) fn assemble(
        ambient_dim: usize,
        labels: Vec<String>,
        coords: Vec<Vec<Rational>>,
        maximal: Vec<Vec<VertexId>>,
    ) -> Self {
        let mut set: BTreeSet<(usize, Simplex)> = (0..labels.len()).map(|v| (0, Simplex::vertex(v))).collect();
        for cell in maximal {
            if let Some(s) = Simplex::new(cell) {
                for f in s.faces() {
                    set.insert((f.dim(), f));
                }
            }
        }
        let cells: Vec<Simplex> = set.into_iter().map(|(_, s)| s).collect();
        let index: HashMap<Simplex, CellId> = cells.iter().cloned().enumerate().map(|(i, s)| (s, i)).collect();
        let mut facets = vec![Vec::new(); cells.len()];
        let mut cofacets = vec![Vec::new(); cells.len()];
        for (i, s) in cells.iter().enumerate() {
            for (f, sign) in s.facets() {
                let j = index[&f];
                facets[i].push((j, sign));
                cofacets[j].push((i, sign));
            }
        }
        for c in cofacets.iter_mut() {
            c.sort_unstable();
        }
        SimplicialComplex { ambient_dim, labels, coords, cells, index, facets, cofacets }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn num_vertices(&self) -> usize {
        self.labels.len()
    }

    pub fn num_cells(&self) -> usize {
        self.cells.len()
    }

    pub fn dim(&self) -> usize {
        self.cells.last().map_or(0, Simplex::dim)
    }

    pub fn cell(&self, id: CellId) -> &Simplex {
        &self.cells[id]
    }

    pub fn cells(&self) -> &[Simplex] {
        &self.cells
    }

    pub fn cell_dim(&self, id: CellId) -> usize {
        self.cells[id].dim()
    }

    pub fn find(&self, s: &Simplex) -> Option<CellId> {
        self.index.get(s).copied()
    }

    pub fn find_vertices(&self, vertices: &[VertexId]) -> Option<CellId> {
        Simplex::new(vertices.to_vec()).and_then(|s| self.find(&s))
    }

    pub fn vertex_cell(&self, v: VertexId) -> CellId {
        v
    }

    pub fn label(&self, v: VertexId) -> &str {
        &self.labels[v]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn coords(&self, v: VertexId) -> &[Rational] {
        &self.coords[v]
    }

    pub fn all_coords(&self) -> &[Vec<Rational>] {
        &self.coords
    }

    pub fn vertex_by_label(&self, label: &str) -> Option<VertexId> {
        self.labels.iter().position(|l| l == label)
    }

    /// Codimension-one faces with incidence numbers `[face : cell]`.
    pub fn facets(&self, id: CellId) -> &[(CellId, i64)] {
        &self.facets[id]
    }

    pub fn cofacets(&self, id: CellId) -> &[(CellId, i64)] {
        &self.cofacets[id]
    }

    /// Incidence number `[face : cell]` for a codimension-one pair.
    pub fn incidence(&self, face: CellId, cell: CellId) -> i64 {
        self.facets[cell].iter().find(|(f, _)| *f == face).map_or(0, |(_, s)| *s)
    }

    pub fn cells_of_dim(&self, k: usize) -> impl Iterator<Item = CellId> + '_ {
        self.cells.iter().enumerate().filter(move |(_, s)| s.dim() == k).map(|(i, _)| i)
    }

    pub fn edges(&self) -> impl Iterator<Item = CellId> + '_ {
        self.cells_of_dim(1)
    }

    pub fn is_face(&self, face: CellId, cell: CellId) -> bool {
        self.cells[face].is_face_of(&self.cells[cell])
    }

    /// All faces of `id`, including itself, sorted.
    pub fn faces(&self, id: CellId) -> Vec<CellId> {
        let mut v: Vec<CellId> = self.cells[id].faces().iter().map(|f| self.index[f]).collect();
        v.sort_unstable();
        v
    }

    /// All cofaces of `id`, including itself, sorted.
    pub fn cofaces(&self, id: CellId) -> Vec<CellId> {
        let mut seen = vec![false; self.cells.len()];
        let mut stack = vec![id];
        seen[id] = true;
        while let Some(c) = stack.pop() {
            for &(t, _) in &self.cofacets[c] {
                if !seen[t] {
                    seen[t] = true;
                    stack.push(t);
                }
            }
        }
        (0..self.cells.len()).filter(|&i| seen[i]).collect()
    }

    pub fn maximal_cells(&self) -> Vec<CellId> {
        (0..self.cells.len()).filter(|&i| self.cofacets[i].is_empty()).collect()
    }

    /// Open star (all cofaces) and link (faces of the closed star that miss
    /// `id`).
    pub fn star_link(&self, id: CellId) -> (CellRegion, Vec<CellId>) {
        let star = self.cofaces(id);
        let sigma = &self.cells[id];
        let mut link = BTreeSet::new();
        for &t in &star {
            for f in self.cells[t].faces() {
                if f.vertices().iter().all(|v| !sigma.contains(*v)) {
                    link.insert(self.index[&f]);
                }
            }
        }
        (CellRegion::from_sorted_unchecked(self.cells.len(), star), link.into_iter().collect())
    }

    /// Vertices of the link of `id`.
    pub fn link_vertices(&self, id: CellId) -> Vec<VertexId> {
        let sigma = &self.cells[id];
        let mut out = BTreeSet::new();
        for &(t, _) in &self.cofacets[id] {
            for &v in self.cells[t].vertices() {
                if !sigma.contains(v) {
                    out.insert(v);
                }
            }
        }
        out.into_iter().collect()
    }

    pub fn f_vector(&self) -> Vec<usize> {
        let mut f = vec![0; self.dim() + 1];
        for s in &self.cells {
            f[s.dim()] += 1;
        }
        f
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.f_vector().iter().enumerate().map(|(k, &n)| if k % 2 == 0 { n as i64 } else { -(n as i64) }).sum()
    }

    /// Signed incidence matrix from `k`-cells to `(k+1)`-cells (the
    /// coboundary), rows and columns in cell-id order within each dimension.
    pub fn coboundary_matrix(&self, k: usize) -> Matrix {
        let lo: Vec<CellId> = self.cells_of_dim(k).collect();
        let hi: Vec<CellId> = self.cells_of_dim(k + 1).collect();
        let pos: HashMap<CellId, usize> = lo.iter().enumerate().map(|(i, &c)| (c, i)).collect();
        let mut m = Matrix::zeros(hi.len(), lo.len());
        for (r, &t) in hi.iter().enumerate() {
            for &(f, s) in &self.facets[t] {
                m.set(r, pos[&f], int(s));
            }
        }
        m
    }

    pub fn barycenter(&self, id: CellId) -> Vec<Rational> {
        let vs = self.cells[id].vertices();
        let n = Rational::from_integer((vs.len() as i64).into());
        (0..self.ambient_dim)
            .map(|j| vs.iter().fold(Rational::zero(), |acc, &v| acc + &self.coords[v][j]) / &n)
            .collect()
    }

    /// Direction vectors `v_i − v_0` of a cell, one per row.
    pub fn direction_matrix(&self, id: CellId) -> Matrix {
        let vs = self.cells[id].vertices();
        let p0 = &self.coords[vs[0]];
        let rows: Vec<Vec<Rational>> =
            vs[1..].iter().map(|&v| self.coords[v].iter().zip(p0).map(|(a, b)| a - b).collect()).collect();
        Matrix::from_rows(rows, self.ambient_dim)
    }

    /// Comma-joined vertex labels, e.g. `"0,1"`.
    pub fn cell_name(&self, id: CellId) -> String {
        self.cells[id].vertices().iter().map(|&v| self.labels[v].as_str()).collect::<Vec<_>>().join(",")
    }

    pub fn parse_cell(&self, name: &str) -> Result<CellId> {
        let vs = name
            .split(',')
            .map(|l| self.vertex_by_label(l.trim()).ok_or_else(|| Error::UnknownVertex(l.trim().to_string())))
            .collect::<Result<Vec<_>>>()?;
        self.find_vertices(&vs).ok_or_else(|| Error::MissingSimplex(name.to_string()))
    }

    fn check_embedding(&self) -> Result<()> {
        for id in self.maximal_cells() {
            if self.direction_matrix(id).rank() != self.cell_dim(id) {
                return Err(Error::AffinelyDependent(self.cell_name(id)));
            }
        }
        let boxes: Vec<(Vec<Rational>, Vec<Rational>)> = (0..self.cells.len()).map(|i| self.bounding_box(i)).collect();
        for a in 0..self.cells.len() {
            for b in a + 1..self.cells.len() {
                if self.is_face(a, b) {
                    continue;
                }
                let disjoint_boxes = (0..self.ambient_dim)
                    .any(|j| boxes[a].1[j] < boxes[b].0[j] || boxes[b].1[j] < boxes[a].0[j]);
                if disjoint_boxes {
                    continue;
                }
                let union = self.cells[a].union(&self.cells[b]);
                if self.affinely_independent(union.vertices()) {
                    continue;
                }
                if self.open_cells_meet(a, b) {
                    return Err(Error::NotEmbedded(self.cell_name(a), self.cell_name(b)));
                }
            }
        }
        Ok(())
    }

    fn bounding_box(&self, id: CellId) -> (Vec<Rational>, Vec<Rational>) {
        let vs = self.cells[id].vertices();
        let lo = (0..self.ambient_dim).map(|j| vs.iter().map(|&v| &self.coords[v][j]).min().unwrap().clone()).collect();
        let hi = (0..self.ambient_dim).map(|j| vs.iter().map(|&v| &self.coords[v][j]).max().unwrap().clone()).collect();
        (lo, hi)
    }

    pub(crate) fn affinely_independent(&self, vs: &[VertexId]) -> bool {
        if vs.len() > self.ambient_dim + 1 {
            return false;
        }
        let p0 = &self.coords[vs[0]];
        let rows: Vec<Vec<Rational>> =
            vs[1..].iter().map(|&v| self.coords[v].iter().zip(p0).map(|(a, b)| a - b).collect()).collect();
        Matrix::from_rows(rows, self.ambient_dim).rank() == vs.len() - 1
    }

    /// Exact test whether the relative interiors of two cells intersect:
    /// maximize `t` subject to `Σλ a = Σμ b`, `Σλ = Σμ = 1`, `λ, μ ≥ t`.
    fn open_cells_meet(&self, a: CellId, b: CellId) -> bool {
        let va = self.cells[a].vertices();
        let vb = self.cells[b].vertices();
        let (na, nb, n) = (va.len(), vb.len(), self.ambient_dim);
        // Variables: λ (na), μ (nb), t, slacks for λ−t (na), μ−t (nb), u with t+u=1.
        let nvars = 2 * (na + nb) + 2;
        let t = na + nb;
        let u = nvars - 1;
        let mut rows = Vec::new();
        let mut rhs = Vec::new();
        let mut push = |row: Vec<Rational>, r: Rational| {
            rows.push(row);
            rhs.push(r);
        };
        let zero_row = || vec![Rational::zero(); nvars];
        for j in 0..n {
            let mut row = zero_row();
            for (i, &v) in va.iter().enumerate() {
                row[i] = self.coords[v][j].clone();
            }
            for (i, &v) in vb.iter().enumerate() {
                row[na + i] = -self.coords[v][j].clone();
            }
            push(row, Rational::zero());
        }
        let mut row = zero_row();
        row[..na].iter_mut().for_each(|x| *x = Rational::one());
        push(row, Rational::one());
        let mut row = zero_row();
        row[na..na + nb].iter_mut().for_each(|x| *x = Rational::one());
        push(row, Rational::one());
        for i in 0..na + nb {
            let mut row = zero_row();
            row[i] = Rational::one();
            row[t] = -Rational::one();
            row[t + 1 + i] = -Rational::one();
            push(row, Rational::zero());
        }
        let mut row = zero_row();
        row[t] = Rational::one();
        row[u] = Rational::one();
        push(row, Rational::one());
        let mut c = zero_row();
        c[t] = Rational::one();
        let lp = LinearProgram { a: Matrix::from_rows(rows, nvars), b: rhs, c };
        matches!(lp.solve(), LpOutcome::Optimal { value, .. } if value > Rational::zero())
    }

    /// Runs the embedding validation on a complex built without it.
    pub fn validate_embedding(&self) -> Result<()> {
        self.check_embedding()
    }

    /// The subcomplex spanned by the given cells and their faces, with a map
    /// from its vertices to ours.
    pub fn subcomplex(&self, cells: &[CellId]) -> (SimplicialComplex, Vec<VertexId>) {
        let mut used = BTreeSet::new();
        for &c in cells {
            used.extend(self.cells[c].vertices().iter().copied());
        }
        let vmap: Vec<VertexId> = used.into_iter().collect();
        let inv: HashMap<VertexId, usize> = vmap.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let labels = vmap.iter().map(|&v| self.labels[v].clone()).collect();
        let coords = vmap.iter().map(|&v| self.coords[v].clone()).collect();
        let maximal = cells.iter().map(|&c| self.cells[c].vertices().iter().map(|v| inv[v]).collect()).collect();
        (SimplicialComplex::assemble(self.ambient_dim, labels, coords, maximal), vmap)
    }
}
