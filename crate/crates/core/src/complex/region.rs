use std::fmt;

use serde::{Deserialize, Serialize};

use super::simplicial::{CellId, SimplicialComplex};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RegionKind {
    /// Coface-closed.
    Open,
    /// Face-closed.
    Closed,
    /// Convex in the face poset, i.e. open inside its closure.
    LocallyClosed,
}

/// A set of open cells of a fixed complex together with its verified
/// topological kind.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CellRegion {
    members: Vec<bool>,
    kind: RegionKind,
}

impl fmt::Debug for CellRegion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}{:?}", self.kind, self.cells().collect::<Vec<_>>())
    }
}

fn mask(n: usize, cells: impl IntoIterator<Item = CellId>) -> Vec<bool> {
    let mut m = vec![false; n];
    for c in cells {
        m[c] = true;
    }
    m
}

impl CellRegion {
    pub(crate) fn from_sorted_unchecked(n: usize, cells: Vec<CellId>) -> Self {
        CellRegion { members: mask(n, cells), kind: RegionKind::Open }
    }

    /// The whole complex (open and closed; recorded as open).
    pub fn whole(x: &SimplicialComplex) -> Self {
        CellRegion { members: vec![true; x.num_cells()], kind: RegionKind::Open }
    }

    pub fn empty(x: &SimplicialComplex) -> Self {
        CellRegion { members: vec![false; x.num_cells()], kind: RegionKind::Open }
    }

    pub fn open(x: &SimplicialComplex, cells: impl IntoIterator<Item = CellId>) -> Result<Self> {
        Self::with_kind(x, mask(x.num_cells(), cells), RegionKind::Open)
    }

    pub fn closed(x: &SimplicialComplex, cells: impl IntoIterator<Item = CellId>) -> Result<Self> {
        Self::with_kind(x, mask(x.num_cells(), cells), RegionKind::Closed)
    }

    pub fn locally_closed(x: &SimplicialComplex, cells: impl IntoIterator<Item = CellId>) -> Result<Self> {
        Self::with_kind(x, mask(x.num_cells(), cells), RegionKind::LocallyClosed)
    }

    /// Infers the most specific kind (open, then closed, then locally closed).
    pub fn infer(x: &SimplicialComplex, cells: impl IntoIterator<Item = CellId>) -> Result<Self> {
        let members = mask(x.num_cells(), cells);
        for kind in [RegionKind::Open, RegionKind::Closed, RegionKind::LocallyClosed] {
            if check(x, &members, kind).is_ok() {
                return Ok(CellRegion { members, kind });
            }
        }
        check(x, &members, RegionKind::LocallyClosed)?;
        unreachable!()
    }

    pub fn with_kind(x: &SimplicialComplex, members: Vec<bool>, kind: RegionKind) -> Result<Self> {
        if members.len() != x.num_cells() {
            return Err(Error::Shape("region mask does not match the complex".into()));
        }
        check(x, &members, kind)?;
        Ok(CellRegion { members, kind })
    }

    /// Closure of the given cells.
    pub fn closure_of(x: &SimplicialComplex, cells: impl IntoIterator<Item = CellId>) -> Self {
        let mut m = vec![false; x.num_cells()];
        for c in cells {
            for f in x.faces(c) {
                m[f] = true;
            }
        }
        CellRegion { members: m, kind: RegionKind::Closed }
    }

    /// Union of open stars of the given cells.
    pub fn star_of(x: &SimplicialComplex, cells: impl IntoIterator<Item = CellId>) -> Self {
        let mut m = vec![false; x.num_cells()];
        for c in cells {
            for f in x.cofaces(c) {
                m[f] = true;
            }
        }
        CellRegion { members: m, kind: RegionKind::Open }
    }

    pub fn kind(&self) -> RegionKind {
        self.kind
    }

    pub fn contains(&self, c: CellId) -> bool {
        self.members[c]
    }

    pub fn mask(&self) -> &[bool] {
        &self.members
    }

    pub fn cells(&self) -> impl Iterator<Item = CellId> + '_ {
        self.members.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| i)
    }

    pub fn len(&self) -> usize {
        self.members.iter().filter(|&&b| b).count()
    }

    pub fn is_empty(&self) -> bool {
        !self.members.iter().any(|&b| b)
    }

    pub fn is_whole(&self) -> bool {
        self.members.iter().all(|&b| b)
    }

    pub fn is_open(&self, x: &SimplicialComplex) -> bool {
        check(x, &self.members, RegionKind::Open).is_ok()
    }

    pub fn is_closed(&self, x: &SimplicialComplex) -> bool {
        check(x, &self.members, RegionKind::Closed).is_ok()
    }

    pub fn is_locally_closed(&self, x: &SimplicialComplex) -> bool {
        check(x, &self.members, RegionKind::LocallyClosed).is_ok()
    }

    pub fn is_subset(&self, other: &CellRegion) -> bool {
        self.members.iter().zip(&other.members).all(|(&a, &b)| !a || b)
    }

    /// Complement; the kind flips between open and closed.
    pub fn complement(&self, x: &SimplicialComplex) -> Result<Self> {
        let m: Vec<bool> = self.members.iter().map(|b| !b).collect();
        match self.kind {
            RegionKind::Open => Self::with_kind(x, m, RegionKind::Closed),
            RegionKind::Closed => Self::with_kind(x, m, RegionKind::Open),
            RegionKind::LocallyClosed => Err(Error::RegionKind {
                expected: "open or closed",
                detail: "complement of a locally closed region".into(),
            }),
        }
    }

    /// Set difference `self ∖ other`, kind inferred.
    pub fn minus(&self, x: &SimplicialComplex, other: &CellRegion) -> Result<Self> {
        let cells: Vec<CellId> = self.cells().filter(|&c| !other.contains(c)).collect();
        Self::infer(x, cells)
    }

    pub fn intersect(&self, x: &SimplicialComplex, other: &CellRegion) -> Result<Self> {
        let cells: Vec<CellId> = self.cells().filter(|&c| other.contains(c)).collect();
        Self::infer(x, cells)
    }

    pub fn union(&self, x: &SimplicialComplex, other: &CellRegion) -> Result<Self> {
        let cells: Vec<CellId> = (0..self.members.len()).filter(|&c| self.contains(c) || other.contains(c)).collect();
        Self::infer(x, cells)
    }

    pub fn closure(&self, x: &SimplicialComplex) -> Self {
        Self::closure_of(x, self.cells())
    }

    /// Decomposition `self = Y ∖ Y′` with `Y` the closure and `Y′` closed.
    pub fn closed_pair(&self, x: &SimplicialComplex) -> Result<(CellRegion, CellRegion)> {
        if !self.is_locally_closed(x) {
            return Err(Error::RegionKind { expected: "locally closed", detail: format!("{self:?}") });
        }
        let y = self.closure(x);
        let rest: Vec<CellId> = y.cells().filter(|&c| !self.contains(c)).collect();
        let y_prime = CellRegion::closed(x, rest)?;
        Ok((y, y_prime))
    }

    pub fn names(&self, x: &SimplicialComplex) -> Vec<String> {
        self.cells().map(|c| x.cell_name(c)).collect()
    }
}

fn check(x: &SimplicialComplex, m: &[bool], kind: RegionKind) -> Result<()> {
    let name = |c: CellId| x.cell_name(c);
    match kind {
        RegionKind::Open => {
            for c in (0..m.len()).filter(|&c| m[c]) {
                if let Some(&(t, _)) = x.cofacets(c).iter().find(|(t, _)| !m[*t]) {
                    return Err(Error::RegionKind {
                        expected: "open",
                        detail: format!("{} is in the region but its coface {} is not", name(c), name(t)),
                    });
                }
            }
        }
        RegionKind::Closed => {
            for c in (0..m.len()).filter(|&c| m[c]) {
                if let Some(&(f, _)) = x.facets(c).iter().find(|(f, _)| !m[*f]) {
                    return Err(Error::RegionKind {
                        expected: "closed",
                        detail: format!("{} is in the region but its face {} is not", name(c), name(f)),
                    });
                }
            }
        }
        RegionKind::LocallyClosed => {
            // Convexity: no cell outside lies between two cells inside.
            let mut below = vec![false; m.len()];
            for c in 0..m.len() {
                below[c] = x.facets(c).iter().any(|(f, _)| m[*f] || below[*f]);
            }
            for c in (0..m.len()).filter(|&c| !m[c] && below[c]) {
                if x.cofaces(c).iter().any(|&t| m[t]) {
                    return Err(Error::RegionKind {
                        expected: "locally closed",
                        detail: format!("{} lies between cells of the region", name(c)),
                    });
                }
            }
        }
    }
    Ok(())
}
