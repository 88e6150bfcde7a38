use std::fmt;

use serde::{Deserialize, Serialize};

/// Index of a vertex inside its complex.
pub type VertexId = usize;

/// An abstract simplex: strictly increasing vertex ids.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Simplex(Vec<VertexId>);

impl Simplex {
    /// Sorts and deduplicates; returns `None` for an empty vertex list.
    pub fn new(mut vertices: Vec<VertexId>) -> Option<Self> {
        vertices.sort_unstable();
        vertices.dedup();
        if vertices.is_empty() {
            None
        } else {
            Some(Simplex(vertices))
        }
    }

    pub fn vertex(v: VertexId) -> Self {
        Simplex(vec![v])
    }

    pub fn vertices(&self) -> &[VertexId] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len() - 1
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    pub fn is_face_of(&self, other: &Simplex) -> bool {
        self.0.iter().all(|v| other.contains(*v))
    }

    /// Codimension-one faces with incidence signs `(-1)^i` for omitting the
    /// `i`-th vertex.
    pub fn facets(&self) -> Vec<(Simplex, i64)> {
        if self.0.len() == 1 {
            return Vec::new();
        }
        (0..self.0.len())
            .map(|i| {
                let mut v = self.0.clone();
                v.remove(i);
                (Simplex(v), if i % 2 == 0 { 1 } else { -1 })
            })
            .collect()
    }

    /// All nonempty faces, including `self`.
    pub fn faces(&self) -> Vec<Simplex> {
        let n = self.0.len();
        (1u32..(1 << n))
            .map(|mask| Simplex((0..n).filter(|i| mask & (1 << i) != 0).map(|i| self.0[i]).collect()))
            .collect()
    }

    pub fn union(&self, other: &Simplex) -> Simplex {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Simplex::new(v).expect("nonempty")
    }
}

impl fmt::Debug for Simplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_order_and_faces() {
        let s = Simplex::new(vec![2, 0, 1, 2]).unwrap();
        assert_eq!(s.vertices(), &[0, 1, 2]);
        assert_eq!(s.dim(), 2);
        assert_eq!(s.faces().len(), 7);
        let f = s.facets();
        assert_eq!(f[0], (Simplex(vec![1, 2]), 1));
        assert_eq!(f[1], (Simplex(vec![0, 2]), -1));
        assert!(Simplex::new(vec![]).is_none());
    }
}
