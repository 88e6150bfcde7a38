use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::complex::{CellId, SimplicialComplex, VertexId};
use crate::error::{Error, Result};
use crate::linalg::{dot, int, LinearProgram, LpOutcome, Matrix, Rational};

/// An open cone of the arrangement `{ξ(w − p) = 0 : w ∈ link(σ)}` inside
/// the conormal space of `σ`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConormalChamber {
    pub cell: CellId,
    /// Link vertices with the sign of `ξ(w − p)`, sorted by vertex.
    pub signs: Vec<(VertexId, i8)>,
    #[serde(skip)]
    pub witness: Vec<Rational>,
}

impl ConormalChamber {
    /// The chamber of a cell with empty link: all of its conormal space.
    pub fn is_zero(&self) -> bool {
        self.signs.is_empty()
    }
}

/// The conormal space `ν(σ)` in coordinates `ξ = N y`, together with the
/// link normals `g_w = Nᵀ(w − p)`.
#[derive(Clone, Debug)]
pub struct ConormalFan {
    pub cell: CellId,
    basis: Matrix,
    directions: Matrix,
    base_point: VertexId,
    link: Vec<VertexId>,
    normals: Vec<Vec<Rational>>,
}

impl ConormalFan {
    pub fn new(x: &SimplicialComplex, sigma: CellId) -> Self {
        let directions = x.direction_matrix(sigma);
        let basis = directions.kernel();
        let p = x.cell(sigma).vertices()[0];
        let link = x.link_vertices(sigma);
        let normals = link
            .iter()
            .map(|&w| {
                let d: Vec<Rational> = x.coords(w).iter().zip(x.coords(p)).map(|(a, b)| a - b).collect();
                (0..basis.cols()).map(|j| dot(&basis.col_vec(j), &d)).collect()
            })
            .collect();
        ConormalFan { cell: sigma, basis, directions, base_point: p, link, normals }
    }

    pub fn link(&self) -> &[VertexId] {
        &self.link
    }

    pub fn conormal_dim(&self) -> usize {
        self.basis.cols()
    }

    /// A covector with `s_i ξ(w_i − p) ≥ rhs_i` for the first `signs.len()`
    /// link vertices, if one exists.
    pub fn realize(&self, signs: &[i8], rhs: &[Rational]) -> Option<Vec<Rational>> {
        let (k, r) = (signs.len(), self.basis.cols());
        if k == 0 {
            return Some(vec![Rational::zero(); self.basis.rows()]);
        }
        // y = y⁺ − y⁻ and one surplus variable per constraint.
        let mut a = Matrix::zeros(k, 2 * r + k);
        for (i, &s) in signs.iter().enumerate() {
            for j in 0..r {
                let g = &self.normals[i][j] * int(s as i64);
                a.set(i, j, g.clone());
                a.set(i, r + j, -g);
            }
            a.set(i, 2 * r + i, int(-1));
        }
        let lp = LinearProgram { a, b: rhs.to_vec(), c: vec![Rational::zero(); 2 * r + k] };
        match lp.solve() {
            LpOutcome::Optimal { x, .. } => {
                let y: Vec<Rational> = (0..r).map(|j| &x[j] - &x[r + j]).collect();
                Some((0..self.basis.rows()).map(|i| dot(self.basis.row(i), &y)).collect())
            }
            _ => None,
        }
    }

    /// All feasible sign vectors, by depth-first search with a feasibility
    /// test at every node. `+` is explored before `−`.
    pub fn chambers(&self) -> Vec<ConormalChamber> {
        let ones = vec![int(1); self.link.len()];
        let mut out = Vec::new();
        let mut stack = vec![Vec::<i8>::new()];
        while let Some(prefix) = stack.pop() {
            let Some(witness) = self.realize(&prefix, &ones[..prefix.len()]) else {
                continue;
            };
            if prefix.len() == self.link.len() {
                let signs = self.link.iter().copied().zip(prefix).collect();
                out.push(ConormalChamber { cell: self.cell, signs, witness });
                continue;
            }
            for s in [-1i8, 1] {
                let mut next = prefix.clone();
                next.push(s);
                stack.push(next);
            }
        }
        out
    }

    /// Sign vector of `ξ` on the link, after checking that `ξ` lies in the
    /// conormal space and off every wall.
    pub fn signs_of(&self, x: &SimplicialComplex, xi: &[Rational]) -> Result<Vec<(VertexId, i8)>> {
        if xi.len() != x.ambient_dim() {
            return Err(Error::Shape(format!("covector of length {} in ambient dimension {}", xi.len(), x.ambient_dim())));
        }
        if (0..self.directions.rows()).any(|i| !dot(self.directions.row(i), xi).is_zero()) {
            return Err(Error::NotConormal(x.cell_name(self.cell)));
        }
        let p = x.coords(self.base_point);
        let at_p = dot(xi, p);
        self.link
            .iter()
            .map(|&w| {
                let v = dot(xi, x.coords(w)) - &at_p;
                if v.is_zero() {
                    let mut e = [self.base_point, w];
                    e.sort_unstable();
                    let edge = x.find_vertices(&e).expect("link edge");
                    Err(Error::NonGeneric(x.cell_name(edge)))
                } else {
                    Ok((w, if v.is_positive() { 1 } else { -1 }))
                }
            })
            .collect()
    }

    /// Another point of the chamber, pushed off the walls by `rhs`.
    pub fn witness_with(&self, chamber: &ConormalChamber, rhs: &[Rational]) -> Option<Vec<Rational>> {
        let signs: Vec<i8> = chamber.signs.iter().map(|&(_, s)| s).collect();
        self.realize(&signs, rhs)
    }
}

/// Chambers of a cell; a cell with empty link has only its zero chamber.
pub fn chambers(x: &SimplicialComplex, sigma: CellId) -> Vec<ConormalChamber> {
    ConormalFan::new(x, sigma).chambers()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    #[test]
    fn interval_endpoints_and_interior() {
        let x = corpus::interval();
        let ch = chambers(&x, 0);
        assert_eq!(ch.iter().map(|c| c.signs.clone()).collect::<Vec<_>>(), vec![vec![(1, 1)], vec![(1, -1)]]);
        let edge = chambers(&x, 2);
        assert_eq!(edge.len(), 1);
        assert!(edge[0].is_zero());
        let y = corpus::subdivided_interval();
        let mid: Vec<_> = chambers(&y, 1).into_iter().map(|c| c.signs).collect();
        assert_eq!(mid, vec![vec![(0, 1), (2, -1)], vec![(0, -1), (2, 1)]]);
    }

    #[test]
    fn witnesses_realize_their_signs() {
        let x = corpus::octahedron();
        for c in 0..x.num_cells() {
            let fan = ConormalFan::new(&x, c);
            for ch in fan.chambers() {
                if ch.is_zero() {
                    continue;
                }
                assert_eq!(fan.signs_of(&x, &ch.witness).unwrap(), ch.signs);
            }
        }
    }
}
