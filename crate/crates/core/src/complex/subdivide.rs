use std::collections::BTreeSet;

use num_traits::{Signed, Zero};

use super::simplicial::{CellId, SimplicialComplex};
use super::simplex::VertexId;
use crate::linalg::{dot, Rational};

/// A refinement `X′ → X`: every open cell of `X′` lies inside exactly one
/// open cell of `X`, its carrier.
#[derive(Clone, Debug)]
pub struct Refinement {
    pub complex: SimplicialComplex,
    pub carrier: Vec<CellId>,
}

impl Refinement {
    pub fn identity(x: &SimplicialComplex) -> Self {
        Refinement { complex: x.clone(), carrier: (0..x.num_cells()).collect() }
    }
}

/// Stellar subdivision of every edge crossing the hyperplane `ℓ·x = c`.
/// Afterwards each open cell lies in `{ℓ<c}`, `{ℓ=c}` or `{ℓ>c}`.
pub fn subdivide_along_level(x: &SimplicialComplex, l: &[Rational], c: &Rational) -> Refinement {
    assert_eq!(l.len(), x.ambient_dim(), "functional has the wrong length");
    let value = |p: &[Rational]| dot(l, p) - c;
    let mut labels: Vec<String> = x.labels().to_vec();
    let mut coords: Vec<Vec<Rational>> = x.all_coords().to_vec();
    // Carrier of each vertex, as a set of original vertices.
    let mut vcarrier: Vec<Vec<VertexId>> = (0..x.num_vertices()).map(|v| vec![v]).collect();
    let mut maximal: Vec<Vec<VertexId>> = x.maximal_cells().iter().map(|&m| x.cell(m).vertices().to_vec()).collect();

    let crossing: Vec<CellId> = x
        .edges()
        .filter(|&e| {
            let vs = x.cell(e).vertices();
            let (a, b) = (value(x.coords(vs[0])), value(x.coords(vs[1])));
            (a.is_negative() && b.is_positive()) || (a.is_positive() && b.is_negative())
        })
        .collect();
    if crossing.is_empty() {
        return Refinement::identity(x);
    }
    for e in crossing {
        let vs = x.cell(e).vertices();
        let (a, b) = (vs[0], vs[1]);
        let (fa, fb) = (value(&coords[a]), value(&coords[b]));
        let t = &fa / (&fa - &fb);
        let p: Vec<Rational> = coords[a].iter().zip(&coords[b]).map(|(pa, pb)| pa + &t * (pb - pa)).collect();
        let m = labels.len();
        labels.push(format!("{}~{}", x.label(a), x.label(b)));
        coords.push(p);
        vcarrier.push(vec![a, b]);
        let mut next = Vec::with_capacity(maximal.len() + 4);
        for cell in maximal {
            if cell.contains(&a) && cell.contains(&b) {
                let mut left: Vec<VertexId> = cell.iter().copied().filter(|&v| v != b).collect();
                left.push(m);
                let mut right: Vec<VertexId> = cell.iter().copied().filter(|&v| v != a).collect();
                right.push(m);
                next.push(left);
                next.push(right);
            } else {
                next.push(cell);
            }
        }
        maximal = next;
    }
    let complex = SimplicialComplex::assemble(x.ambient_dim(), labels, coords, maximal);
    let carrier = carriers(&complex, x, &vcarrier);
    Refinement { complex, carrier }
}

/// Barycentric subdivision: one vertex per cell (at its barycenter), one
/// simplex per strictly increasing chain of cells.
pub fn barycentric_subdivision(x: &SimplicialComplex) -> Refinement {
    let n = x.num_cells();
    let labels: Vec<String> = (0..n).map(|c| x.cell(c).vertices().iter().map(|&v| x.label(v)).collect::<Vec<_>>().join(".")).collect();
    let coords: Vec<Vec<Rational>> = (0..n).map(|c| x.barycenter(c)).collect();
    let mut maximal = Vec::new();
    for top in x.maximal_cells() {
        let mut chains: Vec<Vec<CellId>> = vec![vec![top]];
        loop {
            let mut extended = Vec::new();
            let mut done = true;
            for chain in &chains {
                let last = *chain.last().unwrap();
                if x.facets(last).is_empty() {
                    extended.push(chain.clone());
                } else {
                    done = false;
                    for &(f, _) in x.facets(last) {
                        let mut c = chain.clone();
                        c.push(f);
                        extended.push(c);
                    }
                }
            }
            chains = extended;
            if done {
                break;
            }
        }
        maximal.extend(chains);
    }
    let vcarrier: Vec<Vec<VertexId>> = (0..n).map(|c| x.cell(c).vertices().to_vec()).collect();
    let complex = SimplicialComplex::assemble(x.ambient_dim(), labels, coords, maximal);
    let carrier = carriers(&complex, x, &vcarrier);
    Refinement { complex, carrier }
}

fn carriers(refined: &SimplicialComplex, x: &SimplicialComplex, vcarrier: &[Vec<VertexId>]) -> Vec<CellId> {
    refined
        .cells()
        .iter()
        .map(|s| {
            let span: BTreeSet<VertexId> = s.vertices().iter().flat_map(|&v| vcarrier[v].iter().copied()).collect();
            x.find_vertices(&span.into_iter().collect::<Vec<_>>()).expect("refined cell inside an old cell")
        })
        .collect()
}

/// Side of the level hyperplane on which each open cell of a cut complex
/// lies: -1, 0 or +1.
pub fn level_sides(x: &SimplicialComplex, l: &[Rational], c: &Rational) -> Vec<i8> {
    x.cells()
        .iter()
        .map(|s| {
            let mut side = 0i8;
            for &v in s.vertices() {
                let f = dot(l, x.coords(v)) - c;
                if f.is_zero() {
                    continue;
                }
                let sv = if f.is_positive() { 1 } else { -1 };
                assert!(side == 0 || side == sv, "cell straddles the level");
                side = sv;
            }
            side
        })
        .collect()
}
