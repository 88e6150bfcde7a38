//! Independent oracles shared by the integration suites.
#![allow(dead_code)]

use std::sync::Arc;

use cellsheaf::complex::{CellId, CellRegion, SimplicialComplex};
use cellsheaf::linalg::{dot, Matrix, Rational};
use cellsheaf::microlocal::{ConormalChamber, ConormalCycle, ConormalGeometry};

/// Cells of the link of `σ` inside the closed subcomplex `y`: cells
/// disjoint from `σ` whose join with `σ` lies in `y`.
pub fn link_in(x: &SimplicialComplex, y: &CellRegion, sigma: CellId) -> Vec<CellId> {
    let sv = x.cell(sigma).vertices();
    (0..x.num_cells())
        .filter(|&t| {
            let tv = x.cell(t).vertices();
            if tv.iter().any(|v| sv.contains(v)) {
                return false;
            }
            let mut join: Vec<_> = sv.iter().chain(tv).copied().collect();
            join.sort_unstable();
            x.find_vertices(&join).is_some_and(|j| y.contains(j))
        })
        .collect()
}

/// Multiplicity of the conormal cycle of a closed subcomplex `Y` at a
/// chamber: `1 − χ(lower part of link_Y(σ))` over `Y`, zero elsewhere. The
/// lower link is the full subcomplex on the negative vertices.
pub fn conormal_entry(x: &SimplicialComplex, y: &CellRegion, ch: &ConormalChamber) -> i64 {
    if !y.contains(ch.cell) {
        return 0;
    }
    let negative = |v: usize| ch.signs.iter().any(|&(w, s)| w == v && s < 0);
    let chi: i64 = link_in(x, y, ch.cell)
        .into_iter()
        .filter(|&t| x.cell(t).vertices().iter().all(|&v| negative(v)))
        .map(|t| if x.cell_dim(t).is_multiple_of(2) { 1 } else { -1 })
        .sum();
    1 - chi
}

pub fn conormal_table(geo: &Arc<ConormalGeometry>, y: &CellRegion) -> ConormalCycle {
    let x = geo.base().clone();
    ConormalCycle::from_fn(geo, |ch| conormal_entry(&x, y, ch))
}

/// Number of chambers of the central arrangement of link hyperplanes in
/// the conormal space of `σ`, from Whitney's formula
/// `Σ_{S} (−1)^{|S| − rank S}`.
pub fn chamber_count(x: &SimplicialComplex, sigma: CellId) -> usize {
    let basis = x.direction_matrix(sigma).kernel();
    let p = x.coords(x.cell(sigma).vertices()[0]).to_vec();
    let normals: Vec<Vec<Rational>> = x
        .link_vertices(sigma)
        .iter()
        .map(|&w| {
            let d: Vec<Rational> = x.coords(w).iter().zip(&p).map(|(a, b)| a - b).collect();
            (0..basis.cols()).map(|j| dot(&basis.col_vec(j), &d)).collect()
        })
        .collect();
    let l = normals.len();
    let mut total: i64 = 0;
    for mask in 0u32..(1 << l) {
        let rows: Vec<Vec<Rational>> = (0..l).filter(|i| mask >> i & 1 == 1).map(|i| normals[i].clone()).collect();
        let size = rows.len() as i64;
        let rank = Matrix::from_rows(rows, basis.cols()).rank() as i64;
        total += if (size - rank) % 2 == 0 { 1 } else { -1 };
    }
    total as usize
}

use cellsheaf::complex::Refinement;
use cellsheaf::functors::pullback_refinement;
use cellsheaf::linalg::int;
use cellsheaf::microlocal::{multiplicity_at_covector, ConormalFan};
use cellsheaf::sheaf::SheafComplex;
use rand::Rng;

/// The multiplicity at `ch` recomputed on a refinement: at a top-dimensional
/// piece of `σ`, with a witness of `ch` that is also generic there.
pub fn refined_multiplicity<R: Rng>(
    x: &SimplicialComplex,
    f: &SheafComplex,
    ch: &ConormalChamber,
    r: &Refinement,
    rng: &mut R,
) -> i64 {
    let y = &r.complex;
    let sigma = ch.cell;
    let piece = (0..y.num_cells())
        .find(|&c| r.carrier[c] == sigma && y.cell_dim(c) == x.cell_dim(sigma))
        .expect("a top piece");
    let g = pullback_refinement(r, f).unwrap();
    let fan = ConormalFan::new(x, sigma);
    let fine = ConormalFan::new(y, piece);
    for _ in 0..200 {
        let rhs: Vec<Rational> = (0..ch.signs.len()).map(|_| int(rng.gen_range(1..=9))).collect();
        let xi = fan.witness_with(ch, &rhs).unwrap();
        if fine.signs_of(y, &xi).is_ok() {
            return multiplicity_at_covector(&g, piece, &xi).unwrap();
        }
    }
    panic!("no witness generic on the refinement");
}
