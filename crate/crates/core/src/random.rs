//! Seeded generators for sheaves, morphisms and covectors.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::Zero;
use rand::Rng;

use crate::complex::{CellId, CellRegion, SimplicialComplex};
use crate::linalg::{dot, int, Matrix, Rational, Subquotient};
use crate::sheaf::{direct_sum, extension_by_zero, CellularSheaf, SheafComplex, SheafMorphism};

pub fn random_matrix<R: Rng>(rows: usize, cols: usize, rng: &mut R) -> Matrix {
    let data = (0..rows).map(|_| (0..cols).map(|_| int(rng.gen_range(-3..=3))).collect()).collect();
    Matrix::from_rows(data, cols)
}

pub fn random_invertible<R: Rng>(n: usize, rng: &mut R) -> Matrix {
    loop {
        let m = random_matrix(n, n, rng);
        if m.rank() == n {
            return m;
        }
    }
}

/// `P_σ`: the constant sheaf on the open star of σ, extended by zero.
pub fn projective(x: &Arc<SimplicialComplex>, sigma: CellId) -> CellularSheaf {
    let star = x.star_link(sigma).0;
    extension_by_zero(x.clone(), &star, 1).expect("open star").terms()[0].clone()
}

/// `E_σ`: the constant sheaf on the closed cell, extended by zero.
pub fn elementary_injective(x: &Arc<SimplicialComplex>, sigma: CellId) -> CellularSheaf {
    let closure = CellRegion::closure_of(x, [sigma]);
    extension_by_zero(x.clone(), &closure, 1).expect("closed cell").terms()[0].clone()
}

/// A complex `⊕ P_{σ_i} → ⊕ E_{τ_j}` with at most two summands per term
/// and a random coefficient `σ_i → τ_j` whenever `σ_i ⊆ τ_j`, placed in a
/// random degree.
pub fn random_two_term_complex<R: Rng>(x: &Arc<SimplicialComplex>, rng: &mut R) -> SheafComplex {
    let n = x.num_cells();
    let a = rng.gen_range(1..=2);
    let b = rng.gen_range(0..=2);
    let sigmas: Vec<CellId> = (0..a).map(|_| rng.gen_range(0..n)).collect();
    let taus: Vec<CellId> = (0..b)
        .map(|_| {
            // Bias the targets towards cofaces of the sources.
            if rng.gen_bool(0.7) {
                let co = x.cofaces(sigmas[rng.gen_range(0..a)]);
                co[rng.gen_range(0..co.len())]
            } else {
                rng.gen_range(0..n)
            }
        })
        .collect();
    let mut m = random_matrix(b, a, rng);
    for (j, &t) in taus.iter().enumerate() {
        for (i, &s) in sigmas.iter().enumerate() {
            if !x.is_face(s, t) {
                m.set(j, i, int(0));
            }
        }
    }
    let p: Vec<CellularSheaf> = sigmas.iter().map(|&s| projective(x, s)).collect();
    let e: Vec<CellularSheaf> = taus.iter().map(|&t| elementary_injective(x, t)).collect();
    let deg = rng.gen_range(-1..=1);
    let f0 = direct_sum(&p).unwrap();
    if b == 0 {
        return SheafComplex::concentrated(f0, deg);
    }
    let f1 = direct_sum(&e).unwrap();
    let diff = (0..n)
        .map(|c| {
            let rows: Vec<usize> = (0..b).filter(|&j| x.is_face(c, taus[j])).collect();
            let cols: Vec<usize> = (0..a).filter(|&i| x.is_face(sigmas[i], c)).collect();
            m.select(&rows, &cols)
        })
        .collect();
    SheafComplex::new(deg, vec![f0, f1], vec![diff]).expect("two-term complex")
}

/// Conjugates every stalk by a random invertible matrix.
pub fn random_gauge<R: Rng>(f: &SheafComplex, rng: &mut R) -> SheafComplex {
    let n = f.base().num_cells();
    let gauges: Vec<Vec<Matrix>> =
        f.degrees().map(|k| (0..n).map(|c| random_invertible(f.stalk_dim(k, c), rng)).collect()).collect();
    let terms: Vec<CellularSheaf> = f.terms().iter().zip(&gauges).map(|(t, g)| t.gauge(g).expect("invertible")).collect();
    let diffs = f
        .degrees()
        .take(terms.len() - 1)
        .enumerate()
        .map(|(i, k)| {
            (0..n)
                .map(|c| &(&gauges[i + 1][c] * &f.diff(k, c)) * &gauges[i][c].inverse().expect("invertible"))
                .collect()
        })
        .collect();
    SheafComplex::new(f.min_degree(), terms, diffs).expect("gauge preserves validity")
}

/// A random morphism either `F → E_σ ⊗ V[−k]` (from `Hom(F^k(σ), V)` killing
/// the incoming boundary) or `P_σ ⊗ V[−k] → F` (into the cycles of
/// `F^k(σ)`), with `F` drawn from `pool`.
pub fn random_morphism<R: Rng>(pool: &[SheafComplex], rng: &mut R) -> SheafMorphism {
    let f = &pool[rng.gen_range(0..pool.len())];
    let x = f.base().clone();
    let n = x.num_cells();
    let sigma = rng.gen_range(0..n);
    let k = rng.gen_range(f.min_degree()..=f.max_degree());
    let v = rng.gen_range(1..=2);
    let fterm = f.term(k).unwrap();
    if rng.gen_bool(0.5) {
        let target_sheaf = direct_sum(&vec![elementary_injective(&x, sigma); v]).unwrap();
        let target = SheafComplex::concentrated(target_sheaf, k).padded(f.min_degree(), f.max_degree());
        let coker = Subquotient::cokernel(&f.diff(k - 1, sigma));
        let a = &random_matrix(v, coker.dim(), rng) * &coker.proj;
        let comps: Vec<Matrix> = (0..n)
            .map(|c| if x.is_face(c, sigma) { &a * &fterm.restriction(c, sigma) } else { Matrix::zeros(0, fterm.stalk_dim(c)) })
            .collect();
        SheafMorphism::new(f.clone(), target, BTreeMap::from([(k, comps)])).expect("valid morphism")
    } else {
        let source_sheaf = direct_sum(&vec![projective(&x, sigma); v]).unwrap();
        let source = SheafComplex::concentrated(source_sheaf, k).padded(f.min_degree(), f.max_degree());
        let cycles = f.diff(k, sigma).kernel();
        let b = &cycles * &random_matrix(cycles.cols(), v, rng);
        let comps: Vec<Matrix> = (0..n)
            .map(|c| if x.is_face(sigma, c) { &fterm.restriction(sigma, c) * &b } else { Matrix::zeros(fterm.stalk_dim(c), 0) })
            .collect();
        SheafMorphism::new(source, f.clone(), BTreeMap::from([(k, comps)])).expect("valid morphism")
    }
}

/// Whether `ξ` is nonconstant on every edge.
pub fn is_generic(x: &SimplicialComplex, xi: &[Rational]) -> bool {
    x.edges().all(|e| {
        let v = x.cell(e).vertices();
        !(dot(xi, x.coords(v[0])) - dot(xi, x.coords(v[1]))).is_zero()
    })
}

/// A random integer covector, redrawn until generic.
pub fn random_generic_covector<R: Rng>(x: &SimplicialComplex, rng: &mut R) -> Vec<Rational> {
    loop {
        let xi: Vec<Rational> = (0..x.ambient_dim()).map(|_| int(rng.gen_range(-9..=9))).collect();
        if is_generic(x, &xi) {
            return xi;
        }
    }
}
