//! The bundled example complexes and sheaves.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::Signed;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::complex::{staircase_product, CellId, CellRegion, SimplicialComplex};
use crate::functors::{pullback, pushforward_derived, SimplicialMap};
use crate::linalg::{int, Matrix};
use crate::random::random_two_term_complex;
use crate::sheaf::{extension_by_zero, local_system, SheafComplex};

pub const NAMES: &[&str] = &["interval", "subdivided_interval", "circle", "mobius", "octahedron", "hemispheres", "torus"];

pub fn interval() -> SimplicialComplex {
    SimplicialComplex::from_int_coords(&[&[0], &[1]], &[&[0, 1]]).expect("interval")
}

pub fn subdivided_interval() -> SimplicialComplex {
    SimplicialComplex::from_int_coords(&[&[0], &[1], &[2]], &[&[0, 1], &[1, 2]]).expect("subdivided interval")
}

/// Boundary of a triangle in the plane.
pub fn circle() -> SimplicialComplex {
    SimplicialComplex::from_int_coords(&[&[0, 0], &[1, 0], &[0, 1]], &[&[0, 1], &[1, 2], &[0, 2]]).expect("circle")
}

/// Vertices `±e1, ±e2, ±e3` in that order.
pub fn octahedron() -> SimplicialComplex {
    let coords: &[&[i64]] = &[&[1, 0, 0], &[-1, 0, 0], &[0, 1, 0], &[0, -1, 0], &[0, 0, 1], &[0, 0, -1]];
    let mut tris = Vec::new();
    for a in [0usize, 1] {
        for b in [2usize, 3] {
            for c in [4usize, 5] {
                tris.push(vec![a, b, c]);
            }
        }
    }
    let t: Vec<&[usize]> = tris.iter().map(Vec::as_slice).collect();
    SimplicialComplex::from_int_coords(coords, &t).expect("octahedron")
}

/// Staircase triangulation of `circle × circle` in ℝ⁴.
pub fn torus() -> SimplicialComplex {
    staircase_product(&circle(), &circle()).complex
}

/// Cells of the octahedron lying in the plane `z = 0`.
pub fn equator(x: &SimplicialComplex) -> CellRegion {
    let cells = (0..x.num_cells()).filter(|&c| x.cell(c).vertices().iter().all(|&v| x.coords(v)[2] == int(0)));
    CellRegion::closed(x, cells).expect("equator is closed")
}

/// Open southern hemisphere: cells with a vertex below the equator.
pub fn southern(x: &SimplicialComplex) -> CellRegion {
    let cells = (0..x.num_cells()).filter(|&c| x.cell(c).vertices().iter().any(|&v| x.coords(v)[2].is_negative()));
    CellRegion::open(x, cells).expect("hemisphere is open")
}

/// Rank-one system on the circle whose transport along `{0,2}` is −1.
pub fn mobius_system(x: &Arc<SimplicialComplex>) -> SheafComplex {
    let e = x.find_vertices(&[0, 2]).expect("edge {0,2}");
    let t = BTreeMap::from([(e, Matrix::scalar(int(-1)))]);
    SheafComplex::concentrated(local_system(x.clone(), 1, &t).expect("flat"), 0)
}

/// A named complex with its distinguished regions and bundled sheaves.
#[derive(Clone, Debug)]
pub struct CorpusItem {
    pub name: String,
    pub complex: Arc<SimplicialComplex>,
    /// The open region used for `j_!` and `Rj_*`.
    pub open: CellRegion,
    /// The closed region used for `i_*`.
    pub closed: CellRegion,
    pub sheaves: Vec<(String, SheafComplex)>,
}

impl CorpusItem {
    pub fn sheaf(&self, name: &str) -> Option<&SheafComplex> {
        self.sheaves.iter().find(|(n, _)| n == name).map(|(_, f)| f)
    }
}

/// Number of seeded random complexes bundled with each item.
pub const RANDOM_PER_ITEM: usize = 3;

pub fn item(name: &str) -> Option<CorpusItem> {
    let (complex, open, closed): (SimplicialComplex, Vec<CellId>, Vec<CellId>) = match name {
        // Open edge; closed left endpoint.
        "interval" => (interval(), vec![2], vec![0]),
        "subdivided_interval" => {
            let x = subdivided_interval();
            let star = x.star_link(1).0.cells().collect();
            (x, star, vec![1])
        }
        "circle" | "mobius" => {
            let x = circle();
            let star = x.star_link(0).0.cells().collect();
            let edge = x.find_vertices(&[1, 2]).unwrap();
            (x, star, vec![1, 2, edge])
        }
        "octahedron" => {
            let x = octahedron();
            let star = x.star_link(4).0.cells().collect();
            let eq = equator(&x).cells().collect();
            (x, star, eq)
        }
        "hemispheres" => {
            let x = octahedron();
            let s = southern(&x).cells().collect();
            let eq = equator(&x).cells().collect();
            (x, s, eq)
        }
        "torus" => {
            let x = torus();
            let star = x.star_link(0).0.cells().collect();
            // The circle {0} × S¹.
            let ring: Vec<CellId> = (0..x.num_cells()).filter(|&c| x.cell(c).vertices().iter().all(|&v| v < 3)).collect();
            (x, star, ring)
        }
        _ => return None,
    };
    let x = Arc::new(complex);
    let open = CellRegion::open(&x, open).expect("open region");
    let closed = CellRegion::closed(&x, closed).expect("closed region");
    let mut sheaves = vec![("constant".to_string(), SheafComplex::constant(x.clone(), 1))];
    sheaves.push(("extension_by_zero".into(), extension_by_zero(x.clone(), &open, 1).unwrap()));
    let j = SimplicialMap::inclusion(&x, &open).unwrap();
    let on_open = SheafComplex::constant(x.clone(), 1).restrict(&open).unwrap();
    sheaves.push(("pushforward_open".into(), pushforward_derived(&j, &on_open).unwrap()));
    sheaves.push(("closed_support".into(), extension_by_zero(x.clone(), &closed, 1).unwrap()));
    let v0 = CellRegion::closed(&x, [0]).unwrap();
    sheaves.push(("skyscraper".into(), extension_by_zero(x.clone(), &v0, 1).unwrap()));
    match name {
        "circle" | "mobius" => sheaves.push(("local_system".into(), mobius_system(&x))),
        "torus" => {
            // Pull the Möbius system back along the first projection.
            let c = Arc::new(circle());
            let prod = staircase_product(&circle(), &circle());
            let p = SimplicialMap::new(x.clone(), CellRegion::whole(&x), c.clone(), CellRegion::whole(&c), prod.to_left)
                .unwrap();
            sheaves.push(("local_system".into(), pullback(&p, &mobius_system(&c)).unwrap()));
        }
        _ => {}
    }
    if name == "mobius" {
        // The Möbius item leads with its local system.
        let ls = sheaves.pop().unwrap();
        sheaves.insert(0, ls);
    }
    let seed = NAMES.iter().position(|n| *n == name).unwrap() as u64;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for k in 0..RANDOM_PER_ITEM {
        sheaves.push((format!("random_{k}"), random_two_term_complex(&x, &mut rng)));
    }
    Some(CorpusItem { name: name.to_string(), complex: x, open, closed, sheaves })
}

pub fn all() -> Vec<CorpusItem> {
    NAMES.iter().map(|n| item(n).expect("bundled")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shapes() {
        assert_eq!(torus().f_vector(), vec![9, 27, 18]);
        assert_eq!(torus().euler_characteristic(), 0);
        let o = octahedron();
        assert_eq!(equator(&o).len(), 8);
        assert_eq!(southern(&o).len(), 1 + 4 + 4);
    }

    #[test]
    fn bundled_sheaves_are_valid() {
        for it in all() {
            for (name, f) in &it.sheaves {
                f.validate().unwrap_or_else(|e| panic!("{}/{name}: {e}", it.name));
            }
        }
    }
}
