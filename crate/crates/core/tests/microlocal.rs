mod common;

use std::sync::Arc;

use cellsheaf::complex::{barycentric_subdivision, subdivide_along_level, CellRegion, SimplicialComplex};
use cellsheaf::corpus;
use cellsheaf::euler::euler_global;
use cellsheaf::functors::{pullback, verdier_dual, SimplicialMap};
use cellsheaf::linalg::{int, rat, Rational};
use cellsheaf::microlocal::*;
use cellsheaf::random::{random_generic_covector, random_morphism};
use cellsheaf::sheaf::{extension_by_zero, SheafComplex, SheafMorphism};
use cellsheaf::Error;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn chamber_counts_match_whitney() {
    for it in corpus::all() {
        let x = &it.complex;
        for c in 0..x.num_cells() {
            let fan = ConormalFan::new(x, c);
            let ch = fan.chambers();
            assert_eq!(ch.len(), common::chamber_count(x, c), "{} cell {}", it.name, x.cell_name(c));
            for k in ch.iter().filter(|k| !k.is_zero()) {
                assert_eq!(fan.signs_of(x, &k.witness).unwrap(), k.signs);
            }
        }
    }
}

#[test]
fn octahedron_vertex_chambers() {
    let x = corpus::octahedron();
    // Four link directions in general position in ℝ³: 2·(1 + 3 + 3).
    assert_eq!(chambers(&x, 0).len(), 14);
    assert_eq!(common::chamber_count(&x, 0), 14);
}

#[test]
fn constant_sheaf_is_the_conormal_table() {
    for name in ["interval", "circle", "octahedron", "torus"] {
        let it = corpus::item(name).unwrap();
        let geo = ConormalGeometry::new(&it.complex).unwrap();
        let cc = geo.characteristic_cycle(it.sheaf("constant").unwrap()).unwrap();
        assert_eq!(cc, common::conormal_table(&geo, &CellRegion::whole(&it.complex)), "{name}");
        for c in it.complex.maximal_cells() {
            assert_eq!(cc.over(c), &[1], "{name}: top cell {}", it.complex.cell_name(c));
        }
    }
}

#[test]
fn closed_supports_are_conormal_tables() {
    for it in corpus::all() {
        let geo = ConormalGeometry::new(&it.complex).unwrap();
        let x = &it.complex;
        let cl = geo.characteristic_cycle(it.sheaf("closed_support").unwrap()).unwrap();
        assert_eq!(cl, common::conormal_table(&geo, &it.closed), "{}", it.name);
        // Rj_* of the constant sheaf on these opens is the constant sheaf on
        // the closure.
        let rj = geo.characteristic_cycle(it.sheaf("pushforward_open").unwrap()).unwrap();
        assert_eq!(rj, common::conormal_table(&geo, &it.open.closure(x)), "{}", it.name);
    }
}

#[test]
fn fast_route_matches_sections_route() {
    for name in ["interval", "subdivided_interval", "circle", "mobius", "hemispheres"] {
        let it = corpus::item(name).unwrap();
        let geo = ConormalGeometry::new(&it.complex).unwrap();
        for (s, f) in &it.sheaves {
            let cc = geo.characteristic_cycle(f).unwrap();
            for (ch, m) in cc.entries() {
                assert_eq!(microlocal_multiplicity(f, ch).unwrap(), m, "{name}/{s} at {}", it.complex.cell_name(ch.cell));
            }
        }
    }
}

#[test]
fn multiplicity_is_constant_on_chambers() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for name in ["subdivided_interval", "circle", "octahedron"] {
        let it = corpus::item(name).unwrap();
        let x = &it.complex;
        for c in 0..x.num_cells() {
            let fan = ConormalFan::new(x, c);
            for ch in fan.chambers() {
                let base: Vec<i64> = it.sheaves.iter().map(|(_, f)| microlocal_multiplicity(f, &ch).unwrap()).collect();
                for _ in 0..3 {
                    let rhs: Vec<Rational> = (0..ch.signs.len()).map(|_| rat(rng.gen_range(1..=20), rng.gen_range(1..=4))).collect();
                    let xi = fan.witness_with(&ch, &rhs).unwrap();
                    let again = cellsheaf::microlocal::ConormalChamber { witness: xi, ..ch.clone() };
                    let got: Vec<i64> = it.sheaves.iter().map(|(_, f)| microlocal_multiplicity(f, &again).unwrap()).collect();
                    assert_eq!(got, base, "{name} cell {}", x.cell_name(c));
                }
            }
        }
    }
}

#[test]
fn index_theorem_on_the_corpus() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for it in corpus::all() {
        let geo = ConormalGeometry::new(&it.complex).unwrap();
        for (s, f) in &it.sheaves {
            let cc = geo.characteristic_cycle(f).unwrap();
            let chi = euler_global(f).unwrap();
            for _ in 0..20 {
                let xi = random_generic_covector(&it.complex, &mut rng);
                assert_eq!(index_pairing(&cc, &xi).unwrap(), chi, "{}/{s} at {xi:?}", it.name);
            }
        }
    }
}

#[test]
fn example_pairings() {
    let it = corpus::item("interval").unwrap();
    let cc = characteristic_cycle(it.sheaf("constant").unwrap()).unwrap();
    assert_eq!(index_pairing(&cc, &[int(1)]).unwrap(), 1);
    assert_eq!(index_pairing(&cc, &[int(-1)]).unwrap(), 1);
    let o = corpus::item("octahedron").unwrap();
    let geo = ConormalGeometry::new(&o.complex).unwrap();
    let cs = geo.characteristic_cycle(o.sheaf("constant").unwrap()).unwrap();
    let eq = geo.characteristic_cycle(o.sheaf("closed_support").unwrap()).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..20 {
        let xi = random_generic_covector(&o.complex, &mut rng);
        assert_eq!(index_pairing(&cs, &xi).unwrap(), 2);
        assert_eq!(index_pairing(&eq, &xi).unwrap(), 0);
    }
}

#[test]
fn non_generic_covectors_are_rejected() {
    let o = corpus::octahedron();
    let cc = characteristic_cycle(&SheafComplex::constant(Arc::new(o), 1)).unwrap();
    // Constant along the edge from e1 to e2.
    let err = index_pairing(&cc, &[int(1), int(1), int(0)]).unwrap_err();
    assert!(matches!(err, Error::NonGeneric(_)), "{err}");
}

#[test]
fn invariant_under_refinement() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for name in ["interval", "circle", "hemispheres"] {
        let it = corpus::item(name).unwrap();
        let x = &it.complex;
        let geo = ConormalGeometry::new(x).unwrap();
        let mut refinements = vec![barycentric_subdivision(x)];
        for _ in 0..5 {
            let l: Vec<Rational> = (0..x.ambient_dim()).map(|_| int(rng.gen_range(-5..=5))).collect();
            let c = rat(rng.gen_range(-7..=7), 8);
            refinements.push(subdivide_along_level(x, &l, &c));
        }
        for (s, f) in it.sheaves.iter().take(6) {
            let cc = geo.characteristic_cycle(f).unwrap();
            for r in &refinements {
                for (ch, m) in cc.entries() {
                    assert_eq!(common::refined_multiplicity(x, f, ch, r, &mut rng), m, "{name}/{s} at {}", x.cell_name(ch.cell));
                }
            }
        }
    }
}

#[test]
fn pairing_survives_level_cuts() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let it = corpus::item("hemispheres").unwrap();
    let r = subdivide_along_level(&it.complex, &[int(1), int(2), int(-1)], &rat(1, 3));
    let geo = ConormalGeometry::new(&Arc::new(r.complex.clone())).unwrap();
    for (s, f) in &it.sheaves {
        let g = cellsheaf::functors::pullback_refinement(&r, f).unwrap();
        let cc = geo.characteristic_cycle(&g).unwrap();
        for _ in 0..5 {
            let xi = random_generic_covector(geo.base(), &mut rng);
            assert_eq!(index_pairing(&cc, &xi).unwrap(), euler_global(f).unwrap(), "{s}");
        }
    }
}

#[test]
fn locality() {
    let it = corpus::item("octahedron").unwrap();
    let x = &it.complex;
    let geo = ConormalGeometry::new(x).unwrap();
    for sigma in [0, 6, 20] {
        let star = x.cofaces(sigma);
        let (sub, _) = x.subcomplex(&star);
        let sub = Arc::new(sub);
        let i = SimplicialMap::subcomplex_embedding(&sub, x).unwrap();
        let local_sigma = (0..sub.num_cells()).find(|&c| i.apply(c) == sigma).unwrap();
        for (s, f) in &it.sheaves {
            let cc = geo.characteristic_cycle(f).unwrap();
            let restricted = pullback(&i, f).unwrap();
            let local = characteristic_cycle(&restricted).unwrap();
            assert_eq!(local.over(local_sigma), cc.over(sigma), "{s} at {}", x.cell_name(sigma));
        }
    }
}

#[test]
fn closed_pushforward() {
    let o = corpus::item("octahedron").unwrap();
    let x = &o.complex;
    let geo = ConormalGeometry::new(x).unwrap();
    // Identity.
    let cc = geo.characteristic_cycle(o.sheaf("random_0").unwrap()).unwrap();
    assert_eq!(cc_pushforward_closed(&cc, &SimplicialMap::identity(x), &geo).unwrap(), cc);
    // Equator circle.
    let cells: Vec<_> = o.closed.cells().filter(|&c| x.cell_dim(c) == 1).collect();
    let (circle, _) = x.subcomplex(&cells);
    let circle = Arc::new(circle);
    let i = SimplicialMap::subcomplex_embedding(&circle, x).unwrap();
    let on_circle = characteristic_cycle(&SheafComplex::constant(circle.clone(), 1)).unwrap();
    let pushed = cc_pushforward_closed(&on_circle, &i, &geo).unwrap();
    assert_eq!(pushed, geo.characteristic_cycle(o.sheaf("closed_support").unwrap()).unwrap());
    // A vertex of the interval.
    let it = corpus::item("interval").unwrap();
    let ig = ConormalGeometry::new(&it.complex).unwrap();
    let (pt, _) = it.complex.subcomplex(&[0]);
    let pt = Arc::new(pt);
    let j = SimplicialMap::subcomplex_embedding(&pt, &it.complex).unwrap();
    let sky = characteristic_cycle(&SheafComplex::constant(pt, 1)).unwrap();
    let pushed = cc_pushforward_closed(&sky, &j, &ig).unwrap();
    assert_eq!(pushed.over(0), &[1, 1]);
    assert_eq!(pushed, ig.characteristic_cycle(it.sheaf("skyscraper").unwrap()).unwrap());
}

#[test]
fn product_formula() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let i = corpus::item("interval").unwrap();
    let f = i.sheaf("pushforward_open").unwrap();
    let rep = external_multiplicativity(f, f, 3, &mut rng).unwrap();
    assert!(rep.holds, "{rep:?}");
    let c = corpus::item("circle").unwrap();
    let rep = external_multiplicativity(c.sheaf("constant").unwrap(), i.sheaf("constant").unwrap(), 2, &mut rng).unwrap();
    assert!(rep.holds, "{rep:?}");
    assert_eq!(rep.euler[0], 0);
    for (a, b) in [("random_0", "extension_by_zero"), ("local_system", "random_1")] {
        let rep = external_multiplicativity(c.sheaf(a).unwrap(), i.sheaf(b).unwrap(), 2, &mut rng).unwrap();
        assert!(rep.holds, "{a} ⊠ {b}: {rep:?}");
    }
    // Constant sheaf on a point leaves multiplicities alone.
    let pt = Arc::new(SimplicialComplex::point());
    let rep = external_multiplicativity(i.sheaf("random_2").unwrap(), &SheafComplex::constant(pt, 1), 2, &mut rng).unwrap();
    assert!(rep.holds, "{rep:?}");
}

#[test]
fn additivity_examples() {
    let it = corpus::item("interval").unwrap();
    let x = &it.complex;
    let geo = ConormalGeometry::new(x).unwrap();
    let u = CellRegion::open(x, [2]).unwrap();
    let j = extension_by_zero(x.clone(), &u, 1).unwrap();
    let one = SheafComplex::constant(x.clone(), 1);
    let comps = (0..x.num_cells()).map(|c| if c == 2 { cellsheaf::Matrix::identity(1) } else { cellsheaf::Matrix::zeros(1, 0) }).collect();
    let phi = SheafMorphism::new(j, one, [(0, comps)].into()).unwrap();
    let rep = cc_additivity_check(&phi, &geo).unwrap();
    assert!(rep.holds(), "{rep:?}");
    let id = SheafMorphism::identity(it.sheaf("random_0").unwrap());
    let rep = cc_additivity_check(&id, &geo).unwrap();
    assert!(rep.holds());
    assert!(geo.characteristic_cycle(&id.mapping_cone()).unwrap().is_zero());
}

#[test]
fn additivity_on_random_morphisms() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for it in corpus::all() {
        let geo = ConormalGeometry::new(&it.complex).unwrap();
        let pool: Vec<SheafComplex> = it.sheaves.iter().map(|(_, f)| f.clone()).collect();
        for _ in 0..4 {
            let phi = random_morphism(&pool, &mut rng);
            let rep = cc_additivity_check(&phi, &geo).unwrap();
            assert!(rep.holds(), "{}: {:?}", it.name, rep.violations);
        }
    }
}

#[test]
fn duality_and_the_pairing() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut antipodal = (0, 0);
    for name in ["interval", "circle", "hemispheres"] {
        let it = corpus::item(name).unwrap();
        let geo = ConormalGeometry::new(&it.complex).unwrap();
        for (_, f) in &it.sheaves {
            let d = verdier_dual(f);
            let cd = geo.characteristic_cycle(&d).unwrap();
            let chi = euler_global(&d).unwrap();
            for _ in 0..5 {
                let xi = random_generic_covector(&it.complex, &mut rng);
                assert_eq!(index_pairing(&cd, &xi).unwrap(), chi);
            }
            // Conjecture only: CC(𝔻F) at ξ against CC(F) at −ξ.
            let cf = geo.characteristic_cycle(f).unwrap();
            for (ch, m) in cd.entries() {
                let minus: Vec<Rational> = ch.witness.iter().map(|v| -v).collect();
                antipodal.1 += 1;
                if cf.at_covector(ch.cell, &minus).unwrap() == m {
                    antipodal.0 += 1;
                }
            }
        }
    }
    println!("antipodal agreement on {} of {} chambers", antipodal.0, antipodal.1);
}

#[test]
fn cycle_json_round_trip() {
    let it = corpus::item("hemispheres").unwrap();
    let geo = ConormalGeometry::new(&it.complex).unwrap();
    for (_, f) in &it.sheaves {
        let cc = geo.characteristic_cycle(f).unwrap();
        let back = ConormalCycle::from_json(&geo, &cc.to_json()).unwrap();
        assert_eq!(back, cc);
        let loaded = ConormalCycle::load(&cc.to_json(), None).unwrap();
        assert_eq!(loaded.values(), cc.values());
    }
}
