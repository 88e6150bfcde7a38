//! Invariants over seeded random sheaves and morphisms on the corpus
//! complexes. Each case draws a complex and a seed; the objects are built
//! from a ChaCha stream so a failing case replays from its seed alone.

use std::sync::{Arc, OnceLock};

use cellsheaf::complex::{subdivide_along_level, CellRegion, SimplicialComplex};
use cellsheaf::corpus::{self, CorpusItem};
use cellsheaf::euler::{euler_global, euler_global_compact, euler_integral};
use cellsheaf::functors::*;
use cellsheaf::linalg::{int, rat, GradedDims, Rational};
use cellsheaf::microlocal::{cc_additivity_check, index_pairing, multiplicity_at_covector, ConormalGeometry};
use cellsheaf::random::{random_gauge, random_generic_covector, random_morphism, random_two_term_complex};
use cellsheaf::SheafComplex;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Fixture {
    item: CorpusItem,
    geometry: Arc<ConormalGeometry>,
}

/// The torus is left to the acceptance and microlocal suites.
const ITEMS: &[&str] = &["interval", "subdivided_interval", "circle", "mobius", "octahedron", "hemispheres"];

fn fixtures() -> &'static [Fixture] {
    static F: OnceLock<Vec<Fixture>> = OnceLock::new();
    F.get_or_init(|| {
        ITEMS
            .iter()
            .map(|n| {
                let item = corpus::item(n).unwrap();
                let geometry = ConormalGeometry::new(&item.complex).unwrap();
                Fixture { item, geometry }
            })
            .collect()
    })
}

/// A bundled sheaf or a fresh random complex.
fn draw(fx: &Fixture, rng: &mut ChaCha8Rng) -> SheafComplex {
    let s = &fx.item.sheaves;
    if rng.gen_bool(0.3) {
        s[rng.gen_range(0..s.len())].1.clone()
    } else {
        random_two_term_complex(&fx.item.complex, rng)
    }
}

fn open_star(x: &SimplicialComplex, rng: &mut ChaCha8Rng) -> CellRegion {
    x.star_link(rng.gen_range(0..x.num_vertices())).0
}

fn case() -> impl Strategy<Value = (usize, u64)> {
    (0..ITEMS.len(), any::<u64>())
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 24, ..ProptestConfig::default() })]

    #[test]
    fn resolutions_are_stalkwise_quasi_isomorphic((i, seed) in case()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = draw(&fixtures()[i], &mut rng);
        let r = injective_resolution(&f).unwrap();
        r.validate().unwrap();
        prop_assert!(r.to_sheaf_complex().stalks_agree(&f));
    }

    #[test]
    fn section_routes_agree_on_open_stars((i, seed) in case()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let fx = &fixtures()[i];
        let f = draw(fx, &mut rng);
        let u = open_star(&fx.item.complex, &mut rng);
        let a = derived_sections(&u, &f).unwrap();
        prop_assert_eq!(&a, &derived_sections_by_summands(&u, &f).unwrap());
        prop_assert_eq!(a.euler(), euler_sections(&u, &f));
    }

    #[test]
    fn biduality((i, seed) in case()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let fx = &fixtures()[i];
        let f = draw(fx, &mut rng);
        let dd = verdier_dual(&verdier_dual(&f));
        prop_assert!(dd.stalks_agree(&f));
        prop_assert_eq!(euler_global(&dd).unwrap(), euler_global(&f).unwrap());
        prop_assert_eq!(fx.geometry.characteristic_cycle(&dd).unwrap(), fx.geometry.characteristic_cycle(&f).unwrap());
    }

    #[test]
    fn compact_cohomology_is_dual_to_cohomology_of_the_dual((i, seed) in case()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = draw(&fixtures()[i], &mut rng);
        let hc = derived_sections_compact(&f).unwrap();
        let hd = global_sections(&verdier_dual(&f)).unwrap();
        let mut mirrored = GradedDims::zero();
        for (k, d) in hd.iter() {
            mirrored.set(-k, d);
        }
        prop_assert_eq!(hc, mirrored);
    }

    #[test]
    fn euler_characteristics_add_on_cones((i, seed) in case()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let fx = &fixtures()[i];
        let pool: Vec<SheafComplex> = (0..2).map(|_| draw(fx, &mut rng)).collect();
        let phi = random_morphism(&pool, &mut rng);
        let cone = phi.mapping_cone();
        cone.validate().unwrap();
        prop_assert_eq!(cone.chi_local(), &phi.target().chi_local() - &phi.source().chi_local());
        let report = cc_additivity_check(&phi, &fx.geometry).unwrap();
        prop_assert!(report.holds(), "{:?}", report.violations);
    }

    #[test]
    fn index_theorem((i, seed) in case()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let fx = &fixtures()[i];
        let f = draw(fx, &mut rng);
        let cc = fx.geometry.characteristic_cycle(&f).unwrap();
        let xi = random_generic_covector(&fx.item.complex, &mut rng);
        prop_assert_eq!(index_pairing(&cc, &xi).unwrap(), euler_global(&f).unwrap());
    }

    #[test]
    fn multiplicity_is_constant_on_chambers((i, seed) in case()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let fx = &fixtures()[i];
        let x = &fx.item.complex;
        let f = draw(fx, &mut rng);
        let cc = fx.geometry.characteristic_cycle(&f).unwrap();
        let xi = random_generic_covector(x, &mut rng);
        for v in 0..x.num_vertices() {
            let c = x.vertex_cell(v);
            prop_assert_eq!(cc.at_covector(c, &xi).unwrap(), multiplicity_at_covector(&f, c, &xi).unwrap());
        }
    }

    #[test]
    fn gauge_changes_are_invisible((i, seed) in case()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let fx = &fixtures()[i];
        let f = draw(fx, &mut rng);
        let g = random_gauge(&f, &mut rng);
        prop_assert!(g.stalks_agree(&f));
        prop_assert_eq!(global_sections(&g).unwrap(), global_sections(&f).unwrap());
        prop_assert_eq!(fx.geometry.characteristic_cycle(&g).unwrap(), fx.geometry.characteristic_cycle(&f).unwrap());
    }

    #[test]
    fn euler_integral_and_refinement((i, seed) in case()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let fx = &fixtures()[i];
        let x = &fx.item.complex;
        let f = draw(fx, &mut rng);
        prop_assert_eq!(euler_integral(&f.chi_local()), euler_global_compact(&f).unwrap());
        let l: Vec<Rational> = (0..x.ambient_dim()).map(|_| int(rng.gen_range(-4..=4))).collect();
        let r = subdivide_along_level(x, &l, &rat(rng.gen_range(-5..=5), 6));
        let g = pullback_refinement(&r, &f).unwrap();
        prop_assert_eq!(global_sections(&g).unwrap(), global_sections(&f).unwrap());
        prop_assert_eq!(derived_sections_compact(&g).unwrap(), derived_sections_compact(&f).unwrap());
        prop_assert_eq!(euler_integral(&g.chi_local()), euler_integral(&f.chi_local()));
    }

    #[test]
    fn adjunctions_along_open_stars((i, seed) in case()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let fx = &fixtures()[i];
        let x = &fx.item.complex;
        let (f, g) = (draw(fx, &mut rng), draw(fx, &mut rng));
        let u = open_star(x, &mut rng);
        let j = SimplicialMap::inclusion(x, &u).unwrap();
        let fu = f.restrict(&u).unwrap();
        prop_assert_eq!(hyperext(&pullback(&j, &g).unwrap(), &fu).unwrap(), hyperext(&g, &pushforward_derived(&j, &fu).unwrap()).unwrap());
        prop_assert_eq!(hyperext(&pushforward_proper(&j, &fu).unwrap(), &g).unwrap(), hyperext(&fu, &upper_shriek(&j, &g).unwrap()).unwrap());
    }

    #[test]
    fn pushforward_is_functorial((i, seed) in case()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let fx = &fixtures()[i];
        let x = &fx.item.complex;
        let f = draw(fx, &mut rng);
        let u = open_star(x, &mut rng);
        let j = SimplicialMap::inclusion(x, &u).unwrap();
        let p = SimplicialMap::to_point(x, &CellRegion::whole(x));
        let fu = f.restrict(&u).unwrap();
        let direct = pushforward_derived(&j.then(&p).unwrap(), &fu).unwrap();
        let staged = pushforward_derived(&p, &pushforward_derived(&j, &fu).unwrap()).unwrap();
        prop_assert!(direct.stalks_agree(&staged));
        prop_assert_eq!(direct.stalk(0), derived_sections(&u, &f).unwrap());
    }

    #[test]
    fn base_change_to_the_point((i, seed) in case()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let fx = &fixtures()[i];
        let f = draw(fx, &mut rng);
        let p = SimplicialMap::to_point(&fx.item.complex, f.domain());
        let r = base_change_point_fiber(&p, &f, 0).unwrap();
        prop_assert!(r.holds, "{} vs {}", r.stalk, r.fiber);
    }

    #[test]
    fn triple_sequences_are_exact((i, seed) in case()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let fx = &fixtures()[i];
        let x = &fx.item.complex;
        let f = draw(fx, &mut rng);
        let v = rng.gen_range(0..x.num_vertices());
        let y = CellRegion::closed(x, [x.vertex_cell(v)]).unwrap();
        let r = triple_sequence(&y, &CellRegion::whole(x), &f).unwrap();
        prop_assert!(r.exact && r.euler_additive);
        let star = x.star_link(v).0;
        prop_assert!(excision(&y, &star, &f).unwrap().holds);
        let routes = [local_cohomology(&y, &f).unwrap(), local_cohomology_by_support(&y, &f).unwrap(), local_cohomology_by_ext(&y, &f).unwrap()];
        prop_assert!(routes.iter().all(|h| *h == routes[0]));
    }

    #[test]
    fn serialization_round_trips((i, seed) in case()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let fx = &fixtures()[i];
        let f = draw(fx, &mut rng);
        prop_assert_eq!(SheafComplex::from_json(&f.to_json(), None).unwrap(), f.clone());
        let cc = fx.geometry.characteristic_cycle(&f).unwrap();
        prop_assert_eq!(cellsheaf::ConormalCycle::from_json(&fx.geometry, &cc.to_json()).unwrap(), cc);
        let x = &fx.item.complex;
        prop_assert_eq!(&SimplicialComplex::from_json(&x.to_json()).unwrap(), x.as_ref());
    }
}
