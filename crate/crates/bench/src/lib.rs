//! Benchmarks over the bundled corpus.

use std::hint::black_box;

use cellsheaf::corpus;
use cellsheaf::functors::{global_sections, hyperext, injective_resolution, verdier_dual};
use cellsheaf::microlocal::{index_pairing, microlocal_multiplicity, ConormalGeometry};
use cellsheaf::random::{random_generic_covector, random_two_term_complex};
use criterion::{BenchmarkId, Criterion};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const ITEMS: &[&str] = &["circle", "octahedron", "torus"];

pub fn benchmarks(c: &mut Criterion) {
    let items: Vec<_> = ITEMS.iter().map(|n| corpus::item(n).expect("bundled")).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let randoms: Vec<_> = items.iter().map(|it| random_two_term_complex(&it.complex, &mut rng)).collect();

    let mut g = c.benchmark_group("derived");
    for (it, f) in items.iter().zip(&randoms) {
        g.bench_with_input(BenchmarkId::new("resolution", &it.name), f, |b, f| b.iter(|| injective_resolution(black_box(f))));
        g.bench_with_input(BenchmarkId::new("global_sections", &it.name), f, |b, f| b.iter(|| global_sections(black_box(f))));
        g.bench_with_input(BenchmarkId::new("verdier_dual", &it.name), f, |b, f| b.iter(|| verdier_dual(black_box(f))));
        let q = it.sheaf("constant").expect("bundled");
        g.bench_with_input(BenchmarkId::new("self_ext", &it.name), f, |b, f| b.iter(|| hyperext(black_box(q), black_box(f))));
    }
    g.finish();

    let mut g = c.benchmark_group("microlocal");
    g.sample_size(10);
    for (it, f) in items.iter().zip(&randoms) {
        g.bench_function(BenchmarkId::new("conormal_geometry", &it.name), |b| b.iter(|| ConormalGeometry::new(black_box(&it.complex))));
        let geo = ConormalGeometry::new(&it.complex).expect("geometry");
        g.bench_with_input(BenchmarkId::new("characteristic_cycle", &it.name), f, |b, f| {
            b.iter(|| geo.characteristic_cycle(black_box(f)))
        });
        let cc = geo.characteristic_cycle(f).expect("cycle");
        let xi = random_generic_covector(&it.complex, &mut rng);
        g.bench_function(BenchmarkId::new("index_pairing", &it.name), |b| b.iter(|| index_pairing(black_box(&cc), black_box(&xi))));
        let chamber = geo.chambers_of(it.complex.vertex_cell(0)).first().expect("a chamber").clone();
        g.bench_with_input(BenchmarkId::new("multiplicity_by_sections", &it.name), f, |b, f| {
            b.iter(|| microlocal_multiplicity(black_box(f), black_box(&chamber)))
        });
    }
    g.finish();
}
