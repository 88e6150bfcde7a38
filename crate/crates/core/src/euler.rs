//! Euler characteristics and the calculus of constructible functions.

use crate::complex::Refinement;
use crate::error::Result;
use crate::functors::{derived_sections_compact, global_sections, SimplicialMap};
use crate::sheaf::{ConstructibleFunction, SheafComplex};
use std::sync::Arc;

/// `χ(X, F)`.
pub fn euler_global(f: &SheafComplex) -> Result<i64> {
    Ok(global_sections(f)?.euler())
}

/// `χ_c(X, F)`.
pub fn euler_global_compact(f: &SheafComplex) -> Result<i64> {
    Ok(derived_sections_compact(f)?.euler())
}

/// `∫ φ dχ_c = Σ_σ (−1)^{dim σ} φ(σ)`.
pub fn euler_integral(phi: &ConstructibleFunction) -> i64 {
    let x = phi.base();
    phi.values().iter().enumerate().map(|(c, &v)| if x.cell_dim(c).is_multiple_of(2) { v } else { -v }).sum()
}

/// `(f_*φ)(y) = ∫_{f^{-1}(p)} φ dχ_c` for a point `p` of the open cell `y`.
///
/// The cells over `y` form a bundle over `y` with fiber `f^{-1}(p)`, so the
/// fiber integral is the integral over them times `(−1)^{dim y}`.
pub fn pushforward_function(f: &SimplicialMap, phi: &ConstructibleFunction) -> ConstructibleFunction {
    let (x, y) = (f.source(), f.target());
    let mut values = vec![0i64; y.num_cells()];
    for c in f.source_domain().cells() {
        let v = phi.get(c);
        values[f.apply(c)] += if x.cell_dim(c) % 2 == 0 { v } else { -v };
    }
    for (c, v) in values.iter_mut().enumerate() {
        if y.cell_dim(c) % 2 == 1 {
            *v = -*v;
        }
    }
    ConstructibleFunction::new(y.clone(), values)
}

/// `φ ∘ carrier` on a refinement.
pub fn pullback_function(r: &Refinement, phi: &ConstructibleFunction) -> ConstructibleFunction {
    ConstructibleFunction::new(Arc::new(r.complex.clone()), r.carrier.iter().map(|&c| phi.get(c)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::{barycentric_subdivision, CellRegion};
    use crate::corpus;
    use crate::functors::pushforward_proper;

    #[test]
    fn sphere_and_open_edge() {
        let x = Arc::new(corpus::octahedron());
        assert_eq!(euler_integral(&ConstructibleFunction::indicator(x.clone(), 0..x.num_cells())), 2);
        assert_eq!(euler_global(&SheafComplex::constant(x, 1)).unwrap(), 2);
        let i = Arc::new(corpus::interval());
        assert_eq!(euler_integral(&ConstructibleFunction::indicator(i, [2])), -1);
    }

    #[test]
    fn mobius_has_zero_euler_characteristic() {
        let x = Arc::new(corpus::circle());
        assert_eq!(euler_global(&corpus::mobius_system(&x)).unwrap(), 0);
    }

    #[test]
    fn integral_of_local_euler_is_compact_euler() {
        for it in corpus::all().iter().take(5) {
            for (name, f) in &it.sheaves {
                let lhs = euler_integral(&f.chi_local());
                assert_eq!(lhs, euler_global_compact(f).unwrap(), "{}/{name}", it.name);
            }
        }
    }

    #[test]
    fn pushforward_to_point_and_identity() {
        let x = Arc::new(corpus::circle());
        let one = ConstructibleFunction::indicator(x.clone(), 0..x.num_cells());
        let p = SimplicialMap::to_point(&x, &CellRegion::whole(&x));
        assert_eq!(pushforward_function(&p, &one).values(), &[0]);
        assert_eq!(pushforward_function(&SimplicialMap::identity(&x), &one), one);
    }

    #[test]
    fn pushforward_matches_proper_image() {
        let it = corpus::item("subdivided_interval").unwrap();
        let x = it.complex.clone();
        let p = SimplicialMap::to_point(&x, &CellRegion::whole(&x));
        for (name, f) in &it.sheaves {
            let image = pushforward_proper(&p, f).unwrap();
            assert_eq!(pushforward_function(&p, &f.chi_local()), image.chi_local(), "{name}");
        }
    }

    #[test]
    fn integral_is_subdivision_invariant() {
        let x = Arc::new(corpus::octahedron());
        let phi = ConstructibleFunction::new(x.clone(), (0..x.num_cells() as i64).map(|c| c % 5 - 2).collect());
        let r = barycentric_subdivision(&x);
        assert_eq!(euler_integral(&pullback_function(&r, &phi)), euler_integral(&phi));
    }
}
