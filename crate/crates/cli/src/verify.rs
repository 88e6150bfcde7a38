use cellsheaf::corpus::CorpusItem;
use cellsheaf::euler::{euler_global, euler_global_compact, euler_integral};
use cellsheaf::functors::*;
use cellsheaf::linalg::format_rational;
use cellsheaf::microlocal::{cc_additivity_check, index_pairing, ConormalGeometry};
use cellsheaf::random::{random_generic_covector, random_morphism};
use cellsheaf::{ConormalCycle, Result, SheafComplex};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

pub struct Check {
    pub name: &'static str,
    pub sheaf: Option<String>,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn to_json(&self) -> Value {
        json!({ "check": self.name, "sheaf": self.sheaf, "passed": self.passed, "detail": self.detail })
    }
}

pub struct Certificate {
    pub item: String,
    pub seed: u64,
    pub covectors: usize,
    pub checks: Vec<Check>,
}

impl Certificate {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "item": self.item,
            "seed": self.seed,
            "covectors_per_sheaf": self.covectors,
            "passed": self.passed(),
            "checks": self.checks.iter().map(Check::to_json).collect::<Vec<_>>(),
        })
    }
}

/// Runs `body`, turning an error into a failed check.
fn record(out: &mut Vec<Check>, name: &'static str, sheaf: Option<&str>, body: impl FnOnce() -> Result<(bool, String)>) {
    let (passed, detail) = body().unwrap_or_else(|e| (false, format!("error: {e}")));
    out.push(Check { name, sheaf: sheaf.map(str::to_string), passed, detail });
}

fn sheaf_checks(
    out: &mut Vec<Check>,
    it: &CorpusItem,
    geo: &std::sync::Arc<ConormalGeometry>,
    name: &str,
    f: &SheafComplex,
    rng: &mut ChaCha8Rng,
    covectors: usize,
) {
    let x = &it.complex;
    let s = Some(name);
    record(out, "valid", s, || f.validate().map(|_| (true, format!("degrees {}..{}", f.min_degree(), f.max_degree()))));
    record(out, "resolution", s, || {
        let i = injective_resolution(f)?;
        i.validate()?;
        let ok = i.to_sheaf_complex().stalks_agree(f);
        Ok((ok, format!("degrees {}..{}", i.min_degree(), i.max_degree())))
    });
    record(out, "sections_routes", s, || {
        let whole = f.domain().clone();
        let (a, b) = (derived_sections(&whole, f)?, derived_sections_by_summands(&whole, f)?);
        Ok((a == b, format!("{a}; {b}")))
    });
    record(out, "biduality", s, || Ok((verdier_dual(&verdier_dual(f)).stalks_agree(f), String::new())));
    record(out, "global_duality", s, || {
        let hc = derived_sections_compact(f)?;
        let hd = global_sections(&verdier_dual(f))?;
        let lo = hc.min_degree().unwrap_or(0).min(-hd.max_degree().unwrap_or(0));
        let hi = hc.max_degree().unwrap_or(0).max(-hd.min_degree().unwrap_or(0));
        let ok = (lo..=hi).all(|k| hc.get(k) == hd.get(-k));
        Ok((ok, format!("H_c = {hc}, H(𝔻F) = {hd}")))
    });
    record(out, "euler_integral", s, || {
        let (a, b) = (euler_integral(&f.chi_local()), euler_global_compact(f)?);
        Ok((a == b, format!("integral {a}, compact Euler characteristic {b}")))
    });
    record(out, "local_cohomology_routes", s, || {
        let z = &it.closed;
        let a = local_cohomology(z, f)?;
        let b = local_cohomology_by_support(z, f)?;
        let c = local_cohomology_by_ext(z, f)?;
        Ok((a == b && b == c, format!("{a}; {b}; {c}")))
    });
    record(out, "triple_sequence", s, || {
        let r = triple_sequence(&it.closed, f.domain(), f)?;
        Ok((r.exact && r.euler_additive, format!("H_Y = {}, H = {}, H_(X∖Y) = {}", r.h_y, r.h_z, r.h_quotient)))
    });
    record(out, "base_change_to_point", s, || {
        let p = SimplicialMap::to_point(x, f.domain());
        let r = base_change_point_fiber(&p, f, 0)?;
        Ok((r.holds, format!("stalk {}, fiber {}", r.stalk, r.fiber)))
    });
    record(out, "index_theorem", s, || {
        let cc = geo.characteristic_cycle(f)?;
        let chi = euler_global(f)?;
        let mut bad = Vec::new();
        for _ in 0..covectors {
            let xi = random_generic_covector(x, rng);
            let p = index_pairing(&cc, &xi)?;
            if p != chi {
                bad.push(format!("{} gives {p}", xi.iter().map(format_rational).collect::<Vec<_>>().join(",")));
            }
        }
        Ok((bad.is_empty(), if bad.is_empty() { format!("{covectors} pairings equal {chi}") } else { bad.join("; ") }))
    });
    record(out, "round_trip", s, || {
        let back = SheafComplex::from_json(&f.to_json(), None)?;
        let cc = geo.characteristic_cycle(f)?;
        let cc_back = ConormalCycle::from_json(geo, &cc.to_json())?;
        Ok((back == *f && cc_back == cc, String::new()))
    });
}

pub fn verify(it: &CorpusItem, seed: u64, covectors: usize) -> Certificate {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut checks = Vec::new();
    let geo = match ConormalGeometry::new(&it.complex) {
        Ok(g) => g,
        Err(e) => {
            record(&mut checks, "conormal_geometry", None, || Err(e));
            return Certificate { item: it.name.clone(), seed, covectors, checks };
        }
    };
    for (name, f) in &it.sheaves {
        sheaf_checks(&mut checks, it, &geo, name, f, &mut rng, covectors);
    }
    record(&mut checks, "normalization", None, || {
        let cc = geo.characteristic_cycle(&SheafComplex::constant(it.complex.clone(), 1))?;
        let tops = it.complex.maximal_cells();
        let ok = tops.iter().all(|&c| cc.over(c).iter().all(|&m| m == 1));
        Ok((ok, format!("{} maximal cells", tops.len())))
    });
    let pool: Vec<SheafComplex> = it.sheaves.iter().map(|(_, f)| f.clone()).collect();
    for _ in 0..3 {
        let phi = random_morphism(&pool, &mut rng);
        record(&mut checks, "additivity", None, || {
            let r = cc_additivity_check(&phi, &geo)?;
            Ok((r.holds(), r.violations.join("; ")))
        });
    }
    Certificate { item: it.name.clone(), seed, covectors, checks }
}
