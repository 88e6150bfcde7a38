//! Derived functors computed through canonical injective resolutions.

mod base_change;
mod duality;
mod ext;
mod images;
mod injective;
mod local;
mod map;
mod sections;

pub use base_change::{base_change_point_fiber, BaseChangeReport};
pub use duality::{dualizing_complex, pushforward_proper, upper_shriek, verdier_dual};
pub use ext::{hom_complex, hom_dimension, hyperext};
pub use images::{pullback, pullback_refinement, pushforward_derived};
pub use injective::{canonical_multiplicities, injective_resolution, InjectiveComplex};
pub use local::{
    excision, local_cohomology, local_cohomology_by_ext, local_cohomology_by_support, local_cohomology_complex,
    triple_sequence, ExcisionReport, TripleReport,
};
pub use map::SimplicialMap;
pub use sections::{
    derived_section_complex, derived_sections, derived_sections_by_summands, derived_sections_compact,
    euler_sections, euler_sections_fast, global_sections, sections_by_limit, sheaf_sections, signed_term_dims,
};
