//! Conormal chambers, local Morse indices and characteristic cycles.

mod chambers;
mod cycle;
mod laws;
mod morse;

pub use chambers::{chambers, ConormalChamber, ConormalFan};
pub use cycle::{characteristic_cycle, index_pairing, ConormalCycle, ConormalGeometry};
pub use laws::{
    cc_additivity_check, cc_pushforward_closed, external_multiplicativity, external_product, AdditivityReport,
    ProductReport,
};
pub use morse::{lower_star, microlocal_multiplicity, multiplicity_at_covector, LowerStar};
