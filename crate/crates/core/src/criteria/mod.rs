//! Sufficient conditions for blow-up and for global existence, and the
//! diagnostics that check their conclusions along simulated runs.

pub mod cone;
pub mod energy;
pub mod entropy;
pub mod functionals;
pub mod grassin;
pub mod nd;
pub mod report;
pub mod sideris;
pub mod smallness;

pub use cone::{cone_check, ConePadding, ConeSample};
pub use energy::{decay_offset, decay_rate, weight_exponent, weighted_energy, WeightedEnergy};
pub use entropy::{relative_entropy, relative_entropy_density, RelativeEntropyPair};
pub use functionals::{sideris_functionals, SiderisFunctionals};
pub use grassin::{grassin_hypotheses, GrassinCheck};
pub use nd::{nd_condition, nd_from_gradient, NdRecord};
pub use report::{criteria_report, CriteriaReport, ReportParams, Verdict};
pub use sideris::{
    background_sound_speed, omega_d, sideris_condition, sideris_quantities, support_condition, SiderisCheck,
};
pub use smallness::{density_power, hm_smallness, min_sobolev_index, prop23_epsilon, riccati_bound, HmSmallness};
