//! The pressureless (Burgers) reference flow solved by characteristics.

pub mod characteristics;
pub mod sampler;

pub use characteristics::{
    blowup_time_from_gradient, burgers_blowup_time, burgers_field, burgers_gradient, burgers_gradient_at,
    evaluate_burgers, grassin_remainder, omega_alpha_cells, BlowupVerdict, CharacteristicMap,
};
pub use sampler::{CubicSampler, FnSampler, VelocitySampler};
