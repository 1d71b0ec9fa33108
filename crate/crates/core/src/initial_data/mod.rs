//! Initial data: smooth cutoffs, the worked examples and parametrised families.

pub mod bump;
pub mod examples;
pub mod family;

pub use bump::{smooth_bump, BumpProfile};
pub use examples::{
    bump_density, example1, example1_at, example2, example3_at, example3_profile, example3_radial, gaussian_density,
};
pub use family::{standard_family, Family, Generated};
