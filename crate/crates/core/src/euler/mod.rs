//! Conservative finite-volume evolution of the isentropic Euler system.

pub mod config;
mod scheme;
pub mod solver;
pub mod trajectory;

pub use config::{FluxKind, Integrator, Reconstruction, SolverConfig, ThresholdMode};
pub use solver::{entropy_production, max_velocity_gradient, max_wave_speed, run, stable_dt, step};
pub use trajectory::{detect_blowup, fit_pole, write_series_csv, BlowupDetection, SeriesRow, Trajectory};
