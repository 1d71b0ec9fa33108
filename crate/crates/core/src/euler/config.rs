use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum FluxKind {
    #[default]
    Rusanov,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Integrator {
    #[default]
    SspRk2,
}

/// Face reconstruction. `FirstOrder` is the entropy-stable default; the
/// limited MUSCL variants act on primitive variables (ρ, u).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Reconstruction {
    #[default]
    FirstOrder,
    Minmod,
    VanLeer,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum ThresholdMode {
    /// Threshold is `gradient_blowup_threshold × max|∇u₀|`.
    #[default]
    Relative,
    Absolute,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SolverConfig {
    pub cfl: f64,
    pub t_end: f64,
    pub flux: FluxKind,
    pub time_integrator: Integrator,
    pub reconstruction: Reconstruction,
    pub gradient_blowup_threshold: f64,
    pub threshold_mode: ThresholdMode,
    pub snapshot_stride: usize,
    pub max_steps: usize,
    pub vacuum_floor: f64,
    /// Background density for the M(t) series.
    pub rho_bar: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            cfl: 0.45,
            t_end: 1.0,
            flux: FluxKind::Rusanov,
            time_integrator: Integrator::SspRk2,
            reconstruction: Reconstruction::FirstOrder,
            gradient_blowup_threshold: 1e3,
            threshold_mode: ThresholdMode::Relative,
            snapshot_stride: 10,
            max_steps: 1_000_000,
            vacuum_floor: 1e-14,
            rho_bar: 0.0,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.cfl > 0.0 && self.cfl <= 1.0) {
            return Err(Error::InvalidArgument(format!("cfl must lie in (0, 1], got {}", self.cfl)));
        }
        if !(self.gradient_blowup_threshold > 0.0) {
            return Err(Error::InvalidArgument("gradient_blowup_threshold must be positive".into()));
        }
        if !(self.t_end >= 0.0 && self.t_end.is_finite()) {
            return Err(Error::InvalidArgument("t_end must be finite and non-negative".into()));
        }
        if self.snapshot_stride == 0 {
            return Err(Error::InvalidArgument("snapshot_stride must be at least 1".into()));
        }
        if !(self.vacuum_floor >= 0.0) || !(self.rho_bar >= 0.0) {
            return Err(Error::InvalidArgument("vacuum_floor and rho_bar must be non-negative".into()));
        }
        Ok(())
    }
}
