//! Builds the initial state described by the config.

use std::fs::File;
use std::io::BufReader;

use blowup_lab::fields::{read_snapshot, FluidState, Grid, ScalarField, VectorField};
use blowup_lab::initial_data::{example1, example2, example3_radial, gaussian_density, standard_family, Family};
use blowup_lab::Real;
use serde::Serialize;

use crate::config::{DataSpec, DensitySpec, ExperimentConfig};
use crate::error::CliError;

/// Datum summary written into every report.
#[derive(Clone, Debug, Serialize)]
pub struct DataInfo {
    pub kind: &'static str,
    pub cells: Vec<usize>,
    pub spacing: Vec<f64>,
    pub origin: Vec<f64>,
    pub periodic: Vec<bool>,
    /// Solved velocity scale for `sideris_pulse`, 1 otherwise.
    pub amplitude: f64,
    pub mass: f64,
    pub max_density: f64,
    pub max_speed: f64,
}

fn density<T: Real>(g: &Grid<T>, d: &DensitySpec) -> ScalarField<T> {
    gaussian_density(g, T::lit(d.background), T::lit(d.amplitude), T::lit(d.width))
}

fn grid<T: Real>(cfg: &ExperimentConfig) -> Result<Grid<T>, CliError> {
    let s = &cfg.grid;
    Ok(Grid::centered_box(s.dim, s.cells, T::lit(s.half_width), s.periodic)?)
}

pub fn build<T: Real>(cfg: &ExperimentConfig) -> Result<(FluidState<T>, DataInfo), CliError> {
    let family = |f: Family| -> Result<_, CliError> {
        let out = standard_family(&grid::<T>(cfg)?, &f)?;
        Ok((out.rho, out.u, out.amplitude))
    };
    let (rho, u, amplitude) = match &cfg.data {
        DataSpec::Constant => family(Family::Constant { rho_bar: cfg.rho_bar })?,
        &DataSpec::Compressive1d { lambda0, inner, outer, rho_amplitude } => {
            family(Family::Compressive1d { lambda0, inner, outer, rho_amplitude })?
        }
        &DataSpec::ExpansiveLinear { inner, outer, rho_amplitude, rho_radius, rho_floor } => {
            family(Family::ExpansiveLinear { inner, outer, rho_amplitude, rho_radius, rho_floor })?
        }
        &DataSpec::SiderisPulse { excess, radius, margin } => {
            family(Family::SiderisPulse { rho_bar: cfg.rho_bar, excess, radius, margin, gamma: cfg.gamma })?
        }
        DataSpec::Example1 { radius, n, density: d } => {
            let g = grid::<T>(cfg)?;
            let u = example1(&g, T::lit(*radius), *n)?;
            (density(&g, d), u, 1.0)
        }
        &DataSpec::Example2 { radius, lambda, n } => {
            let g = grid::<T>(cfg)?;
            let (rho, u) = example2(&g, T::lit(radius), T::lit(lambda), T::lit(cfg.rho_bar), n)?;
            (rho, u, 1.0)
        }
        DataSpec::Example3 { radius, density: d } => {
            let g = grid::<T>(cfg)?;
            let u = example3_radial(&g, T::lit(*radius))?;
            (density(&g, d), u, 1.0)
        }
        DataSpec::Snapshot { path, format, periodic } => {
            let f = File::open(path).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
            let snap = read_snapshot(BufReader::new(f), *format, *periodic)?;
            let d = snap.grid.dim();
            if snap.comps.len() != d + 1 {
                return Err(CliError::Config(format!(
                    "{} holds {} components; a state needs density plus {d} velocity components",
                    path.display(),
                    snap.comps.len()
                )));
            }
            let g = snap.grid.cast::<T>();
            let cast = |c: &Vec<f64>| c.iter().map(|&v| T::lit(v)).collect::<Vec<T>>();
            let rho = ScalarField::new(g.clone(), cast(&snap.comps[0]))?;
            let u = VectorField::new(g, snap.comps[1..].iter().map(cast).collect())?;
            (rho, u, 1.0)
        }
    };
    let state = FluidState::new(rho, u, T::lit(cfg.gamma))?;
    let g = state.grid();
    let info = DataInfo {
        kind: cfg.data.kind(),
        cells: g.cells().to_vec(),
        spacing: g.spacing().iter().map(|v| v.as_f64()).collect(),
        origin: g.origin().iter().map(|v| v.as_f64()).collect(),
        periodic: g.periodic().to_vec(),
        amplitude,
        mass: state.rho.integral().as_f64(),
        max_density: blowup_lab::fields::linf_norm(&state.rho).as_f64(),
        max_speed: blowup_lab::fields::linf_magnitude(&state.u).as_f64(),
    };
    Ok((state, info))
}
