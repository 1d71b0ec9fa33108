//! Finite speed of propagation: (ρ, u) = (ρ̄, 0) outside |x| ≥ R + σt.

use serde::{Deserialize, Serialize};

use super::sideris::background_sound_speed;
use crate::euler::{max_wave_speed, Reconstruction, Trajectory};
use crate::scalar::Real;

/// Widening of the continuous cone allowed for the discrete scheme.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ConePadding {
    /// Stencil radius × steps taken × largest spacing: the hard domain of
    /// dependence of the explicit scheme.
    StencilBound,
    /// 2h + k √(2 ν t) with ν = ½ s_max h the Rusanov numerical viscosity.
    Diffusive {
        k: f64,
    },
    Absolute {
        pad: f64,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ConeSample {
    pub t: f64,
    /// R + σt + padding.
    pub radius: f64,
    pub deviation: f64,
}

/// Per snapshot, max over cells with |x| > R + σt + pad of |ρ − ρ̄| + |u|.
pub fn cone_check<T: Real>(traj: &Trajectory<T>, rho_bar: f64, r: f64, padding: ConePadding) -> Vec<ConeSample> {
    let Some(first) = traj.states.first() else {
        return Vec::new();
    };
    let g = first.grid();
    let gamma = first.gamma.as_f64();
    let sigma = background_sound_speed(rho_bar, gamma);
    let h = g.spacing().iter().fold(0.0f64, |a, v| a.max(v.as_f64()));
    let s_max = traj.states.iter().map(|s| max_wave_speed(s).as_f64()).fold(0.0, f64::max);
    let stencil = match traj.config.reconstruction {
        Reconstruction::FirstOrder => 1.0,
        _ => 2.0,
    };
    traj.times
        .iter()
        .zip(&traj.states)
        .map(|(&t, s)| {
            let pad = match padding {
                ConePadding::StencilBound => {
                    // two stages per step
                    let steps = traj.series.iter().filter(|row| row.t > 0.0 && row.t <= t).count() as f64;
                    2.0 * stencil * steps * h
                }
                ConePadding::Diffusive { k } => 2.0 * h + k * (2.0 * 0.5 * s_max * h * t).sqrt(),
                ConePadding::Absolute { pad } => pad,
            };
            let radius = r + sigma * t + pad;
            let rb = T::lit(rho_bar);
            let dev = (0..g.len())
                .filter(|&k| g.radius(k).as_f64() > radius)
                .map(|k| {
                    let u = s.u.at(k);
                    let speed = (u[0] * u[0] + u[1] * u[1] + u[2] * u[2]).sqrt();
                    ((s.rho.values[k] - rb).abs() + speed).as_f64()
                })
                .fold(0.0, f64::max);
            ConeSample { t, radius, deviation: dev }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::euler::{run, SolverConfig};
    use crate::fields::{FluidState, Grid, ScalarField, VectorField};

    #[test]
    fn constant_state_has_no_deviation() {
        let g = Grid::<f64>::centered_box(1, 64, 4.0, true).unwrap();
        let s = FluidState::new(ScalarField::constant(&g, 1.0), VectorField::zeros(&g), 2.0).unwrap();
        let tr = run(&s, &SolverConfig { t_end: 0.5, ..Default::default() }).unwrap();
        let c = cone_check(&tr, 1.0, 1.0, ConePadding::Absolute { pad: 0.0 });
        assert!(c.iter().all(|s| s.deviation == 0.0));
        assert!((c.last().unwrap().radius - (1.0 + 2f64.sqrt() * 0.5)).abs() < 1e-12);
    }
}
