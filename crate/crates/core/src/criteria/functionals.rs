//! The mass excess M(t) and radial momentum F(t) along a run.

use serde::Serialize;

use crate::euler::Trajectory;
use crate::scalar::Real;

/// Absolute deviation from (ρ̄, 0) counted as "reaching the boundary".
pub const BOUNDARY_TOL: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SiderisFunctionals {
    /// Snapshot times.
    pub times: Vec<f64>,
    pub f: Vec<f64>,
    pub m: Vec<f64>,
    /// ∫₀ᵗ ∫ ρ|u|² at the snapshot times (trapezoid over every step).
    pub kinetic_integral: Vec<f64>,
    /// min over snapshot pairs t₁ < t₂ of F(t₂) − F(t₁) − ∫_{t₁}^{t₂}∫ρ|u|².
    pub min_rate_margin: f64,
    pub f_rate_ok: bool,
    pub m_drift: f64,
    pub m_const_ok: bool,
    /// Some snapshot differs from the background in the outermost cell layer,
    /// so the moment integral is truncated.
    pub touches_boundary: bool,
}

/// Series of F and M with the checks F(t₂) − F(t₁) ≥ ∫∫ρ|u|² − `rate_tol` and
/// |M(t) − M(0)| ≤ `drift_tol` relative.
///
/// The drift is relative to |M(0)|, or to the total mass when |M(0)| is below
/// 1e-8 of it.
pub fn sideris_functionals<T: Real>(
    traj: &Trajectory<T>,
    rho_bar: f64,
    rate_tol: f64,
    drift_tol: f64,
) -> SiderisFunctionals {
    let series = &traj.series;
    let volume: f64 = traj.states.first().map_or(0.0, |s| s.grid().extent().iter().map(|v| v.as_f64()).product());
    let m_of = |mass: f64| mass - rho_bar * volume;
    // cumulative trapezoid of the kinetic integral over all steps
    let mut cum = Vec::with_capacity(series.len());
    let mut acc = 0.0;
    for (i, r) in series.iter().enumerate() {
        if i > 0 {
            let p = &series[i - 1];
            acc += 0.5 * (r.t - p.t) * (r.kinetic + p.kinetic);
        }
        cum.push(acc);
    }
    let idx: Vec<usize> =
        traj.times.iter().map(|&t| series.iter().position(|r| r.t == t).unwrap_or(series.len() - 1)).collect();
    let f: Vec<f64> = idx.iter().map(|&i| series[i].f).collect();
    let m: Vec<f64> = idx.iter().map(|&i| m_of(series[i].mass)).collect();
    let kin: Vec<f64> = idx.iter().map(|&i| cum[i]).collect();
    let mut min_margin = f64::INFINITY;
    for i in 0..f.len() {
        for j in i + 1..f.len() {
            min_margin = min_margin.min((f[j] - f[i]) - (kin[j] - kin[i]));
        }
    }
    let mass0 = series.first().map_or(0.0, |r| r.mass.abs());
    let m0 = m.first().copied().unwrap_or(0.0);
    let scale = if m0.abs() > 1e-8 * mass0 { m0.abs() } else { mass0.max(f64::MIN_POSITIVE) };
    let m_drift = m.iter().map(|v| (v - m0).abs()).fold(0.0, f64::max) / scale;
    let touches = traj.states.iter().any(|s| {
        let g = s.grid();
        let rb = T::lit(rho_bar);
        (0..g.len()).any(|k| {
            g.on_boundary_layer(k) && {
                let u = s.u.at(k);
                let dev =
                    (s.rho.values[k] - rb).abs().as_f64() + u.iter().map(|v| v.abs().as_f64()).fold(0.0, f64::max);
                dev > BOUNDARY_TOL
            }
        })
    });
    SiderisFunctionals {
        times: traj.times.clone(),
        f,
        m,
        kinetic_integral: kin,
        min_rate_margin: if min_margin.is_finite() { min_margin } else { 0.0 },
        f_rate_ok: min_margin >= -rate_tol || !min_margin.is_finite(),
        m_drift,
        m_const_ok: m_drift <= drift_tol,
        touches_boundary: touches,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::euler::{run, SolverConfig};
    use crate::fields::{FluidState, Grid, ScalarField, VectorField};

    #[test]
    fn static_state_has_zero_functionals() {
        let g = Grid::<f64>::centered_box(2, 16, 2.0, true).unwrap();
        let s = FluidState::new(ScalarField::constant(&g, 1.0), VectorField::zeros(&g), 2.0).unwrap();
        let tr = run(&s, &SolverConfig { t_end: 0.2, snapshot_stride: 2, ..Default::default() }).unwrap();
        let sf = sideris_functionals(&tr, 1.0, 1e-6, 1e-10);
        assert!(sf.f.iter().all(|v| v.abs() < 1e-14));
        assert!(sf.m.iter().all(|v| v.abs() < 1e-12));
        assert!(sf.f_rate_ok && sf.m_const_ok && !sf.touches_boundary);
    }
}
