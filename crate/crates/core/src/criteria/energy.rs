//! Weighted energy of the deviation U = (π, u − v) from the Burgers flow.

use serde::Serialize;

use crate::burgers::{burgers_field, VelocitySampler};
use crate::error::{Error, Result};
use crate::euler::Trajectory;
use crate::fields::norms::seminorm_sq_component;
use crate::fields::{to_symmetrized, DiffMethod};
use crate::scalar::Real;

/// b = 1 − d/2 if γ ≥ 1 + 2/d, else (γ−1)d/2 − d/2.
pub fn decay_offset(gamma: f64, d: usize) -> f64 {
    let d = d as f64;
    if gamma >= 1.0 + 2.0 / d {
        1.0 - d / 2.0
    } else {
        (gamma - 1.0) * d / 2.0 - d / 2.0
    }
}

/// a = 1 + s + d/2.
pub fn decay_rate(s: f64, d: usize) -> f64 {
    1.0 + s + d as f64 / 2.0
}

/// δ_k = k + b − a.
pub fn weight_exponent(k: usize, gamma: f64, d: usize, s: f64) -> f64 {
    k as f64 + decay_offset(gamma, d) - decay_rate(s, d)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WeightedEnergy {
    pub times: Vec<f64>,
    /// Γ_k(t) for k = 0..=m, one row per snapshot.
    pub gamma_k: Vec<Vec<f64>>,
    pub gamma: Vec<f64>,
    /// Γ(t)(1+t)^a.
    pub scaled: Vec<f64>,
    pub a: f64,
    pub b: f64,
    pub deltas: Vec<f64>,
    /// Least-squares slope of log(Γ(1+t)^a) against log(1+t); 0 when Γ ≡ 0.
    pub slope: f64,
}

/// Γ(t) = Σ_{k≤m} (1+t)^{δ_k} Γ_k(t), Γ_k = ‖∇^k U‖_{L²}, at every snapshot.
pub fn weighted_energy<T: Real, S: VelocitySampler<T> + ?Sized>(
    traj: &Trajectory<T>,
    u0: &S,
    m: usize,
    s: f64,
    method: DiffMethod,
) -> Result<WeightedEnergy> {
    if traj.t_detect.is_some() {
        return Err(Error::BlowupTrajectory);
    }
    let first = traj.states.first().ok_or(Error::EmptyRegion)?;
    let g = first.grid().clone();
    let d = g.dim();
    let gamma = first.gamma.as_f64();
    let a = decay_rate(s, d);
    let b = decay_offset(gamma, d);
    let deltas: Vec<f64> = (0..=m).map(|k| weight_exponent(k, gamma, d, s)).collect();
    let mut out = WeightedEnergy {
        times: traj.times.clone(),
        gamma_k: Vec::new(),
        gamma: Vec::new(),
        scaled: Vec::new(),
        a,
        b,
        deltas: deltas.clone(),
        slope: 0.0,
    };
    for (&t, state) in traj.times.iter().zip(&traj.states) {
        let pi = to_symmetrized(state)?.pi;
        let v = burgers_field(u0, T::lit(t), &g)?;
        let w: Vec<Vec<T>> = state
            .u
            .comps
            .iter()
            .zip(&v.comps)
            .map(|(uc, vc)| uc.iter().zip(vc).map(|(&x, &y)| x - y).collect())
            .collect();
        let mut row = Vec::with_capacity(m + 1);
        for k in 0..=m {
            let mut sq = seminorm_sq_component(&g, &pi.values, k, method)?;
            for c in &w {
                sq += seminorm_sq_component(&g, c, k, method)?;
            }
            row.push(sq.sqrt().as_f64());
        }
        let total: f64 = row.iter().zip(&deltas).map(|(gk, dk)| (1.0 + t).powf(*dk) * gk).sum();
        out.gamma.push(total);
        out.scaled.push(total * (1.0 + t).powf(a));
        out.gamma_k.push(row);
    }
    let pts: Vec<(f64, f64)> =
        out.times.iter().zip(&out.scaled).filter(|(_, &v)| v > 0.0).map(|(&t, &v)| ((1.0 + t).ln(), v.ln())).collect();
    if pts.len() >= 2 {
        let n = pts.len() as f64;
        let xm = pts.iter().map(|p| p.0).sum::<f64>() / n;
        let ym = pts.iter().map(|p| p.1).sum::<f64>() / n;
        let sxx: f64 = pts.iter().map(|p| (p.0 - xm).powi(2)).sum();
        let sxy: f64 = pts.iter().map(|p| (p.0 - xm) * (p.1 - ym)).sum();
        if sxx > 0.0 {
            out.slope = sxy / sxx;
        }
    }
    Ok(out)
}
