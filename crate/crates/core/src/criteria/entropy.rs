//! Relative entropy about the background state (ρ̄, 0) and its flux.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fields::state::VACUUM_CLAMP;
use crate::fields::{FluidState, ScalarField, VectorField};
use crate::scalar::Real;

/// P(ρ) = ρ^γ / (γ−1).
pub fn internal_energy<T: Real>(rho: T, gamma: T) -> T {
    rho.max(T::zero()).powf(gamma) / (gamma - T::one())
}

/// P′(ρ) = γ ρ^{γ−1} / (γ−1).
pub fn internal_energy_derivative<T: Real>(rho: T, gamma: T) -> T {
    gamma * rho.max(T::zero()).powf(gamma - T::one()) / (gamma - T::one())
}

/// η(ρ, m) = |m|²/(2ρ) + P(ρ) − P′(ρ̄)(ρ − ρ̄) − P(ρ̄) for one cell.
pub fn relative_entropy_density<T: Real>(rho: T, m: &[T], rho_bar: T, gamma: T) -> T {
    let m2: T = m.iter().map(|&v| v * v).sum();
    let kin = if rho < T::lit(VACUUM_CLAMP) { T::zero() } else { m2 / (T::lit(2.0) * rho) };
    let p = internal_energy(rho, gamma);
    let pb = internal_energy(rho_bar, gamma);
    let dpb = internal_energy_derivative(rho_bar, gamma);
    // grouped so that (ρ̄, 0) gives an exact zero
    kin + ((p - pb) - dpb * (rho - rho_bar))
}

#[derive(Clone, Debug, PartialEq)]
pub struct RelativeEntropyPair<T> {
    pub eta: ScalarField<T>,
    pub q: VectorField<T>,
}

/// η and Q = (m/ρ) η cellwise. Vacuum cells must carry no momentum.
pub fn relative_entropy<T: Real>(state: &FluidState<T>, rho_bar: T) -> Result<RelativeEntropyPair<T>> {
    if !(rho_bar > T::zero()) {
        return Err(Error::InvalidArgument("rho_bar must be positive".into()));
    }
    let g = state.grid();
    let d = g.dim();
    let gamma = state.gamma;
    let clamp = T::lit(VACUUM_CLAMP);
    let cells: Vec<(T, [T; 3])> = (0..g.len())
        .into_par_iter()
        .map(|k| {
            let rho = state.rho.values[k];
            let u = state.u.at(k);
            let mut m = [T::zero(); 3];
            for a in 0..d {
                m[a] = rho * u[a];
            }
            if rho < clamp {
                if m[..d].iter().any(|&v| v.abs() > clamp) {
                    return Err(Error::VacuumMomentum(k));
                }
                let eta = relative_entropy_density(T::zero(), &[], rho_bar, gamma);
                return Ok((eta, [T::zero(); 3]));
            }
            let eta = relative_entropy_density(rho, &m[..d], rho_bar, gamma);
            let mut q = [T::zero(); 3];
            for a in 0..d {
                q[a] = u[a] * eta;
            }
            Ok((eta, q))
        })
        .collect::<Result<_>>()?;
    let eta = ScalarField::new(g.clone(), cells.iter().map(|c| c.0).collect())?;
    let q = VectorField::new(g.clone(), (0..d).map(|a| cells.iter().map(|c| c.1[a]).collect()).collect())?;
    Ok(RelativeEntropyPair { eta, q })
}
