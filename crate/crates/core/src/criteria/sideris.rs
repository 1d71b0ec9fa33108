//! Integral and support conditions for the Sideris-type blow-up theorem.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fields::{ScalarField, VectorField};
use crate::scalar::Real;

/// Absolute tolerance for "equals the background".
pub const PLATEAU_TOL: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SiderisCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
    pub sigma: f64,
    pub radius: f64,
}

impl SiderisCheck {
    pub fn ratio(&self) -> f64 {
        self.lhs / self.rhs
    }
}

/// Area of the unit sphere S^{d−1} ⊂ ℝ^d: 2, 2π, 4π.
pub fn omega_d<T: Real>(d: usize) -> T {
    match d {
        1 => T::lit(2.0),
        2 => T::lit(2.0) * T::PI(),
        _ => T::lit(4.0) * T::PI(),
    }
}

/// Background sound speed σ = √γ ρ̄^{(γ−1)/2}.
pub fn background_sound_speed<T: Real>(rho_bar: T, gamma: T) -> T {
    gamma.sqrt() * rho_bar.powf((gamma - T::one()) * T::lit(0.5))
}

/// First cell outside B_R that differs from (ρ̄, 0) by more than `tol`.
fn first_exterior_violation<T: Real>(
    rho0: &ScalarField<T>,
    u0: &VectorField<T>,
    rho_bar: T,
    r: T,
    tol: T,
) -> Option<(usize, T)> {
    let g = &rho0.grid;
    (0..g.len()).find_map(|k| {
        if g.radius(k) <= r {
            return None;
        }
        let dr = (rho0.values[k] - rho_bar).abs();
        let du = u0.comps.iter().map(|c| c[k].abs()).fold(T::zero(), |a, b| a.max(b));
        let dev = dr.max(du);
        if dev > tol {
            Some((k, dev))
        } else {
            None
        }
    })
}

/// Support condition: (ρ₀, u₀) = (ρ̄, 0) outside B_R and ∫(ρ₀ − ρ̄) ≥ 0.
pub fn support_condition<T: Real>(rho0: &ScalarField<T>, u0: &VectorField<T>, rho_bar: T, r: T) -> bool {
    let tol = T::lit(PLATEAU_TOL);
    if first_exterior_violation(rho0, u0, rho_bar, r, tol).is_some() {
        return false;
    }
    let excess = rho0.values.iter().map(|&v| v - rho_bar).sum::<T>() * rho0.grid.cell_volume();
    let volume = rho0.grid.extent().iter().fold(T::one(), |a, &b| a * b);
    excess >= -tol * volume
}

/// lhs = (1/(ω_d R^{d+1})) ∫ ρ₀u₀·x, rhs = (d+1) σ ‖ρ₀‖_∞; holds iff lhs ≥ rhs.
pub fn sideris_condition<T: Real>(
    rho0: &ScalarField<T>,
    u0: &VectorField<T>,
    rho_bar: T,
    r: T,
    gamma: T,
) -> Result<SiderisCheck> {
    if !(r > T::zero()) || !(rho_bar > T::zero()) {
        return Err(Error::InvalidArgument("R and rho_bar must be positive".into()));
    }
    if !(gamma > T::one()) {
        return Err(Error::Gamma(gamma.as_f64()));
    }
    let g = &rho0.grid;
    if !g.same_shape(&u0.grid) {
        return Err(Error::Shape("density and velocity grids differ".into()));
    }
    if let Some((k, dev)) = first_exterior_violation(rho0, u0, rho_bar, r, T::lit(PLATEAU_TOL)) {
        return Err(Error::Support(format!(
            "cell {k} at |x| = {} deviates by {} from the background",
            g.radius(k),
            dev
        )));
    }
    sideris_quantities(rho0, u0, rho_bar, r, gamma)
}

/// The two sides of the integral condition without the exterior plateau check.
pub fn sideris_quantities<T: Real>(
    rho0: &ScalarField<T>,
    u0: &VectorField<T>,
    rho_bar: T,
    r: T,
    gamma: T,
) -> Result<SiderisCheck> {
    if !(r > T::zero()) || !(rho_bar > T::zero()) {
        return Err(Error::InvalidArgument("R and rho_bar must be positive".into()));
    }
    if !(gamma > T::one()) {
        return Err(Error::Gamma(gamma.as_f64()));
    }
    let g = &rho0.grid;
    if !g.same_shape(&u0.grid) {
        return Err(Error::Shape("density and velocity grids differ".into()));
    }
    let d = g.dim();
    let moment: T = (0..g.len())
        .map(|k| {
            let x = g.center(k);
            let ux: T = (0..d).map(|a| u0.comps[a][k] * x[a]).sum();
            rho0.values[k] * ux
        })
        .sum::<T>()
        * g.cell_volume();
    let lhs = moment / (omega_d::<T>(d) * r.powi(d as i32 + 1));
    let sigma = background_sound_speed(rho_bar, gamma);
    let sup = rho0.values.iter().fold(T::zero(), |m, &v| m.max(v.abs()));
    let rhs = T::from_usize_lossy(d + 1) * sigma * sup;
    Ok(SiderisCheck {
        lhs: lhs.as_f64(),
        rhs: rhs.as_f64(),
        holds: lhs >= rhs,
        sigma: sigma.as_f64(),
        radius: r.as_f64(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::Grid;

    #[test]
    fn zero_velocity_fails() {
        let g = Grid::<f64>::centered_box(2, 32, 4.0, true).unwrap();
        let rho = ScalarField::constant(&g, 1.0);
        let u = VectorField::zeros(&g);
        let s = sideris_condition(&rho, &u, 1.0, 2.0, 2.0).unwrap();
        assert_eq!(s.lhs, 0.0);
        assert!(!s.holds);
        assert!((s.sigma - 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn exterior_motion_is_a_support_error() {
        let g = Grid::<f64>::centered_box(1, 32, 4.0, true).unwrap();
        let rho = ScalarField::constant(&g, 1.0);
        let u = VectorField::from_fn(&g, |x, o| o[0] = x[0]);
        assert!(matches!(sideris_condition(&rho, &u, 1.0, 2.0, 2.0), Err(Error::Support(_))));
    }

    #[test]
    fn support_condition_cases() {
        let g = Grid::<f64>::centered_box(2, 32, 4.0, true).unwrap();
        let u = VectorField::zeros(&g);
        let flat = ScalarField::constant(&g, 1.0);
        assert!(support_condition(&flat, &u, 1.0, 1.0));
        let bump = ScalarField::from_fn(&g, |x| 1.0 + if x[0].hypot(x[1]) < 1.0 { 0.3 } else { 0.0 });
        assert!(support_condition(&bump, &u, 1.0, 1.5));
        let dip = ScalarField::from_fn(&g, |x| 1.0 - if x[0].hypot(x[1]) < 1.0 { 0.3 } else { 0.0 });
        assert!(!support_condition(&dip, &u, 1.0, 1.5));
        assert!(!support_condition(&bump, &u, 1.0, 0.5));
    }

    #[test]
    fn sphere_areas() {
        assert_eq!(omega_d::<f64>(1), 2.0);
        assert!((omega_d::<f64>(3) - 4.0 * std::f64::consts::PI).abs() < 1e-15);
    }
}
