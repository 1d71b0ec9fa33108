//! Standard test families used by the simulations and the CLI.

use serde::{Deserialize, Serialize};

use super::bump::{smooth_bump, BumpProfile};
use crate::criteria::sideris::sideris_condition;
use crate::error::{Error, Result};
use crate::fields::{Grid, ScalarField, VectorField};
use crate::scalar::Real;

/// Generator parameters. Stored in `f64` so configs deserialize directly.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Family {
    /// u₀ = −λ₀ x φ(|x|) with ρ₀ ≡ `rho_amplitude`; slope exactly −λ₀ on the plateau.
    #[serde(rename = "compressive_1d")]
    Compressive1d {
        lambda0: f64,
        inner: f64,
        outer: f64,
        rho_amplitude: f64,
    },
    /// u₀ = x φ(|x|); ρ₀ = `rho_floor` + `rho_amplitude` times a bump of radius `rho_radius`.
    ExpansiveLinear {
        inner: f64,
        outer: f64,
        rho_amplitude: f64,
        rho_radius: f64,
        #[serde(default)]
        rho_floor: f64,
    },
    /// ρ₀ = ρ̄ + excess φ, u₀ = A (x/R) φ with φ supported in B_R and A
    /// bisected until lhs/rhs of the Sideris condition equals `margin`.
    SiderisPulse {
        rho_bar: f64,
        excess: f64,
        radius: f64,
        margin: f64,
        gamma: f64,
    },
    Constant {
        rho_bar: f64,
    },
}

impl Family {
    pub fn name(&self) -> &'static str {
        match self {
            Family::Compressive1d { .. } => "compressive_1d",
            Family::ExpansiveLinear { .. } => "expansive_linear",
            Family::SiderisPulse { .. } => "sideris_pulse",
            Family::Constant { .. } => "constant",
        }
    }
}

fn radius_of(x: &[impl Real]) -> f64 {
    x.iter().map(|v| v.as_f64() * v.as_f64()).sum::<f64>().sqrt()
}

/// Result of [`standard_family`]; `amplitude` is the solved velocity scale for
/// `sideris_pulse`, 1 otherwise.
#[derive(Clone, Debug)]
pub struct Generated<T> {
    pub rho: ScalarField<T>,
    pub u: VectorField<T>,
    pub amplitude: f64,
}

pub fn standard_family<T: Real>(grid: &Grid<T>, family: &Family) -> Result<Generated<T>> {
    match *family {
        Family::Compressive1d { lambda0, inner, outer, rho_amplitude } => {
            if !(lambda0 > 0.0) || rho_amplitude < 0.0 {
                return Err(Error::InvalidArgument("compressive_1d needs lambda0 > 0, rho ≥ 0".into()));
            }
            let phi = BumpProfile::new(T::lit(inner), T::lit(outer))?;
            let l0 = T::lit(lambda0);
            let u = VectorField::from_fn(grid, |x, out| {
                let w = smooth_bump(&phi, T::lit(radius_of(x)));
                for (o, &xi) in out.iter_mut().zip(x) {
                    *o = -l0 * xi * w;
                }
            });
            Ok(Generated { rho: ScalarField::constant(grid, T::lit(rho_amplitude)), u, amplitude: 1.0 })
        }
        Family::ExpansiveLinear { inner, outer, rho_amplitude, rho_radius, rho_floor } => {
            if rho_amplitude < 0.0 || rho_floor < 0.0 || !(rho_radius > 0.0) {
                return Err(Error::InvalidArgument("expansive_linear density parameters invalid".into()));
            }
            let phi = BumpProfile::new(T::lit(inner), T::lit(outer))?;
            let dens = BumpProfile::new(T::lit(0.5 * rho_radius), T::lit(rho_radius))?;
            let u = VectorField::from_fn(grid, |x, out| {
                let w = smooth_bump(&phi, T::lit(radius_of(x)));
                for (o, &xi) in out.iter_mut().zip(x) {
                    *o = xi * w;
                }
            });
            let (a, f) = (T::lit(rho_amplitude), T::lit(rho_floor));
            let rho = ScalarField::from_fn(grid, |x| f + a * smooth_bump(&dens, T::lit(radius_of(x))));
            Ok(Generated { rho, u, amplitude: 1.0 })
        }
        Family::SiderisPulse { rho_bar, excess, radius, margin, gamma } => {
            sideris_pulse(grid, rho_bar, excess, radius, margin, gamma)
        }
        Family::Constant { rho_bar } => {
            if rho_bar < 0.0 {
                return Err(Error::InvalidArgument("rho_bar must be non-negative".into()));
            }
            Ok(Generated {
                rho: ScalarField::constant(grid, T::lit(rho_bar)),
                u: VectorField::zeros(grid),
                amplitude: 1.0,
            })
        }
    }
}

fn sideris_pulse<T: Real>(
    grid: &Grid<T>,
    rho_bar: f64,
    excess: f64,
    radius: f64,
    margin: f64,
    gamma: f64,
) -> Result<Generated<T>> {
    if !(rho_bar > 0.0 && excess >= 0.0 && radius > 0.0 && margin > 0.0 && gamma > 1.0) {
        return Err(Error::InvalidArgument("sideris_pulse parameters out of range".into()));
    }
    let fits = (0..grid.len()).all(|k| !grid.on_boundary_layer(k) || grid.radius(k).as_f64() > radius);
    if !fits {
        return Err(Error::Bisection(format!("box too small for pulse radius {radius}")));
    }
    let phi = BumpProfile::new(T::lit(0.5 * radius), T::lit(radius))?;
    let weights: Vec<T> = (0..grid.len()).map(|k| smooth_bump(&phi, grid.radius(k))).collect();
    let rho = ScalarField::new(grid.clone(), weights.iter().map(|&w| T::lit(rho_bar) + T::lit(excess) * w).collect())?;
    let d = grid.dim();
    let r = T::lit(radius);
    let velocity = |amp: f64| {
        let a = T::lit(amp);
        let comps = (0..d).map(|c| (0..grid.len()).map(|k| a * grid.center(k)[c] / r * weights[k]).collect()).collect();
        VectorField { grid: grid.clone(), comps }
    };
    let ratio = |amp: f64| -> Result<f64> {
        let s = sideris_condition(&rho, &velocity(amp), T::lit(rho_bar), r, T::lit(gamma))?;
        Ok(s.lhs / s.rhs)
    };
    let mut hi = 1.0;
    let mut tries = 0;
    while ratio(hi)? < margin {
        hi *= 2.0;
        tries += 1;
        if tries > 200 {
            return Err(Error::Bisection("could not bracket the requested margin".into()));
        }
    }
    let mut lo = 0.0;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if ratio(mid)? < margin {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-14 * hi {
            break;
        }
    }
    let amp = 0.5 * (lo + hi);
    Ok(Generated { rho, u: velocity(amp), amplitude: amp })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::criteria::sideris::support_condition;

    #[test]
    fn sideris_pulse_hits_margin() {
        let g = Grid::<f64>::centered_box(2, 64, 4.0, true).unwrap();
        let fam = Family::SiderisPulse { rho_bar: 1.0, excess: 0.5, radius: 2.0, margin: 1.5, gamma: 2.0 };
        let d = standard_family(&g, &fam).unwrap();
        let s = sideris_condition(&d.rho, &d.u, 1.0, 2.0, 2.0).unwrap();
        assert!((s.lhs / s.rhs - 1.5).abs() < 0.01);
        assert!(s.holds);
        assert!(support_condition(&d.rho, &d.u, 1.0, 2.0));
    }

    #[test]
    fn sideris_pulse_too_large_for_box() {
        let g = Grid::<f64>::centered_box(1, 32, 2.0, true).unwrap();
        let fam = Family::SiderisPulse { rho_bar: 1.0, excess: 0.5, radius: 3.0, margin: 1.5, gamma: 2.0 };
        assert!(matches!(standard_family(&g, &fam), Err(Error::Bisection(_))));
    }

    #[test]
    fn constant_passes_support_fails_sideris() {
        let g = Grid::<f64>::centered_box(2, 32, 4.0, true).unwrap();
        let d = standard_family(&g, &Family::Constant { rho_bar: 1.0 }).unwrap();
        assert!(support_condition(&d.rho, &d.u, 1.0, 1.0));
        assert!(!sideris_condition(&d.rho, &d.u, 1.0, 1.0, 2.0).unwrap().holds);
    }

    #[test]
    fn compressive_slope_on_plateau() {
        let g = Grid::<f64>::centered_box(1, 64, 4.0, true).unwrap();
        let fam = Family::Compressive1d { lambda0: 1.0, inner: 1.0, outer: 3.0, rho_amplitude: 1e-4 };
        let d = standard_family(&g, &fam).unwrap();
        for k in 0..g.len() {
            let x = g.center(k)[0];
            if x.abs() <= 1.0 {
                assert!((d.u.comps[0][k] + x).abs() < 1e-15);
            }
        }
    }
}
