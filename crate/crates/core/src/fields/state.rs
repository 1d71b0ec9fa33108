use super::field::{ScalarField, VectorField};
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Densities below this are treated as vacuum before fractional powers.
pub const VACUUM_CLAMP: f64 = 1e-14;

/// Density, velocity and adiabatic exponent for p = ρ^γ.
#[derive(Clone, Debug, PartialEq)]
pub struct FluidState<T> {
    pub rho: ScalarField<T>,
    pub u: VectorField<T>,
    pub gamma: T,
}

/// Symmetrized unknowns (π, u) with π = √((γ−1)/(4γ)) ρ^{(γ−1)/2}.
#[derive(Clone, Debug, PartialEq)]
pub struct SymmetrizedState<T> {
    pub pi: ScalarField<T>,
    pub u: VectorField<T>,
    pub gamma: T,
    pub c1: T,
}

fn check_gamma<T: Real>(gamma: T) -> Result<()> {
    if gamma > T::one() && gamma.is_finite() {
        Ok(())
    } else {
        Err(Error::Gamma(gamma.as_f64()))
    }
}

/// √((γ−1)/(4γ)).
pub fn pi_coefficient<T: Real>(gamma: T) -> T {
    ((gamma - T::one()) / (T::lit(4.0) * gamma)).sqrt()
}

impl<T: Real> FluidState<T> {
    pub fn new(rho: ScalarField<T>, u: VectorField<T>, gamma: T) -> Result<Self> {
        check_gamma(gamma)?;
        if !rho.grid.same_shape(&u.grid) {
            return Err(Error::Shape("density and velocity grids differ".into()));
        }
        let s = Self { rho, u, gamma };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        check_gamma(self.gamma)?;
        self.rho.check_finite()?;
        self.u.check_finite()?;
        if let Some(k) = self.rho.values.iter().position(|&r| r < T::zero()) {
            return Err(Error::Negative { cell: k, value: self.rho.values[k].as_f64() });
        }
        Ok(())
    }

    pub fn grid(&self) -> &super::grid::Grid<T> {
        &self.rho.grid
    }

    pub fn pressure(&self) -> ScalarField<T> {
        let g = self.gamma;
        self.rho.map(|r| r.powf(g))
    }

    /// Sound speed √γ ρ^{(γ−1)/2}.
    pub fn sound_speed(&self) -> ScalarField<T> {
        let g = self.gamma;
        let e = (g - T::one()) * T::lit(0.5);
        self.rho.map(|r| g.sqrt() * r.max(T::zero()).powf(e))
    }

    pub fn momentum(&self) -> VectorField<T> {
        let comps =
            self.u.comps.iter().map(|c| c.iter().zip(&self.rho.values).map(|(&u, &r)| u * r).collect()).collect();
        VectorField { grid: self.rho.grid.clone(), comps }
    }
}

/// Change of variables ρ ↦ π; densities below the vacuum clamp map to 0.
pub fn to_symmetrized<T: Real>(state: &FluidState<T>) -> Result<SymmetrizedState<T>> {
    check_gamma(state.gamma)?;
    let g = state.gamma;
    let coef = pi_coefficient(g);
    let e = (g - T::one()) * T::lit(0.5);
    let clamp = T::lit(VACUUM_CLAMP);
    let pi = state.rho.map(|r| if r < clamp { T::zero() } else { coef * r.powf(e) });
    Ok(SymmetrizedState { pi, u: state.u.clone(), gamma: g, c1: e })
}

/// Inverse change of variables π ↦ ρ.
pub fn from_symmetrized<T: Real>(s: &SymmetrizedState<T>) -> Result<FluidState<T>> {
    check_gamma(s.gamma)?;
    if let Some(k) = s.pi.values.iter().position(|&p| p < T::zero()) {
        return Err(Error::Negative { cell: k, value: s.pi.values[k].as_f64() });
    }
    let coef = pi_coefficient(s.gamma);
    let e = T::lit(2.0) / (s.gamma - T::one());
    let rho = s.pi.map(|p| if p == T::zero() { T::zero() } else { (p / coef).powf(e) });
    Ok(FluidState { rho, u: s.u.clone(), gamma: s.gamma })
}
