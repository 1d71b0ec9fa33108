//! Smallness thresholds and lifespan bounds for the C¹ blow-up results.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fields::norms::shifted_sobolev_norm;
use crate::fields::state::VACUUM_CLAMP;
use crate::fields::{linf_norm, DiffMethod, ScalarField, VectorField};
use crate::scalar::Real;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct HmSmallness {
    pub value: f64,
    pub threshold: f64,
    pub holds: bool,
    pub m: usize,
    pub density_part: f64,
    pub velocity_part: f64,
    pub sup_density_power: f64,
}

/// Smallest admissible Sobolev index, the least integer m > 1 + d/2.
pub fn min_sobolev_index(d: usize) -> usize {
    d / 2 + 2
}

/// ρ^{(γ−1)/2}, with densities below the vacuum clamp mapped to 0.
pub fn density_power<T: Real>(rho: &ScalarField<T>, gamma: T) -> ScalarField<T> {
    let e = (gamma - T::one()) * T::lit(0.5);
    let clamp = T::lit(VACUUM_CLAMP);
    rho.map(|r| if r < clamp { T::zero() } else { r.powf(e) })
}

/// value = (‖∇²ρ₀^{(γ−1)/2}‖_{H^m} + ‖∇²u₀‖_{H^m}) ‖ρ₀^{(γ−1)/2}‖_∞,
/// threshold = λmax² / (5(γ−1)).
pub fn hm_smallness<T: Real>(
    rho0: &ScalarField<T>,
    u0: &VectorField<T>,
    m: usize,
    gamma: T,
    lambda_max: T,
    method: DiffMethod,
) -> Result<HmSmallness> {
    let d = rho0.grid.dim();
    if m < min_sobolev_index(d) {
        return Err(Error::InvalidArgument(format!("m = {m} must exceed 1 + d/2 = {}", 1.0 + d as f64 / 2.0)));
    }
    if !(gamma > T::one()) {
        return Err(Error::Gamma(gamma.as_f64()));
    }
    let f = density_power(rho0, gamma);
    let sup = linf_norm(&f);
    let dp = if sup == T::zero() { T::zero() } else { shifted_sobolev_norm(&f, 2, m, method)? };
    let vp = shifted_sobolev_norm(u0, 2, m, method)?;
    let value = (dp + vp) * sup;
    let threshold = lambda_max * lambda_max / (T::lit(5.0) * (gamma - T::one()));
    Ok(HmSmallness {
        value: value.as_f64(),
        threshold: threshold.as_f64(),
        holds: value < threshold,
        m,
        density_part: dp.as_f64(),
        velocity_part: vp.as_f64(),
        sup_density_power: sup.as_f64(),
    })
}

/// ε₀ = (λ₀ r / 2) [r M / λmax + 2 e^{M/λmax} / M]⁻¹.
pub fn prop23_epsilon<T: Real>(lambda0: T, lambda_max: T, r: T, big_m: T) -> Result<T> {
    if !(lambda0 > T::zero() && lambda_max > T::zero() && r > T::zero() && big_m > T::zero()) {
        return Err(Error::InvalidArgument("prop23_epsilon needs positive arguments".into()));
    }
    let q = big_m / lambda_max;
    let two = T::lit(2.0);
    Ok(lambda0 * r / two / (r * q + two * q.exp() / big_m))
}

/// Riccati comparison ν(t) ≥ 2ν₀ / (2 − ν₀ t), valid for t < 2/ν₀.
pub fn riccati_bound<T: Real>(nu0: T, t: T) -> Result<T> {
    if !(nu0 > T::zero()) || !(t >= T::zero()) {
        return Err(Error::InvalidArgument("riccati_bound needs nu0 > 0 and t ≥ 0".into()));
    }
    let two = T::lit(2.0);
    let pole = two / nu0;
    if t >= pole {
        return Err(Error::Pole { t: t.as_f64(), pole: pole.as_f64() });
    }
    Ok(two * nu0 / (two - nu0 * t))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::Grid;

    #[test]
    fn prop23_closed_form() {
        let e = std::f64::consts::E;
        let v = prop23_epsilon(1.0, 1.0, 1.0, 1.0).unwrap();
        assert!((v - 0.5 / (1.0 + 2.0 * e)).abs() < 1e-15);
        assert!((v - 0.077681).abs() < 1e-6);
        assert!(prop23_epsilon(1.0, 1.0, 1.0, 1e3).unwrap() < 1e-300);
        assert!(prop23_epsilon(0.0, 1.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn riccati_values() {
        assert_eq!(riccati_bound(1.0, 0.0).unwrap(), 1.0);
        assert_eq!(riccati_bound(1.0, 1.0).unwrap(), 2.0);
        assert!(riccati_bound(2.0, 0.999).unwrap() > 1e3);
        assert!(matches!(riccati_bound(2.0, 1.0), Err(Error::Pole { .. })));
    }

    #[test]
    fn vacuum_is_small() {
        let g = Grid::<f64>::centered_box(2, 32, 4.0, true).unwrap();
        let rho = ScalarField::zeros(&g);
        let u = VectorField::from_fn(&g, |x, o| {
            o[0] = (x[0] * std::f64::consts::FRAC_PI_4).sin();
            o[1] = 0.0;
        });
        let h = hm_smallness(&rho, &u, 3, 2.0, 1.0, DiffMethod::Spectral).unwrap();
        assert_eq!(h.value, 0.0);
        assert!((h.threshold - 0.2).abs() < 1e-15);
        assert!(h.holds);
        assert!(hm_smallness(&rho, &u, 2, 2.0, 1.0, DiffMethod::Spectral).is_err());
    }

    #[test]
    fn index_bound() {
        assert_eq!(min_sobolev_index(1), 2);
        assert_eq!(min_sobolev_index(2), 3);
        assert_eq!(min_sobolev_index(3), 3);
    }
}
