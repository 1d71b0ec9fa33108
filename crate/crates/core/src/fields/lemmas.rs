//! Numerical ratios for the two interpolation inequalities used in the
//! energy estimate. The constants are never fixed, so only ratios are
//! reported.

use serde::Serialize;

use super::calculus::{derivative_magnitude_sq, DiffMethod};
use super::field::ScalarField;
use crate::error::{Error, Result};
use crate::scalar::Real;

/// `None` marks a degenerate denominator (e.g. ∇³ψ ≡ 0).
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LemmaRatios<T> {
    /// ∫|∇²ψ|⁴ / (‖∇ψ‖²_∞ ∫|∇³ψ|²)
    pub ratio42: Option<T>,
    /// ∫(|∇²ψ|²+|∇²φ|²)(|∇³ψ|²+|∇³φ|²) / ((1+‖∇φ‖_∞+‖∇ψ‖_∞)³ ∫(|∇⁴φ|²+|∇⁴ψ|²))
    pub ratio43: Option<T>,
}

struct Jets<T> {
    d1_sup: T,
    d2: Vec<T>,
    d3: Vec<T>,
    d4: Vec<T>,
}

fn jets<T: Real>(f: &ScalarField<T>, method: DiffMethod) -> Result<Jets<T>> {
    let g = &f.grid;
    let d1 = derivative_magnitude_sq(g, &f.values, 1, method)?;
    Ok(Jets {
        d1_sup: d1.iter().fold(T::zero(), |m, &x| m.max(x)).sqrt(),
        d2: derivative_magnitude_sq(g, &f.values, 2, method)?,
        d3: derivative_magnitude_sq(g, &f.values, 3, method)?,
        d4: derivative_magnitude_sq(g, &f.values, 4, method)?,
    })
}

fn ratio<T: Real>(num: T, den: T) -> Option<T> {
    if den > T::min_positive_value() && den.is_finite() && num.is_finite() {
        Some(num / den)
    } else {
        None
    }
}

/// Both interpolation ratios with an explicit derivative method.
pub fn check_interpolation_lemmas_with<T: Real>(
    psi: &ScalarField<T>,
    phi: &ScalarField<T>,
    method: DiffMethod,
) -> Result<LemmaRatios<T>> {
    if !psi.grid.same_shape(&phi.grid) {
        return Err(Error::Shape("psi and phi live on different grids".into()));
    }
    psi.check_finite()?;
    phi.check_finite()?;
    let vol = psi.grid.cell_volume();
    let a = jets(psi, method)?;
    let b = jets(phi, method)?;

    let num42: T = a.d2.iter().map(|&x| x * x).sum::<T>() * vol;
    let int3: T = a.d3.iter().copied().sum::<T>() * vol;
    let ratio42 = ratio(num42, a.d1_sup * a.d1_sup * int3);

    let num43: T = (0..a.d2.len()).map(|k| (a.d2[k] + b.d2[k]) * (a.d3[k] + b.d3[k])).sum::<T>() * vol;
    let int4: T = a.d4.iter().zip(&b.d4).map(|(&x, &y)| x + y).sum::<T>() * vol;
    let pre = (T::one() + a.d1_sup + b.d1_sup).powi(3);
    let ratio43 = ratio(num43, pre * int4);
    Ok(LemmaRatios { ratio42, ratio43 })
}

/// Ratios with spectral derivatives on periodic grids, central otherwise.
pub fn check_interpolation_lemmas<T: Real>(psi: &ScalarField<T>, phi: &ScalarField<T>) -> Result<LemmaRatios<T>> {
    check_interpolation_lemmas_with(psi, phi, DiffMethod::auto(&psi.grid))
}
