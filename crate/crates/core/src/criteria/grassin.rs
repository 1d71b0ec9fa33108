//! Hypotheses of the global existence result for expansive data.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::Result;
use crate::fields::norms::shifted_sobolev_norm;
use crate::fields::{jacobian, DiffMethod, ScalarField, TensorField, VectorField};
use crate::scalar::Real;

/// Tolerance on the infimum of ∇u₀:ξ⊗ξ in the non-negativity hypothesis.
pub const G2_TOL: f64 = 1e-10;
/// Density values above this count as inside supp ρ₀.
pub const SUPPORT_TOL: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct GrassinCheck {
    pub g1: bool,
    pub g2: bool,
    pub g3: bool,
    pub alpha: f64,
    pub hessian_norm: f64,
    pub gradient_sup: f64,
    /// inf over cells of the smallest eigenvalue of ½(∇u₀ + ∇u₀ᵀ).
    pub min_quadratic_form: f64,
    /// Smallest symmetric-part eigenvalue over supp ρ₀ (+∞ if ρ₀ ≡ 0).
    pub min_on_support: f64,
}

pub fn grassin_from_gradient<T: Real>(
    rho0: &ScalarField<T>,
    u0: &VectorField<T>,
    grad: &TensorField<T>,
    m: usize,
    alpha: T,
    method: DiffMethod,
) -> Result<GrassinCheck> {
    let hess = if m >= 1 { shifted_sobolev_norm(u0, 2, m - 1, method)? } else { T::zero() };
    let sup = grad.max_abs();
    let n = rho0.grid.len();
    let sym_min: Vec<T> = (0..n).into_par_iter().map(|k| grad.at(k).sym_eigenvalues()[0]).collect();
    let inf = sym_min.iter().fold(T::infinity(), |a, &b| a.min(b));
    let supp_tol = T::lit(SUPPORT_TOL);
    let on_supp = (0..n).filter(|&k| rho0.values[k].abs() > supp_tol).fold(T::infinity(), |a, k| a.min(sym_min[k]));
    Ok(GrassinCheck {
        g1: hess.is_finite() && sup.is_finite(),
        g2: inf >= -T::lit(G2_TOL),
        g3: alpha > T::zero() && on_supp >= alpha,
        alpha: alpha.as_f64(),
        hessian_norm: hess.as_f64(),
        gradient_sup: sup.as_f64(),
        min_quadratic_form: inf.as_f64(),
        min_on_support: on_supp.as_f64(),
    })
}

/// (G-1) ∇²u₀ ∈ H^{m−1}, ∇u₀ ∈ L^∞; (G-2) ∇u₀:ξ⊗ξ ≥ 0; (G-3) supp ρ₀ inside
/// {smallest symmetric eigenvalue ≥ α}.
pub fn grassin_hypotheses<T: Real>(
    rho0: &ScalarField<T>,
    u0: &VectorField<T>,
    m: usize,
    alpha: T,
    method: DiffMethod,
) -> Result<GrassinCheck> {
    let grad = jacobian(u0, method)?;
    grassin_from_gradient(rho0, u0, &grad, m, alpha, method)
}
