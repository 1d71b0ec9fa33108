//! Exact characteristic solution of ∂_t v + v·∇v = 0, v(0) = u₀.

use rayon::prelude::*;
use serde::Serialize;

use super::sampler::VelocitySampler;
use crate::error::{Error, Result};
use crate::fields::{jacobian, DiffMethod, TensorField, VectorField};
use crate::linalg::Mat;
use crate::scalar::Real;

/// Newton iteration cap for characteristic inversion.
pub const NEWTON_MAX_ITER: usize = 50;
/// Step factor applied whenever a Newton step increases the residual.
pub const NEWTON_DAMPING: f64 = 0.5;

/// (I + tA)⁻¹ A, the Burgers velocity gradient along the characteristic
/// starting where ∇u₀ = A.
pub fn burgers_gradient<T: Real>(grad_u0: &Mat<T>, t: T) -> Result<Mat<T>> {
    let d = grad_u0.dim();
    let m = Mat::identity(d).add(&grad_u0.scale(t));
    let scale = T::one().max(grad_u0.frobenius() * t.abs());
    let det = m.det();
    let singular = det.abs() <= T::lit(64.0) * T::epsilon() * scale.powi(d as i32);
    match (singular, m.inverse()) {
        (false, Some(inv)) => Ok(inv.mul(grad_u0)),
        _ => {
            let crit = grad_u0
                .real_eigenvalues()
                .into_iter()
                .filter(|&l| l < T::zero())
                .map(|l| -T::one() / l)
                .fold(t, |a, b| if (b - t).abs() < (a - t).abs() { b } else { a });
            Err(Error::BlowupReached { t: crit.as_f64() })
        }
    }
}

/// Outcome of scanning ∇u₀ for negative real eigenvalues.
///
/// `t_star` is `f64::INFINITY` when no cell has a negative real eigenvalue
/// (serialized as `null`).
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BlowupVerdict {
    pub blows_up: bool,
    pub t_star: f64,
    pub x_star: Vec<f64>,
    pub cell: Option<usize>,
    /// Most negative real eigenvalue over all cells (smallest real one if none is negative).
    pub lambda: f64,
    /// Symmetric-part spectrum at `x_star`.
    pub sym_spectrum: Vec<f64>,
    /// Full real spectrum at `x_star`.
    pub real_spectrum: Vec<f64>,
    /// ∇u₀(x_star) is not symmetric (relative tolerance 1e-8).
    pub asymmetric: bool,
}

/// Relative tolerance used to call two candidate blow-up times equal.
const TIE_TOL: f64 = 1e-12;

pub fn blowup_time_from_gradient<T: Real>(grad: &TensorField<T>) -> Result<BlowupVerdict> {
    grad.check_finite()?;
    let g = &grad.grid;
    // (lambda_min, |x|, cell)
    let best = (0..g.len())
        .into_par_iter()
        .filter_map(|k| {
            let ev = grad.at(k).real_eigenvalues();
            ev.first().map(|&l| (l.as_f64(), g.radius(k).as_f64(), k))
        })
        .reduce_with(|a, b| {
            let tie = (a.0 - b.0).abs() <= TIE_TOL * a.0.abs().max(b.0.abs());
            if tie {
                if (b.1, b.2) < (a.1, a.2) {
                    b
                } else {
                    a
                }
            } else if b.0 < a.0 {
                b
            } else {
                a
            }
        });
    let Some((lambda, _, cell)) = best else {
        return Ok(BlowupVerdict {
            blows_up: false,
            t_star: f64::INFINITY,
            x_star: Vec::new(),
            cell: None,
            lambda: f64::NAN,
            sym_spectrum: Vec::new(),
            real_spectrum: Vec::new(),
            asymmetric: false,
        });
    };
    let a = grad.at(cell);
    let asym = a.asymmetry() > T::lit(1e-8) * a.frobenius();
    let blows_up = lambda < 0.0;
    Ok(BlowupVerdict {
        blows_up,
        t_star: if blows_up { -1.0 / lambda } else { f64::INFINITY },
        x_star: g.center(cell)[..g.dim()].iter().map(|v| v.as_f64()).collect(),
        cell: Some(cell),
        lambda,
        sym_spectrum: a.sym_eigenvalues().iter().map(|v| v.as_f64()).collect(),
        real_spectrum: a.real_eigenvalues().iter().map(|v| v.as_f64()).collect(),
        asymmetric: asym,
    })
}

/// First caustic time t* = min over cells and negative real eigenvalues λ of −1/λ.
pub fn burgers_blowup_time<T: Real>(u0: &VectorField<T>, method: DiffMethod) -> Result<BlowupVerdict> {
    u0.check_finite()?;
    blowup_time_from_gradient(&jacobian(u0, method)?)
}

/// The map x₀ ↦ x₀ + t u₀(x₀) for fixed t.
pub struct CharacteristicMap<'a, T, S: ?Sized> {
    pub u0: &'a S,
    pub t: T,
}

impl<'a, T: Real, S: VelocitySampler<T> + ?Sized> CharacteristicMap<'a, T, S> {
    pub fn new(u0: &'a S, t: T) -> Self {
        Self { u0, t }
    }

    pub fn forward(&self, x0: &[T]) -> Vec<T> {
        let u = self.u0.value(x0);
        x0.iter().zip(u).map(|(&x, v)| x + self.t * v).collect()
    }

    /// Foot x₀ of the characteristic through `x`, by damped Newton.
    pub fn invert(&self, x: &[T]) -> Result<Vec<T>> {
        let d = self.u0.dim();
        let norm = |v: &[T]| v.iter().map(|&a| a * a).sum::<T>().sqrt();
        let xnorm = norm(x);
        let tol = T::lit(1e-10).max(T::lit(64.0) * T::epsilon()) * (T::one() + xnorm);
        let floor = T::lit(8.0) * T::epsilon() * (T::one() + xnorm);
        let residual = |x0: &[T]| -> Vec<T> {
            let f = self.forward(x0);
            f.iter().zip(x).map(|(&a, &b)| a - b).collect()
        };
        let mut x0 = x.to_vec();
        let mut r = residual(&x0);
        let mut rn = norm(&r);
        for it in 0..NEWTON_MAX_ITER {
            if rn <= floor {
                return Ok(x0);
            }
            let jm = Mat::identity(d).add(&self.u0.jacobian(&x0).scale(self.t));
            let Some(inv) = jm.inverse() else {
                return Err(Error::NewtonFailed { iterations: it, residual: rn.as_f64() });
            };
            let step = inv.mul_vec(&r);
            let mut lam = T::one();
            let mut accepted = false;
            for _ in 0..30 {
                let cand: Vec<T> = x0.iter().zip(&step).map(|(&a, &s)| a - lam * s).collect();
                let rc = residual(&cand);
                let rcn = norm(&rc);
                if rcn < rn {
                    x0 = cand;
                    r = rc;
                    rn = rcn;
                    accepted = true;
                    break;
                }
                lam *= T::lit(NEWTON_DAMPING);
            }
            if !accepted {
                // no further decrease: converged to roundoff or stuck
                return if rn <= tol {
                    Ok(x0)
                } else {
                    Err(Error::NewtonFailed { iterations: it, residual: rn.as_f64() })
                };
            }
        }
        if rn <= tol {
            Ok(x0)
        } else {
            Err(Error::NewtonFailed { iterations: NEWTON_MAX_ITER, residual: rn.as_f64() })
        }
    }
}

/// v(t, x) = u₀(x₀) with x₀ + t u₀(x₀) = x.
pub fn evaluate_burgers<T: Real, S: VelocitySampler<T> + ?Sized>(u0: &S, t: T, x: &[T]) -> Result<Vec<T>> {
    if t == T::zero() {
        return Ok(u0.value(x));
    }
    let x0 = CharacteristicMap::new(u0, t).invert(x)?;
    Ok(u0.value(&x0))
}

/// ∇v(t, x) evaluated through the characteristic foot of `x`.
pub fn burgers_gradient_at<T: Real, S: VelocitySampler<T> + ?Sized>(u0: &S, t: T, x: &[T]) -> Result<Mat<T>> {
    let x0 = CharacteristicMap::new(u0, t).invert(x)?;
    burgers_gradient(&u0.jacobian(&x0), t)
}

/// v(t, ·) sampled at every cell center of `grid`.
pub fn burgers_field<T: Real, S: VelocitySampler<T> + ?Sized>(
    u0: &S,
    t: T,
    grid: &crate::fields::Grid<T>,
) -> Result<VectorField<T>> {
    let d = grid.dim();
    let vals: Vec<Vec<T>> = (0..grid.len())
        .into_par_iter()
        .map(|k| evaluate_burgers(u0, t, &grid.center(k)[..d]))
        .collect::<Result<_>>()?;
    let comps = (0..d).map(|c| vals.iter().map(|v| v[c]).collect()).collect();
    VectorField::new(grid.clone(), comps)
}

/// Cells of Ω_α: smallest eigenvalue of the symmetric part of ∇u₀ ≥ α.
pub fn omega_alpha_cells<T: Real>(grad_u0: &TensorField<T>, alpha: T) -> Vec<usize> {
    (0..grad_u0.grid.len()).into_par_iter().filter(|&k| grad_u0.at(k).sym_eigenvalues()[0] >= alpha).collect()
}

/// sup over the images of `region` of max_ij |(1+t)²(∇v − (1+t)⁻¹ I)|.
pub fn grassin_remainder<T: Real>(grad_u0: &TensorField<T>, t: T, region: &[usize]) -> Result<T> {
    if region.is_empty() {
        return Err(Error::EmptyRegion);
    }
    let d = grad_u0.dim();
    let s = T::one() + t;
    let lead = Mat::identity(d).scale(T::one() / s);
    region
        .par_iter()
        .map(|&k| {
            let gv = burgers_gradient(&grad_u0.at(k), t)?;
            Ok(gv.sub(&lead).scale(s * s).max_abs())
        })
        .try_reduce(T::zero, |a, b| Ok(a.max(b)))
}
