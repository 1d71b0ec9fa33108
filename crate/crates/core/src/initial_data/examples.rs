//! The explicit velocity data of the three worked examples, plus the
//! density companions used with them.

use super::bump::{smooth_bump, BumpProfile};
use crate::error::{Error, Result};
use crate::fields::{Grid, ScalarField, VectorField};
use crate::scalar::Real;

fn unit_cutoff<T: Real>() -> BumpProfile<T> {
    BumpProfile { inner: T::one(), outer: T::lit(2.0) }
}

fn require_2d<T: Real>(grid: &Grid<T>) -> Result<()> {
    if grid.dim() != 2 {
        return Err(Error::InvalidArgument(format!("example data lives in 2D, grid is {}D", grid.dim())));
    }
    Ok(())
}

/// Pointwise velocity of example 1:
/// u₁ = −x₁(1+x₁²/R²)^{−n} φ((1+x₁²/R²)x₂/R), u₂ the same with the axes swapped.
pub fn example1_at<T: Real>(x: &[T], r: T, n: i32) -> [T; 2] {
    let phi = unit_cutoff::<T>();
    let comp = |a: T, b: T| {
        let w = T::one() + a * a / (r * r);
        -a * w.powi(-n) * smooth_bump(&phi, w * b / r)
    };
    [comp(x[0], x[1]), comp(x[1], x[0])]
}

pub fn example1<T: Real>(grid: &Grid<T>, r: T, n: u32) -> Result<VectorField<T>> {
    require_2d(grid)?;
    if !(r > T::one()) {
        return Err(Error::InvalidArgument("example 1 needs R > 1".into()));
    }
    if n < 1 {
        return Err(Error::InvalidArgument("example 1 needs n ≥ 1".into()));
    }
    let n = n as i32;
    Ok(VectorField::from_fn(grid, |x, out| {
        let v = example1_at(x, r, n);
        out[0] = v[0];
        out[1] = v[1];
    }))
}

/// Example 1 velocity cut off by ψ_λ (1 on B(0,2R), 0 outside B(0,λ)) over a
/// constant density ρ̄.
pub fn example2<T: Real>(
    grid: &Grid<T>,
    r: T,
    lambda: T,
    rho_bar: T,
    n: u32,
) -> Result<(ScalarField<T>, VectorField<T>)> {
    if !(lambda > T::lit(2.0) * r) {
        return Err(Error::InvalidArgument("example 2 needs lambda > 2R".into()));
    }
    if !(rho_bar >= T::zero()) {
        return Err(Error::InvalidArgument("rho_bar must be non-negative".into()));
    }
    let mut u = example1(grid, r, n)?;
    let psi = BumpProfile::new(T::lit(2.0) * r, lambda)?;
    for k in 0..grid.len() {
        let w = smooth_bump(&psi, grid.radius(k));
        for c in u.comps.iter_mut() {
            c[k] *= w;
        }
    }
    Ok((ScalarField::constant(grid, rho_bar), u))
}

/// h(z) = R e^{−z/R} φ(z − R) and its derivative.
pub fn example3_profile<T: Real>(z: T, r: T) -> (T, T) {
    let phi = unit_cutoff::<T>();
    let s = z - r;
    let e = (-z / r).exp();
    let p = smooth_bump(&phi, s);
    let dp = phi.derivative(s) * s.signum();
    (r * e * p, -e * p + r * e * dp)
}

pub fn example3_at<T: Real>(x: &[T], r: T) -> [T; 2] {
    let rad = (x[0] * x[0] + x[1] * x[1]).sqrt();
    if rad == T::zero() {
        return [T::zero(); 2];
    }
    let (h, _) = example3_profile(rad, r);
    [h * x[0] / rad, h * x[1] / rad]
}

/// Radial velocity h(|x|) x/|x|; R > 3 keeps the origin outside supp h.
pub fn example3_radial<T: Real>(grid: &Grid<T>, r: T) -> Result<VectorField<T>> {
    require_2d(grid)?;
    if !(r > T::lit(3.0)) {
        return Err(Error::InvalidArgument("example 3 needs R > 3 for regularity at the origin".into()));
    }
    Ok(VectorField::from_fn(grid, |x, out| {
        let v = example3_at(x, r);
        out[0] = v[0];
        out[1] = v[1];
    }))
}

/// ρ̄ + a exp(−|x|²/w²).
pub fn gaussian_density<T: Real>(grid: &Grid<T>, background: T, amplitude: T, width: T) -> ScalarField<T> {
    ScalarField::from_fn(grid, |x| {
        let r2: T = x.iter().map(|&v| v * v).sum();
        background + amplitude * (-r2 / (width * width)).exp()
    })
}

/// ρ̄ + a φ(|x|) with φ the smooth bump on (inner, outer): compactly supported.
pub fn bump_density<T: Real>(grid: &Grid<T>, background: T, amplitude: T, profile: BumpProfile<T>) -> ScalarField<T> {
    ScalarField::from_fn(grid, |x| {
        let r: T = x.iter().map(|&v| v * v).sum::<T>().sqrt();
        background + amplitude * smooth_bump(&profile, r)
    })
}
