//! L^∞, L² and integer-order Sobolev norms with midpoint quadrature.
//!
//! Sums run sequentially in cell order so results do not depend on the
//! number of threads.

use rayon::prelude::*;

use super::calculus::{derivative_magnitude_sq, fft_nd, wavenumber_sq, DiffMethod};
use super::field::{ScalarField, TensorField, VectorField};
use super::grid::Grid;
use crate::error::Result;
use crate::scalar::Real;

/// Anything that is a list of cell arrays over one grid.
pub trait Components<T> {
    fn grid(&self) -> &Grid<T>;
    fn components(&self) -> Vec<&[T]>;
}

impl<T: Real> Components<T> for ScalarField<T> {
    fn grid(&self) -> &Grid<T> {
        &self.grid
    }
    fn components(&self) -> Vec<&[T]> {
        vec![&self.values]
    }
}

impl<T: Real> Components<T> for VectorField<T> {
    fn grid(&self) -> &Grid<T> {
        &self.grid
    }
    fn components(&self) -> Vec<&[T]> {
        self.comps.iter().map(|c| c.as_slice()).collect()
    }
}

impl<T: Real> Components<T> for TensorField<T> {
    fn grid(&self) -> &Grid<T> {
        &self.grid
    }
    fn components(&self) -> Vec<&[T]> {
        self.comps.iter().map(|c| c.as_slice()).collect()
    }
}

/// Largest absolute entry over all cells and components.
pub fn linf_norm<T: Real, F: Components<T>>(f: &F) -> T {
    f.components()
        .into_iter()
        .map(|c| c.par_iter().map(|x| x.abs()).reduce(T::zero, |a, b| a.max(b)))
        .fold(T::zero(), |a, b| a.max(b))
}

/// sup_x |f(x)| with |·| the Euclidean norm of the per-cell component vector.
pub fn linf_magnitude<T: Real, F: Components<T>>(f: &F) -> T {
    let comps = f.components();
    (0..f.grid().len())
        .into_par_iter()
        .map(|k| comps.iter().map(|c| c[k] * c[k]).sum::<T>().sqrt())
        .reduce(T::zero, |a, b| a.max(b))
}

/// (h^d Σ |f|²)^{1/2}, summed over components.
pub fn l2_norm<T: Real, F: Components<T>>(f: &F) -> T {
    let s: T = f.components().into_iter().map(|c| c.iter().map(|&x| x * x).sum::<T>()).sum();
    (s * f.grid().cell_volume()).sqrt()
}

/// ‖∇^k c‖²_{L²} for one cell array.
pub fn seminorm_sq_component<T: Real>(grid: &Grid<T>, c: &[T], k: usize, method: DiffMethod) -> Result<T> {
    let vol = grid.cell_volume();
    if k == 0 {
        return Ok(c.iter().map(|&x| x * x).sum::<T>() * vol);
    }
    match method {
        DiffMethod::Spectral => {
            if !grid.all_periodic() {
                return Err(crate::error::Error::NotPeriodic);
            }
            let spec = fft_nd(grid, c);
            let k2 = wavenumber_sq(grid);
            let s: T = spec.iter().zip(&k2).map(|(z, &q)| q.powi(k as i32) * z.norm_sqr()).sum();
            Ok(s * vol / T::from_usize_lossy(grid.len()))
        }
        DiffMethod::Central => {
            let m = derivative_magnitude_sq(grid, c, k, method)?;
            Ok(m.iter().copied().sum::<T>() * vol)
        }
    }
}

/// ‖∇^k f‖_{L²}, summed over components.
pub fn seminorm<T: Real, F: Components<T>>(f: &F, k: usize, method: DiffMethod) -> Result<T> {
    let mut s = T::zero();
    for c in f.components() {
        s += seminorm_sq_component(f.grid(), c, k, method)?;
    }
    Ok(s.sqrt())
}

/// Whether any component is non-negligible in the outermost cell layer.
pub fn touches_boundary<T: Real, F: Components<T>>(f: &F, rel_tol: T) -> bool {
    let scale = linf_norm(f);
    if scale == T::zero() {
        return false;
    }
    let g = f.grid();
    f.components().iter().any(|c| (0..g.len()).any(|k| g.on_boundary_layer(k) && c[k].abs() > rel_tol * scale))
}

/// H^m norm (Σ_{k≤m} ‖∇^k f‖²)^{1/2} with an explicit derivative method.
pub fn sobolev_norm_with<T: Real, F: Components<T>>(f: &F, m: usize, method: DiffMethod) -> Result<T> {
    if touches_boundary(f, T::lit(1e-10)) {
        log::warn!("field support reaches the box boundary; truncated Sobolev norm is unreliable");
    }
    let mut s = T::zero();
    for k in 0..=m {
        let sk = seminorm(f, k, method)?;
        s += sk * sk;
    }
    Ok(s.sqrt())
}

/// H^m norm; spectral on periodic grids, central differences otherwise.
pub fn sobolev_norm<T: Real, F: Components<T>>(f: &F, m: usize) -> Result<T> {
    sobolev_norm_with(f, m, DiffMethod::auto(f.grid()))
}

/// ‖∇^j f‖_{H^m} = (Σ_{k≤m} ‖∇^{k+j} f‖²)^{1/2}.
pub fn shifted_sobolev_norm<T: Real, F: Components<T>>(f: &F, j: usize, m: usize, method: DiffMethod) -> Result<T> {
    let mut s = T::zero();
    for k in 0..=m {
        let sk = seminorm(f, k + j, method)?;
        s += sk * sk;
    }
    Ok(s.sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn unit_periodic(n: usize) -> Grid<f64> {
        Grid::new(&[n], &[1.0 / n as f64], &[0.0], &[true]).unwrap()
    }

    #[test]
    fn zero_field_norms_vanish() {
        let g = unit_periodic(32);
        let f = ScalarField::zeros(&g);
        assert_eq!(linf_norm(&f), 0.0);
        assert_eq!(l2_norm(&f), 0.0);
        assert_eq!(sobolev_norm(&f, 3).unwrap(), 0.0);
    }

    #[test]
    fn h1_norm_of_sine() {
        let g = unit_periodic(64);
        let f = ScalarField::from_fn(&g, |x| (2.0 * PI * x[0]).sin());
        let expect = (0.5 + (2.0 * PI).powi(2) / 2.0).sqrt();
        assert!((sobolev_norm(&f, 1).unwrap() - expect).abs() < 1e-12);
        assert!((expect - 4.4990).abs() < 5e-4);
    }

    #[test]
    fn spectral_and_central_seminorms_agree_on_smooth_data() {
        let g = Grid::<f64>::new(&[256], &[1.0 / 256.0], &[0.0], &[true]).unwrap();
        let f = ScalarField::from_fn(&g, |x| (2.0 * PI * x[0]).cos());
        let s = seminorm(&f, 2, DiffMethod::Spectral).unwrap();
        let c = seminorm(&f, 2, DiffMethod::Central).unwrap();
        assert!((s - c).abs() / s < 1e-3);
    }

    #[test]
    fn single_cell_l2() {
        let g = Grid::<f64>::new(&[4, 4], &[0.5, 0.5], &[0.0, 0.0], &[true, true]).unwrap();
        let mut f = ScalarField::zeros(&g);
        f.values[5] = -3.0;
        assert!((l2_norm(&f) - 3.0 * 0.5).abs() < 1e-15);
        assert_eq!(linf_norm(&f), 3.0);
    }

    #[test]
    fn constant_norms() {
        let g = unit_periodic(10);
        let f = ScalarField::constant(&g, -2.0);
        assert_eq!(linf_norm(&f), 2.0);
        assert!((l2_norm(&f) - 2.0).abs() < 1e-14);
    }

    #[test]
    fn magnitude_norm_uses_euclidean_length() {
        let g = Grid::<f64>::new(&[4, 4], &[1.0, 1.0], &[0.0, 0.0], &[true, true]).unwrap();
        let u = VectorField::from_fn(&g, |_, o| {
            o[0] = 3.0;
            o[1] = 4.0;
        });
        assert_eq!(linf_norm(&u), 4.0);
        assert!((linf_magnitude(&u) - 5.0).abs() < 1e-15);
    }
}
