//! Discrete derivatives: second-order central differences or spectral
//! differentiation of the trigonometric interpolant.

use std::sync::Arc;

use rayon::prelude::*;
use rustfft::num_complex::Complex;
use rustfft::{Fft, FftPlanner};
use serde::{Deserialize, Serialize};

use super::field::{ScalarField, TensorField, VectorField};
use super::grid::Grid;
use crate::error::{Error, Result};
use crate::scalar::Real;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DiffMethod {
    Central,
    Spectral,
}

impl DiffMethod {
    /// Spectral on fully periodic grids, central otherwise.
    pub fn auto<T: Real>(grid: &Grid<T>) -> Self {
        if grid.all_periodic() {
            DiffMethod::Spectral
        } else {
            DiffMethod::Central
        }
    }
}

/// Angular wavenumber of FFT bin `j` on `n` points over length `len`.
/// The Nyquist bin of an even transform is mapped to zero so every
/// derivative order sees the same truncated spectrum.
#[inline]
pub(crate) fn wavenumber<T: Real>(j: usize, n: usize, len: T) -> T {
    let two_pi = T::lit(2.0) * T::PI();
    if 2 * j == n {
        T::zero()
    } else if 2 * j < n {
        two_pi * T::from_usize_lossy(j) / len
    } else {
        -two_pi * T::from_usize_lossy(n - j) / len
    }
}

/// Flat indices of the first cell of every line along `axis`.
fn line_starts<T: Real>(grid: &Grid<T>, axis: usize) -> Vec<usize> {
    (0..grid.len()).filter(|&k| grid.unflat(k)[axis] == 0).collect()
}

fn spectral_partial<T: Real>(grid: &Grid<T>, values: &[T], axis: usize, order: usize) -> Vec<T> {
    let n = grid.cells()[axis];
    let stride = grid.stride(axis);
    let len = T::from_usize_lossy(n) * grid.spacing()[axis];
    let mut planner = FftPlanner::<T>::new();
    let fwd: Arc<dyn Fft<T>> = planner.plan_fft_forward(n);
    let inv: Arc<dyn Fft<T>> = planner.plan_fft_inverse(n);
    // (iκ)^order per bin
    let mult: Vec<Complex<T>> = (0..n)
        .map(|j| {
            let kappa = wavenumber(j, n, len);
            let mut m = Complex::new(T::one(), T::zero());
            for _ in 0..order {
                m *= Complex::new(T::zero(), kappa);
            }
            m / T::from_usize_lossy(n)
        })
        .collect();
    let starts = line_starts(grid, axis);
    let lines: Vec<(usize, Vec<T>)> = starts
        .par_iter()
        .map(|&s| {
            let mut buf: Vec<Complex<T>> = (0..n).map(|i| Complex::new(values[s + i * stride], T::zero())).collect();
            fwd.process(&mut buf);
            for (b, m) in buf.iter_mut().zip(&mult) {
                *b *= *m;
            }
            inv.process(&mut buf);
            (s, buf.into_iter().map(|c| c.re).collect())
        })
        .collect();
    let mut out = vec![T::zero(); values.len()];
    for (s, line) in lines {
        for (i, v) in line.into_iter().enumerate() {
            out[s + i * stride] = v;
        }
    }
    out
}

fn central_first<T: Real>(grid: &Grid<T>, values: &[T], axis: usize) -> Vec<T> {
    let n = grid.cells()[axis];
    let h = grid.spacing()[axis];
    let inv2h = T::one() / (T::lit(2.0) * h);
    let periodic = grid.periodic()[axis];
    (0..values.len())
        .into_par_iter()
        .map(|k| {
            let i = grid.unflat(k)[axis];
            let s = grid.stride(axis);
            if periodic || (i > 0 && i + 1 < n) {
                let up = grid.neighbour(k, axis, 1).unwrap();
                let dn = grid.neighbour(k, axis, -1).unwrap();
                (values[up] - values[dn]) * inv2h
            } else if n < 3 {
                let (a, b) = if i == 0 { (k, k + s) } else { (k - s, k) };
                (values[b] - values[a]) / h
            } else if i == 0 {
                (-T::lit(3.0) * values[k] + T::lit(4.0) * values[k + s] - values[k + 2 * s]) * inv2h
            } else {
                (T::lit(3.0) * values[k] - T::lit(4.0) * values[k - s] + values[k - 2 * s]) * inv2h
            }
        })
        .collect()
}

/// ∂^order / ∂x_axis^order of a flat cell array.
pub fn partial<T: Real>(grid: &Grid<T>, values: &[T], axis: usize, order: usize, method: DiffMethod) -> Result<Vec<T>> {
    if values.len() != grid.len() {
        return Err(Error::Shape("value array does not match grid".into()));
    }
    if axis >= grid.dim() {
        return Err(Error::InvalidArgument(format!("axis {axis} out of range")));
    }
    if order == 0 {
        return Ok(values.to_vec());
    }
    match method {
        DiffMethod::Spectral => {
            if !grid.periodic()[axis] {
                return Err(Error::NotPeriodic);
            }
            Ok(spectral_partial(grid, values, axis, order))
        }
        DiffMethod::Central => {
            let mut v = central_first(grid, values, axis);
            for _ in 1..order {
                v = central_first(grid, &v, axis);
            }
            Ok(v)
        }
    }
}

/// Mixed partial ∂^α with α given per axis.
pub fn partial_multi<T: Real>(grid: &Grid<T>, values: &[T], alpha: &[usize], method: DiffMethod) -> Result<Vec<T>> {
    let mut v = values.to_vec();
    for (axis, &o) in alpha.iter().enumerate() {
        if o > 0 {
            v = partial(grid, &v, axis, o, method)?;
        }
    }
    Ok(v)
}

/// All multi-indices α ∈ ℕ^d with |α| = k.
pub fn multi_indices(d: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(d: usize, k: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if prefix.len() + 1 == d {
            prefix.push(k);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for a in 0..=k {
            prefix.push(a);
            rec(d, k - a, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(d, k, &mut Vec::new(), &mut out);
    out
}

/// Multinomial k!/α!: the number of ordered index tuples producing α.
pub fn multinomial(alpha: &[usize]) -> u64 {
    let fact = |n: usize| (1..=n as u64).product::<u64>();
    fact(alpha.iter().sum()) / alpha.iter().map(|&a| fact(a)).product::<u64>()
}

/// Pointwise |∇^k f|² = Σ_{i₁..i_k} (∂_{i₁}…∂_{i_k} f)².
pub fn derivative_magnitude_sq<T: Real>(grid: &Grid<T>, values: &[T], k: usize, method: DiffMethod) -> Result<Vec<T>> {
    let mut acc = vec![T::zero(); values.len()];
    for alpha in multi_indices(grid.dim(), k) {
        let w = T::lit(multinomial(&alpha) as f64);
        let da = partial_multi(grid, values, &alpha, method)?;
        acc.par_iter_mut().zip(da.par_iter()).for_each(|(a, &x)| *a += w * x * x);
    }
    Ok(acc)
}

pub fn gradient<T: Real>(f: &ScalarField<T>, method: DiffMethod) -> Result<VectorField<T>> {
    let comps = (0..f.grid.dim()).map(|a| partial(&f.grid, &f.values, a, 1, method)).collect::<Result<Vec<_>>>()?;
    VectorField::new(f.grid.clone(), comps)
}

/// Jacobian with entry (i, j) = ∂_j u_i.
pub fn jacobian<T: Real>(u: &VectorField<T>, method: DiffMethod) -> Result<TensorField<T>> {
    let d = u.dim();
    let mut comps = Vec::with_capacity(d * d);
    for i in 0..d {
        for j in 0..d {
            comps.push(partial(&u.grid, &u.comps[i], j, 1, method)?);
        }
    }
    TensorField::new(u.grid.clone(), comps)
}

pub fn divergence<T: Real>(u: &VectorField<T>, method: DiffMethod) -> Result<ScalarField<T>> {
    let mut acc = vec![T::zero(); u.grid.len()];
    for a in 0..u.dim() {
        let p = partial(&u.grid, &u.comps[a], a, 1, method)?;
        acc.iter_mut().zip(p).for_each(|(s, x)| *s += x);
    }
    ScalarField::new(u.grid.clone(), acc)
}

/// Full d-dimensional forward FFT (unnormalised) of a real cell array.
pub(crate) fn fft_nd<T: Real>(grid: &Grid<T>, values: &[T]) -> Vec<Complex<T>> {
    let mut data: Vec<Complex<T>> = values.iter().map(|&v| Complex::new(v, T::zero())).collect();
    let mut planner = FftPlanner::<T>::new();
    for axis in 0..grid.dim() {
        let n = grid.cells()[axis];
        let stride = grid.stride(axis);
        let fft = planner.plan_fft_forward(n);
        let starts = line_starts(grid, axis);
        let lines: Vec<(usize, Vec<Complex<T>>)> = starts
            .par_iter()
            .map(|&s| {
                let mut buf: Vec<Complex<T>> = (0..n).map(|i| data[s + i * stride]).collect();
                fft.process(&mut buf);
                (s, buf)
            })
            .collect();
        for (s, line) in lines {
            for (i, v) in line.into_iter().enumerate() {
                data[s + i * stride] = v;
            }
        }
    }
    data
}

/// |κ|² for every FFT bin, Nyquist bins zeroed per axis.
pub(crate) fn wavenumber_sq<T: Real>(grid: &Grid<T>) -> Vec<T> {
    let d = grid.dim();
    let lens = grid.extent();
    (0..grid.len())
        .map(|k| {
            let idx = grid.unflat(k);
            (0..d)
                .map(|a| {
                    let kap = wavenumber(idx[a], grid.cells()[a], lens[a]);
                    kap * kap
                })
                .sum()
        })
        .collect()
}
