use rayon::prelude::*;

use super::grid::Grid;
use crate::error::{Error, Result};
use crate::linalg::Mat;
use crate::scalar::Real;

/// One real value per cell.
#[derive(Clone, Debug, PartialEq)]
pub struct ScalarField<T> {
    pub grid: Grid<T>,
    pub values: Vec<T>,
}

/// `d` components per cell, stored component-major.
#[derive(Clone, Debug, PartialEq)]
pub struct VectorField<T> {
    pub grid: Grid<T>,
    pub comps: Vec<Vec<T>>,
}

/// `d×d` components per cell; component `i*d + j` holds ∂_j u_i.
#[derive(Clone, Debug, PartialEq)]
pub struct TensorField<T> {
    pub grid: Grid<T>,
    pub comps: Vec<Vec<T>>,
}

fn first_non_finite<T: Real>(v: &[T]) -> Option<usize> {
    v.iter().position(|x| !x.is_finite())
}

impl<T: Real> ScalarField<T> {
    pub fn new(grid: Grid<T>, values: Vec<T>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::Shape(format!("{} values for {} cells", values.len(), grid.len())));
        }
        Ok(Self { grid, values })
    }

    pub fn constant(grid: &Grid<T>, c: T) -> Self {
        Self { grid: grid.clone(), values: vec![c; grid.len()] }
    }

    pub fn zeros(grid: &Grid<T>) -> Self {
        Self::constant(grid, T::zero())
    }

    /// Samples `f` at cell centers.
    pub fn from_fn(grid: &Grid<T>, f: impl Fn(&[T]) -> T + Sync) -> Self {
        let d = grid.dim();
        let values = (0..grid.len()).into_par_iter().map(|k| f(&grid.center(k)[..d])).collect();
        Self { grid: grid.clone(), values }
    }

    pub fn map(&self, f: impl Fn(T) -> T + Sync) -> Self {
        Self { grid: self.grid.clone(), values: self.values.par_iter().map(|&v| f(v)).collect() }
    }

    pub fn check_finite(&self) -> Result<()> {
        match first_non_finite(&self.values) {
            Some(k) => Err(Error::NonFinite(k)),
            None => Ok(()),
        }
    }

    /// Midpoint-rule integral.
    pub fn integral(&self) -> T {
        self.values.iter().copied().sum::<T>() * self.grid.cell_volume()
    }
}

impl<T: Real> VectorField<T> {
    pub fn new(grid: Grid<T>, comps: Vec<Vec<T>>) -> Result<Self> {
        if comps.len() != grid.dim() {
            return Err(Error::Shape(format!("{} components for dimension {}", comps.len(), grid.dim())));
        }
        if comps.iter().any(|c| c.len() != grid.len()) {
            return Err(Error::Shape("component length differs from cell count".into()));
        }
        Ok(Self { grid, comps })
    }

    pub fn zeros(grid: &Grid<T>) -> Self {
        Self { grid: grid.clone(), comps: vec![vec![T::zero(); grid.len()]; grid.dim()] }
    }

    /// Samples `f` at cell centers; `f` writes `d` components into its output slice.
    pub fn from_fn(grid: &Grid<T>, f: impl Fn(&[T], &mut [T]) + Sync) -> Self {
        let d = grid.dim();
        let flat: Vec<[T; 3]> = (0..grid.len())
            .into_par_iter()
            .map(|k| {
                let mut out = [T::zero(); 3];
                f(&grid.center(k)[..d], &mut out[..d]);
                out
            })
            .collect();
        let comps = (0..d).map(|c| flat.iter().map(|v| v[c]).collect()).collect();
        Self { grid: grid.clone(), comps }
    }

    pub fn dim(&self) -> usize {
        self.grid.dim()
    }

    #[inline]
    pub fn at(&self, k: usize) -> [T; 3] {
        let mut v = [T::zero(); 3];
        for (c, comp) in self.comps.iter().enumerate() {
            v[c] = comp[k];
        }
        v
    }

    /// Pointwise Euclidean magnitude.
    pub fn magnitude(&self) -> ScalarField<T> {
        let values = (0..self.grid.len())
            .into_par_iter()
            .map(|k| self.comps.iter().map(|c| c[k] * c[k]).sum::<T>().sqrt())
            .collect();
        ScalarField { grid: self.grid.clone(), values }
    }

    pub fn check_finite(&self) -> Result<()> {
        for c in &self.comps {
            if let Some(k) = first_non_finite(c) {
                return Err(Error::NonFinite(k));
            }
        }
        Ok(())
    }
}

impl<T: Real> TensorField<T> {
    pub fn new(grid: Grid<T>, comps: Vec<Vec<T>>) -> Result<Self> {
        let d = grid.dim();
        if comps.len() != d * d || comps.iter().any(|c| c.len() != grid.len()) {
            return Err(Error::Shape("tensor field needs d² components of cell-count length".into()));
        }
        Ok(Self { grid, comps })
    }

    pub fn dim(&self) -> usize {
        self.grid.dim()
    }

    /// The matrix at cell `k`.
    #[inline]
    pub fn at(&self, k: usize) -> Mat<T> {
        let d = self.dim();
        Mat::from_fn(d, |i, j| self.comps[i * d + j][k])
    }

    /// Largest absolute entry over all cells and components.
    pub fn max_abs(&self) -> T {
        self.comps.par_iter().map(|c| c.iter().fold(T::zero(), |m, &x| m.max(x.abs()))).reduce(T::zero, |a, b| a.max(b))
    }

    pub fn check_finite(&self) -> Result<()> {
        for c in &self.comps {
            if let Some(k) = first_non_finite(c) {
                return Err(Error::NonFinite(k));
            }
        }
        Ok(())
    }
}
