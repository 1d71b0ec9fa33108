use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Uniform Cartesian mesh in 1, 2 or 3 dimensions.
///
/// Cells are stored row-major with the last axis fastest. Cell `i` along an
/// axis has its center at `origin + (i + 1/2)·spacing`, so `origin` is the
/// lower corner of the box.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Grid<T> {
    dim: usize,
    cells: [usize; 3],
    spacing: [T; 3],
    origin: [T; 3],
    periodic: [bool; 3],
}

impl<T: Real> Grid<T> {
    pub fn new(cells: &[usize], spacing: &[T], origin: &[T], periodic: &[bool]) -> Result<Self> {
        let dim = cells.len();
        if !(1..=3).contains(&dim) {
            return Err(Error::InvalidGrid(format!("dimension {dim} not in 1..=3")));
        }
        if spacing.len() != dim || origin.len() != dim || periodic.len() != dim {
            return Err(Error::InvalidGrid("per-axis arrays disagree in length".into()));
        }
        let mut g = Grid { dim, cells: [1; 3], spacing: [T::one(); 3], origin: [T::zero(); 3], periodic: [true; 3] };
        for a in 0..dim {
            if cells[a] < 2 {
                return Err(Error::InvalidGrid(format!("axis {a} has {} cells, need ≥ 2", cells[a])));
            }
            if !(spacing[a] > T::zero()) || !spacing[a].is_finite() {
                return Err(Error::InvalidGrid(format!("axis {a} spacing {} not positive", spacing[a])));
            }
            if !origin[a].is_finite() {
                return Err(Error::InvalidGrid(format!("axis {a} origin not finite")));
            }
            g.cells[a] = cells[a];
            g.spacing[a] = spacing[a];
            g.origin[a] = origin[a];
            g.periodic[a] = periodic[a];
        }
        Ok(g)
    }

    /// Box `[-half_width, half_width)^d` with `n` cells per axis.
    pub fn centered_box(dim: usize, n: usize, half_width: T, periodic: bool) -> Result<Self> {
        let h = T::lit(2.0) * half_width / T::from_usize_lossy(n.max(1));
        Self::new(&vec![n; dim], &vec![h; dim], &vec![-half_width; dim], &vec![periodic; dim])
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn cells(&self) -> &[usize] {
        &self.cells[..self.dim]
    }

    #[inline]
    pub fn spacing(&self) -> &[T] {
        &self.spacing[..self.dim]
    }

    #[inline]
    pub fn origin(&self) -> &[T] {
        &self.origin[..self.dim]
    }

    #[inline]
    pub fn periodic(&self) -> &[bool] {
        &self.periodic[..self.dim]
    }

    pub fn all_periodic(&self) -> bool {
        self.periodic().iter().all(|&p| p)
    }

    /// Total number of cells.
    #[inline]
    pub fn len(&self) -> usize {
        self.cells.iter().product()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn extent(&self) -> Vec<T> {
        (0..self.dim).map(|a| T::from_usize_lossy(self.cells[a]) * self.spacing[a]).collect()
    }

    pub fn cell_volume(&self) -> T {
        self.spacing().iter().fold(T::one(), |acc, &h| acc * h)
    }

    /// Distance between consecutive cells along `axis` in the flat array.
    #[inline]
    pub fn stride(&self, axis: usize) -> usize {
        self.cells[axis + 1..].iter().product()
    }

    #[inline]
    pub fn flat(&self, idx: [usize; 3]) -> usize {
        (idx[0] * self.cells[1] + idx[1]) * self.cells[2] + idx[2]
    }

    #[inline]
    pub fn unflat(&self, mut k: usize) -> [usize; 3] {
        let i2 = k % self.cells[2];
        k /= self.cells[2];
        let i1 = k % self.cells[1];
        [k / self.cells[1], i1, i2]
    }

    /// Center of cell `k`; unused axes are zero.
    #[inline]
    pub fn center(&self, k: usize) -> [T; 3] {
        let idx = self.unflat(k);
        let mut x = [T::zero(); 3];
        for a in 0..self.dim {
            x[a] = self.origin[a] + (T::from_usize_lossy(idx[a]) + T::lit(0.5)) * self.spacing[a];
        }
        x
    }

    /// Euclidean norm of the center of cell `k`.
    #[inline]
    pub fn radius(&self, k: usize) -> T {
        let x = self.center(k);
        (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]).sqrt()
    }

    /// Neighbour of `k` offset by `off` cells along `axis`, honouring
    /// periodicity; `None` off a non-periodic edge.
    #[inline]
    pub fn neighbour(&self, k: usize, axis: usize, off: isize) -> Option<usize> {
        let mut idx = self.unflat(k);
        let n = self.cells[axis] as isize;
        let mut i = idx[axis] as isize + off;
        if i < 0 || i >= n {
            if !self.periodic[axis] {
                return None;
            }
            i = i.rem_euclid(n);
        }
        idx[axis] = i as usize;
        Some(self.flat(idx))
    }

    /// True if cell `k` sits in the outermost layer of any non-periodic axis
    /// or, for periodic axes, the first/last layer of the box.
    pub fn on_boundary_layer(&self, k: usize) -> bool {
        let idx = self.unflat(k);
        (0..self.dim).any(|a| idx[a] == 0 || idx[a] + 1 == self.cells[a])
    }

    /// Same grid with every length multiplied by `s` (cell count unchanged).
    pub fn dilated(&self, s: T) -> Self {
        let mut g = self.clone();
        for a in 0..self.dim {
            g.spacing[a] *= s;
            g.origin[a] *= s;
        }
        g
    }

    pub fn with_periodic(&self, periodic: bool) -> Self {
        let mut g = self.clone();
        for a in 0..self.dim {
            g.periodic[a] = periodic;
        }
        g
    }

    /// Smallest spacing across axes.
    pub fn min_spacing(&self) -> T {
        self.spacing().iter().fold(T::infinity(), |m, &h| m.min(h))
    }

    /// Converts to a double-precision grid (for reports and snapshots).
    pub fn to_f64(&self) -> Grid<f64> {
        Grid {
            dim: self.dim,
            cells: self.cells,
            spacing: self.spacing.map(|x| x.as_f64()),
            origin: self.origin.map(|x| x.as_f64()),
            periodic: self.periodic,
        }
    }

    pub fn cast<U: Real>(&self) -> Grid<U> {
        Grid {
            dim: self.dim,
            cells: self.cells,
            spacing: self.spacing.map(|x| U::lit(x.as_f64())),
            origin: self.origin.map(|x| U::lit(x.as_f64())),
            periodic: self.periodic,
        }
    }

    pub fn same_shape(&self, other: &Self) -> bool {
        self.dim == other.dim && self.cells == other.cells
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_degenerate_axes() {
        assert!(Grid::<f64>::new(&[1], &[0.1], &[0.0], &[true]).is_err());
        assert!(Grid::<f64>::new(&[4], &[0.0], &[0.0], &[true]).is_err());
        assert!(Grid::<f64>::new(&[4, 4, 4, 4], &[1.0; 4], &[0.0; 4], &[true; 4]).is_err());
    }

    #[test]
    fn extent_and_centers() {
        let g = Grid::<f64>::new(&[4, 5], &[0.5, 0.2], &[-1.0, 0.0], &[true, false]).unwrap();
        assert_eq!(g.len(), 20);
        assert_eq!(g.extent(), vec![2.0, 1.0]);
        let c = g.center(g.flat([1, 2, 0]));
        assert!((c[0] - -0.25).abs() < 1e-15 && (c[1] - 0.5).abs() < 1e-15);
        assert_eq!(g.stride(0), 5);
        assert_eq!(g.stride(1), 1);
    }

    #[test]
    fn neighbours_wrap_only_when_periodic() {
        let g = Grid::<f64>::new(&[4, 3], &[1.0, 1.0], &[0.0, 0.0], &[true, false]).unwrap();
        let k = g.flat([0, 0, 0]);
        assert_eq!(g.neighbour(k, 0, -1), Some(g.flat([3, 0, 0])));
        assert_eq!(g.neighbour(k, 1, -1), None);
        assert_eq!(g.neighbour(k, 1, 1), Some(g.flat([0, 1, 0])));
    }

    #[test]
    fn flat_unflat_round_trip() {
        let g = Grid::<f64>::new(&[3, 4, 5], &[1.0; 3], &[0.0; 3], &[true; 3]).unwrap();
        for k in 0..g.len() {
            assert_eq!(g.flat(g.unflat(k)), k);
        }
    }
}
