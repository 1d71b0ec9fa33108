//! Negative definiteness of the velocity gradient at a point.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::Result;
use crate::fields::{jacobian, DiffMethod, TensorField, VectorField};
use crate::scalar::Real;

/// Relative asymmetry ‖A − Aᵀ‖ / ‖A‖ below which a gradient counts as symmetric.
pub const SYMMETRY_TOL: f64 = 1e-8;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NdRecord {
    pub found: bool,
    pub x0: Vec<f64>,
    pub cell: Option<usize>,
    pub lambda_max: f64,
    pub xi0: Vec<f64>,
    /// Whether ∇u₀(x0) passed the symmetry test (always true when found).
    pub symmetric: bool,
    /// Cells skipped because their gradient is not symmetric.
    pub asymmetric_cells: usize,
    /// Most negative real eigenvalue over all cells, symmetric or not.
    pub min_real_eigenvalue: f64,
}

fn is_symmetric<T: Real>(a: &crate::linalg::Mat<T>, tol: T) -> bool {
    a.asymmetry() <= tol * a.frobenius()
}

pub fn nd_from_gradient<T: Real>(grad: &TensorField<T>, sym_tol: T) -> NdRecord {
    let g = &grad.grid;
    struct Acc {
        best: Option<(f64, f64, usize)>,
        asym: usize,
        min_real: f64,
    }
    let merge_best = |a: Option<(f64, f64, usize)>, b: Option<(f64, f64, usize)>| match (a, b) {
        (None, x) | (x, None) => x,
        (Some(a), Some(b)) => {
            let tie = (a.0 - b.0).abs() <= 1e-12 * a.0.abs().max(b.0.abs());
            let pick_b = if tie { (b.1, b.2) < (a.1, a.2) } else { b.0 < a.0 };
            Some(if pick_b { b } else { a })
        }
    };
    let acc = (0..g.len())
        .into_par_iter()
        .map(|k| {
            let a = grad.at(k);
            let min_real = a.real_eigenvalues().first().map_or(f64::INFINITY, |v| v.as_f64());
            if !is_symmetric(&a, sym_tol) {
                return Acc { best: None, asym: 1, min_real };
            }
            let l = a.sym_eigenvalues()[0].as_f64();
            let best = (l < 0.0).then(|| (l, g.radius(k).as_f64(), k));
            Acc { best, asym: 0, min_real }
        })
        .reduce(
            || Acc { best: None, asym: 0, min_real: f64::INFINITY },
            |a, b| Acc {
                best: merge_best(a.best, b.best),
                asym: a.asym + b.asym,
                min_real: a.min_real.min(b.min_real),
            },
        );
    match acc.best {
        Some((l, _, k)) => {
            let a = grad.at(k);
            let xi = a.sym_eigenvector(T::lit(l));
            NdRecord {
                found: true,
                x0: g.center(k)[..g.dim()].iter().map(|v| v.as_f64()).collect(),
                cell: Some(k),
                lambda_max: -l,
                xi0: xi.iter().map(|v| v.as_f64()).collect(),
                symmetric: true,
                asymmetric_cells: acc.asym,
                min_real_eigenvalue: acc.min_real,
            }
        }
        None => NdRecord {
            found: false,
            x0: Vec::new(),
            cell: None,
            lambda_max: 0.0,
            xi0: Vec::new(),
            symmetric: false,
            asymmetric_cells: acc.asym,
            min_real_eigenvalue: acc.min_real,
        },
    }
}

/// Most negative eigenvalue −λmax of ∇u₀ among cells where ∇u₀ is symmetric,
/// with its unit eigenvector. Ties go to the cell nearest the origin.
pub fn nd_condition<T: Real>(u0: &VectorField<T>, method: DiffMethod) -> Result<NdRecord> {
    u0.check_finite()?;
    Ok(nd_from_gradient(&jacobian(u0, method)?, T::lit(SYMMETRY_TOL)))
}
