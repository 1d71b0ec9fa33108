//! Off-grid evaluation of an initial velocity and its Jacobian.

use crate::fields::{Grid, VectorField};
use crate::linalg::Mat;
use crate::scalar::Real;

/// A differentiable velocity u₀: ℝ^d → ℝ^d.
pub trait VelocitySampler<T: Real>: Sync {
    fn dim(&self) -> usize;
    fn value(&self, x: &[T]) -> Vec<T>;
    /// Entry (i, j) = ∂_j u_i.
    fn jacobian(&self, x: &[T]) -> Mat<T>;
}

/// Closure-backed sampler; the Jacobian is analytic when supplied, otherwise
/// a fourth-order central difference.
pub struct FnSampler<T, F, J = fn(&[T]) -> Mat<T>> {
    dim: usize,
    f: F,
    jac: Option<J>,
    _t: std::marker::PhantomData<T>,
}

impl<T: Real, F: Fn(&[T]) -> Vec<T> + Sync> FnSampler<T, F> {
    pub fn new(dim: usize, f: F) -> Self {
        Self { dim, f, jac: None, _t: std::marker::PhantomData }
    }
}

impl<T: Real, F: Fn(&[T]) -> Vec<T> + Sync, J: Fn(&[T]) -> Mat<T> + Sync> FnSampler<T, F, J> {
    pub fn with_jacobian(dim: usize, f: F, jac: J) -> Self {
        Self { dim, f, jac: Some(jac), _t: std::marker::PhantomData }
    }
}

impl<T, F, J> VelocitySampler<T> for FnSampler<T, F, J>
where
    T: Real,
    F: Fn(&[T]) -> Vec<T> + Sync,
    J: Fn(&[T]) -> Mat<T> + Sync,
{
    fn dim(&self) -> usize {
        self.dim
    }

    fn value(&self, x: &[T]) -> Vec<T> {
        (self.f)(x)
    }

    fn jacobian(&self, x: &[T]) -> Mat<T> {
        if let Some(j) = &self.jac {
            return j(x);
        }
        let d = self.dim;
        let mut m = Mat::zeros(d);
        let scale = x.iter().fold(T::one(), |a, &v| a.max(v.abs()));
        let h = T::epsilon().powf(T::lit(0.2)) * scale;
        let mut xp = x.to_vec();
        for j in 0..d {
            let eval = |xp: &mut Vec<T>, off: T| {
                xp[j] = x[j] + off;
                (self.f)(xp)
            };
            let p1 = eval(&mut xp, h);
            let m1 = eval(&mut xp, -h);
            let p2 = eval(&mut xp, h + h);
            let m2 = eval(&mut xp, -(h + h));
            xp[j] = x[j];
            for i in 0..d {
                let v = (T::lit(8.0) * (p1[i] - m1[i]) - (p2[i] - m2[i])) / (T::lit(12.0) * h);
                m.set(i, j, v);
            }
        }
        m
    }
}

/// Tensor-product Catmull–Rom interpolant of gridded data: C¹, reproduces
/// quadratics, and has an exact derivative for Newton iterations.
pub struct CubicSampler<T> {
    grid: Grid<T>,
    comps: Vec<Vec<T>>,
}

impl<T: Real> CubicSampler<T> {
    pub fn new(u0: &VectorField<T>) -> Self {
        Self { grid: u0.grid.clone(), comps: u0.comps.clone() }
    }

    fn weights(t: T) -> ([T; 4], [T; 4]) {
        let h = T::lit(0.5);
        let t2 = t * t;
        let t3 = t2 * t;
        let c = |v: f64| T::lit(v);
        (
            [
                h * (-t3 + c(2.0) * t2 - t),
                h * (c(3.0) * t3 - c(5.0) * t2 + c(2.0)),
                h * (-c(3.0) * t3 + c(4.0) * t2 + t),
                h * (t3 - t2),
            ],
            [
                h * (-c(3.0) * t2 + c(4.0) * t - T::one()),
                h * (c(9.0) * t2 - c(10.0) * t),
                h * (-c(9.0) * t2 + c(8.0) * t + T::one()),
                h * (c(3.0) * t2 - c(2.0) * t),
            ],
        )
    }

    /// Returns interpolated values and, if requested, the Jacobian.
    fn interpolate(&self, x: &[T], want_jac: bool) -> (Vec<T>, Mat<T>) {
        let g = &self.grid;
        let d = g.dim();
        let mut base = [0isize; 3];
        let mut w = [[T::zero(); 4]; 3];
        let mut dw = [[T::zero(); 4]; 3];
        for a in 0..d {
            let s = (x[a] - g.origin()[a]) / g.spacing()[a] - T::lit(0.5);
            let fl = s.floor();
            let t = s - fl;
            base[a] = fl.to_isize().unwrap_or(0);
            let (wa, dwa) = Self::weights(t);
            w[a] = wa;
            for k in 0..4 {
                dw[a][k] = dwa[k] / g.spacing()[a];
            }
        }
        let index = |a: usize, off: isize| -> usize {
            let n = g.cells()[a] as isize;
            let i = base[a] + off - 1;
            if g.periodic()[a] {
                i.rem_euclid(n) as usize
            } else {
                i.clamp(0, n - 1) as usize
            }
        };
        let mut val = vec![T::zero(); d];
        let mut jac = Mat::zeros(d);
        let range = |a: usize| if a < d { 0..4 } else { 0..1 };
        for i0 in range(0) {
            for i1 in range(1) {
                for i2 in range(2) {
                    let offs = [i0, i1, i2];
                    let mut idx = [0usize; 3];
                    let mut wt = T::one();
                    for a in 0..d {
                        idx[a] = index(a, offs[a] as isize);
                        wt *= w[a][offs[a]];
                    }
                    let k = g.flat(idx);
                    for c in 0..d {
                        val[c] += wt * self.comps[c][k];
                    }
                    if want_jac {
                        for j in 0..d {
                            let mut wj = T::one();
                            for a in 0..d {
                                wj *= if a == j { dw[a][offs[a]] } else { w[a][offs[a]] };
                            }
                            for c in 0..d {
                                jac.set(c, j, jac.get(c, j) + wj * self.comps[c][k]);
                            }
                        }
                    }
                }
            }
        }
        (val, jac)
    }
}

impl<T: Real> VelocitySampler<T> for CubicSampler<T> {
    fn dim(&self) -> usize {
        self.grid.dim()
    }

    fn value(&self, x: &[T]) -> Vec<T> {
        self.interpolate(x, false).0
    }

    fn jacobian(&self, x: &[T]) -> Mat<T> {
        self.interpolate(x, true).1
    }
}
