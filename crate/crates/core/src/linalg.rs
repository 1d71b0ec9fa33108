//! Small dense matrices (d ≤ 3) with closed-form spectra.

use crate::scalar::Real;

/// Square matrix of dimension `d ∈ {1,2,3}` stored in a fixed 3×3 block.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Mat<T> {
    d: usize,
    a: [[T; 3]; 3],
}

impl<T: Real> Mat<T> {
    pub fn zeros(d: usize) -> Self {
        assert!((1..=3).contains(&d), "matrix dimension must be 1, 2 or 3");
        Self { d, a: [[T::zero(); 3]; 3] }
    }

    pub fn identity(d: usize) -> Self {
        Self::from_fn(d, |i, j| if i == j { T::one() } else { T::zero() })
    }

    pub fn from_fn(d: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut m = Self::zeros(d);
        for i in 0..d {
            for j in 0..d {
                m.a[i][j] = f(i, j);
            }
        }
        m
    }

    /// Row-major slice of length d².
    pub fn from_row_major(d: usize, v: &[T]) -> Self {
        assert_eq!(v.len(), d * d);
        Self::from_fn(d, |i, j| v[i * d + j])
    }

    pub fn diag(v: &[T]) -> Self {
        Self::from_fn(v.len(), |i, j| if i == j { v[i] } else { T::zero() })
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.d
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> T {
        self.a[i][j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: T) {
        self.a[i][j] = v;
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.d, |i, j| self.a[j][i])
    }

    pub fn add(&self, o: &Self) -> Self {
        Self::from_fn(self.d, |i, j| self.a[i][j] + o.a[i][j])
    }

    pub fn sub(&self, o: &Self) -> Self {
        Self::from_fn(self.d, |i, j| self.a[i][j] - o.a[i][j])
    }

    pub fn scale(&self, s: T) -> Self {
        Self::from_fn(self.d, |i, j| self.a[i][j] * s)
    }

    pub fn mul(&self, o: &Self) -> Self {
        Self::from_fn(self.d, |i, j| (0..self.d).fold(T::zero(), |acc, k| acc + self.a[i][k] * o.a[k][j]))
    }

    pub fn mul_vec(&self, v: &[T]) -> Vec<T> {
        (0..self.d).map(|i| (0..self.d).fold(T::zero(), |acc, k| acc + self.a[i][k] * v[k])).collect()
    }

    pub fn trace(&self) -> T {
        (0..self.d).fold(T::zero(), |acc, i| acc + self.a[i][i])
    }

    pub fn det(&self) -> T {
        let a = &self.a;
        match self.d {
            1 => a[0][0],
            2 => a[0][0] * a[1][1] - a[0][1] * a[1][0],
            _ => {
                a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1]) - a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0])
                    + a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0])
            }
        }
    }

    /// Inverse via the adjugate; `None` when the determinant vanishes.
    pub fn inverse(&self) -> Option<Self> {
        let det = self.det();
        if det == T::zero() || !det.is_finite() {
            return None;
        }
        let a = &self.a;
        let adj = match self.d {
            1 => Self::from_fn(1, |_, _| T::one()),
            2 => Self::from_row_major(2, &[a[1][1], -a[0][1], -a[1][0], a[0][0]]),
            _ => Self::from_fn(3, |i, j| {
                // cofactor of (j, i)
                let r = [(j + 1) % 3, (j + 2) % 3];
                let c = [(i + 1) % 3, (i + 2) % 3];
                a[r[0]][c[0]] * a[r[1]][c[1]] - a[r[0]][c[1]] * a[r[1]][c[0]]
            }),
        };
        Some(adj.scale(T::one() / det))
    }

    pub fn symmetric_part(&self) -> Self {
        let h = T::lit(0.5);
        Self::from_fn(self.d, |i, j| h * (self.a[i][j] + self.a[j][i]))
    }

    pub fn frobenius(&self) -> T {
        let mut s = T::zero();
        for i in 0..self.d {
            for j in 0..self.d {
                s += self.a[i][j] * self.a[i][j];
            }
        }
        s.sqrt()
    }

    pub fn max_abs(&self) -> T {
        let mut m = T::zero();
        for i in 0..self.d {
            for j in 0..self.d {
                m = m.max(self.a[i][j].abs());
            }
        }
        m
    }

    /// ‖A − Aᵀ‖_F.
    pub fn asymmetry(&self) -> T {
        self.sub(&self.transpose()).frobenius()
    }

    pub fn is_finite(&self) -> bool {
        (0..self.d).all(|i| (0..self.d).all(|j| self.a[i][j].is_finite()))
    }

    /// Coefficients (c2, c1, c0) of λ³ − c2 λ² + c1 λ − c0 (padded for d < 3).
    fn invariants(&self) -> (T, T, T) {
        let a = &self.a;
        let c2 = self.trace();
        let c1 = match self.d {
            1 => T::zero(),
            2 => self.det(),
            _ => {
                (a[0][0] * a[1][1] - a[0][1] * a[1][0])
                    + (a[0][0] * a[2][2] - a[0][2] * a[2][0])
                    + (a[1][1] * a[2][2] - a[1][2] * a[2][1])
            }
        };
        (c2, c1, self.det())
    }

    /// Real eigenvalues, ascending, with multiplicity. Complex pairs are dropped.
    pub fn real_eigenvalues(&self) -> Vec<T> {
        self.eigen_impl(false)
    }

    /// Eigenvalues of the symmetric part ½(A+Aᵀ), ascending.
    pub fn sym_eigenvalues(&self) -> Vec<T> {
        self.symmetric_part().eigen_impl(true)
    }

    fn eigen_impl(&self, all_real: bool) -> Vec<T> {
        let mut out = match self.d {
            1 => vec![self.a[0][0]],
            2 => {
                let half = T::lit(0.5);
                let tr = self.trace();
                let det = self.det();
                let mid = half * tr;
                let hd = half * (self.a[0][0] - self.a[1][1]);
                let mut disc = hd * hd + self.a[0][1] * self.a[1][0];
                let scale = hd * hd + (self.a[0][1] * self.a[1][0]).abs();
                if disc < T::zero() {
                    if all_real || -disc <= T::lit(64.0) * T::epsilon() * scale {
                        disc = T::zero();
                    } else {
                        return Vec::new();
                    }
                }
                let r = disc.sqrt();
                // stable pair: large root first, small one from the product
                let big = if mid >= T::zero() { mid + r } else { mid - r };
                let small = if big != T::zero() { det / big } else { mid - r };
                vec![big, small]
            }
            _ => self.cubic_roots(all_real),
        };
        out.sort_by(|x, y| x.partial_cmp(y).unwrap_or(std::cmp::Ordering::Equal));
        out
    }

    fn cubic_roots(&self, all_real: bool) -> Vec<T> {
        let three = T::lit(3.0);
        let s = self.trace() / three;
        // work with the traceless shift A − sI: μ³ + pμ + q = 0
        let shifted = self.sub(&Self::identity(3).scale(s));
        let p = if all_real { -T::lit(0.5) * shifted.frobenius().powi(2) } else { shifted.invariants().1 };
        let q = -shifted.det();
        let half_q = q * T::lit(0.5);
        let third_p = p / three;
        let disc = half_q * half_q + third_p * third_p * third_p;
        // disc carries units of λ⁶; compare against the matrix scale
        let f = self.frobenius();
        let tol = T::lit(64.0) * T::epsilon() * f.powi(6);
        let mut roots = if disc <= tol || all_real {
            if third_p >= T::zero() {
                vec![-q.cbrt(); 3]
            } else {
                let m = (-third_p).sqrt();
                let arg = (-half_q / (m * m * m)).max(-T::one()).min(T::one());
                let theta = arg.acos() / three;
                let two_pi_3 = T::lit(2.0) * T::PI() / three;
                (0..3).map(|k| T::lit(2.0) * m * (theta - two_pi_3 * T::from_usize_lossy(k)).cos()).collect()
            }
        } else {
            let sq = disc.sqrt();
            vec![(-half_q + sq).cbrt() + (-half_q - sq).cbrt()]
        };
        let poly = |m: T| (m * m + p) * m + q;
        let dpoly = |m: T| three * m * m + p;
        for r in roots.iter_mut() {
            for _ in 0..3 {
                let f = poly(*r);
                let df = dpoly(*r);
                if df == T::zero() {
                    break;
                }
                let cand = *r - f / df;
                if poly(cand).abs() < f.abs() {
                    *r = cand;
                } else {
                    break;
                }
            }
            *r += s;
        }
        roots
    }

    /// Unit eigenvector of the symmetric part for eigenvalue `lambda`.
    pub fn sym_eigenvector(&self, lambda: T) -> Vec<T> {
        let s = self.symmetric_part();
        let m = s.sub(&Self::identity(self.d).scale(lambda));
        let d = self.d;
        let mut e0 = vec![T::zero(); d];
        e0[0] = T::one();
        let tiny = T::lit(1e3) * T::epsilon() * (s.frobenius() + lambda.abs()).max(T::min_positive_value());
        match d {
            1 => e0,
            2 => {
                let r0 = [m.a[0][0], m.a[0][1]];
                let r1 = [m.a[1][0], m.a[1][1]];
                let n0 = r0[0].hypot(r0[1]);
                let n1 = r1[0].hypot(r1[1]);
                let (r, n) = if n0 >= n1 { (r0, n0) } else { (r1, n1) };
                if n <= tiny {
                    return e0;
                }
                vec![-r[1] / n, r[0] / n]
            }
            _ => {
                let rows = [m.a[0], m.a[1], m.a[2]];
                let cross = |u: [T; 3], v: [T; 3]| {
                    [u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2], u[0] * v[1] - u[1] * v[0]]
                };
                let norm = |v: [T; 3]| (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
                let mut best = [T::zero(); 3];
                let mut best_n = T::zero();
                for (i, j) in [(0, 1), (0, 2), (1, 2)] {
                    let c = cross(rows[i], rows[j]);
                    let n = norm(c);
                    if n > best_n {
                        best = c;
                        best_n = n;
                    }
                }
                if best_n > tiny * tiny {
                    return best.iter().map(|&x| x / best_n).collect();
                }
                // eigenvalue of multiplicity ≥ 2: anything orthogonal to the dominant row
                let (r, n) = rows.iter().map(|&r| (r, norm(r))).fold(([T::zero(); 3], T::zero()), |acc, x| {
                    if x.1 > acc.1 {
                        x
                    } else {
                        acc
                    }
                });
                if n <= tiny {
                    return e0;
                }
                let k = if r[0].abs() <= r[1].abs() && r[0].abs() <= r[2].abs() {
                    0
                } else if r[1].abs() <= r[2].abs() {
                    1
                } else {
                    2
                };
                let mut ek = [T::zero(); 3];
                ek[k] = T::one();
                let c = cross(r, ek);
                let cn = norm(c);
                c.iter().map(|&x| x / cn).collect()
            }
        }
    }
}
