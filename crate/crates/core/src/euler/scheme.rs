//! Rusanov finite-volume right-hand side on conserved variables (ρ, ρu).

use rayon::prelude::*;

use super::config::Reconstruction;
use crate::fields::Grid;
use crate::scalar::Real;

/// Conserved variables, component-major like the field types.
#[derive(Clone, Debug, PartialEq)]
pub(crate) struct Cons<T> {
    pub rho: Vec<T>,
    pub m: Vec<Vec<T>>,
}

/// Per-cell primitive state (ρ, u) padded to three velocity components,
/// with pressure, sound speed and mechanical energy cached.
#[derive(Clone, Copy, Debug, Default)]
pub(crate) struct Prim<T> {
    pub rho: T,
    pub u: [T; 3],
    pub p: T,
    pub c: T,
    pub e: T,
}

impl<T: Real> Prim<T> {
    #[inline]
    pub fn new(rho: T, u: [T; 3], d: usize, gamma: T) -> Self {
        let p = pressure(rho, gamma);
        let c = if rho > T::zero() { (gamma * p / rho).sqrt() } else { T::zero() };
        let u2: T = u[..d].iter().map(|&v| v * v).sum();
        let e = T::lit(0.5) * rho * u2 + p / (gamma - T::one());
        Self { rho, u, p, c, e }
    }
}

/// Time derivatives plus the divergence of the numerical entropy flux.
pub(crate) struct Rhs<T> {
    pub drho: Vec<T>,
    pub dm: Vec<Vec<T>>,
    pub div_g: Vec<T>,
}

#[inline]
pub(crate) fn pressure<T: Real>(rho: T, gamma: T) -> T {
    let r = rho.max(T::zero());
    // integer exponents are common and powi is several times cheaper
    if gamma.fract() == T::zero() && gamma < T::lit(16.0) {
        r.powi(gamma.to_i32().unwrap_or(0))
    } else {
        r.powf(gamma)
    }
}

#[inline]
pub(crate) fn sound_speed<T: Real>(rho: T, gamma: T) -> T {
    gamma.sqrt() * rho.max(T::zero()).powf((gamma - T::one()) * T::lit(0.5))
}

impl<T: Real> Cons<T> {
    pub fn prim(&self, k: usize, gamma: T) -> Prim<T> {
        let rho = self.rho[k];
        let mut u = [T::zero(); 3];
        if rho > T::zero() {
            for (a, c) in self.m.iter().enumerate() {
                u[a] = c[k] / rho;
            }
        }
        Prim::new(rho, u, self.m.len(), gamma)
    }

    pub fn prims(&self, gamma: T) -> Vec<Prim<T>> {
        (0..self.rho.len()).into_par_iter().map(|k| self.prim(k, gamma)).collect()
    }
}

/// Index arithmetic along one axis: wraps on periodic axes and clamps
/// (zero-gradient ghost cells) otherwise.
#[derive(Clone, Copy)]
struct Line {
    stride: usize,
    n: usize,
    periodic: bool,
}

impl Line {
    fn new<T: Real>(g: &Grid<T>, axis: usize) -> Self {
        Self { stride: g.stride(axis), n: g.cells()[axis], periodic: g.periodic()[axis] }
    }

    #[inline]
    fn shifted(&self, k: usize, off: isize) -> usize {
        let i = ((k / self.stride) % self.n) as isize;
        let n = self.n as isize;
        let j = if self.periodic { (i + off).rem_euclid(n) } else { (i + off).clamp(0, n - 1) };
        (k as isize + (j - i) * self.stride as isize) as usize
    }

    #[inline]
    fn has_right(&self, k: usize) -> bool {
        self.periodic || (k / self.stride) % self.n + 1 < self.n
    }
}

#[inline]
fn minmod<T: Real>(a: T, b: T) -> T {
    if a * b <= T::zero() {
        T::zero()
    } else if a.abs() < b.abs() {
        a
    } else {
        b
    }
}

#[inline]
fn van_leer<T: Real>(a: T, b: T) -> T {
    if a * b <= T::zero() {
        T::zero()
    } else {
        T::lit(2.0) * a * b / (a + b)
    }
}

fn slope<T: Real>(rec: Reconstruction, wm: &Prim<T>, w0: &Prim<T>, wp: &Prim<T>, d: usize) -> Prim<T> {
    let lim = |a: T, b: T| match rec {
        Reconstruction::FirstOrder => T::zero(),
        Reconstruction::Minmod => minmod(a, b),
        Reconstruction::VanLeer => van_leer(a, b),
    };
    let mut s = Prim { rho: lim(w0.rho - wm.rho, wp.rho - w0.rho), ..Default::default() };
    for a in 0..d {
        s.u[a] = lim(w0.u[a] - wm.u[a], wp.u[a] - w0.u[a]);
    }
    s
}

fn offset<T: Real>(w: &Prim<T>, s: &Prim<T>, sign: T, d: usize, gamma: T) -> Prim<T> {
    let h = T::lit(0.5) * sign;
    let mut u = w.u;
    for a in 0..d {
        u[a] = w.u[a] + h * s.u[a];
    }
    Prim::new(w.rho + h * s.rho, u, d, gamma)
}

/// Face flux [F_ρ, F_m₁, F_m₂, F_m₃, G] along `axis`.
#[inline]
fn rusanov<T: Real>(l: &Prim<T>, r: &Prim<T>, axis: usize, d: usize) -> [T; 5] {
    let half = T::lit(0.5);
    let (pl, pr) = (l.p, r.p);
    let s = (l.u[axis].abs() + l.c).max(r.u[axis].abs() + r.c);
    let mut f = [T::zero(); 5];
    f[0] = half * (l.rho * l.u[axis] + r.rho * r.u[axis]) - half * s * (r.rho - l.rho);
    for b in 0..d {
        let mut fl = l.rho * l.u[axis] * l.u[b];
        let mut fr = r.rho * r.u[axis] * r.u[b];
        if b == axis {
            fl += pl;
            fr += pr;
        }
        f[1 + b] = half * (fl + fr) - half * s * (r.rho * r.u[b] - l.rho * l.u[b]);
    }
    let (el, er) = (l.e, r.e);
    f[4] = half * ((el + pl) * l.u[axis] + (er + pr) * r.u[axis]) - half * s * (er - el);
    f
}

/// Semi-discrete operator L(U) = −Σ_a (F_{a,i+½} − F_{a,i−½}) / h_a.
pub(crate) fn rhs<T: Real>(g: &Grid<T>, cons: &Cons<T>, gamma: T, rec: Reconstruction) -> Rhs<T> {
    let d = g.dim();
    let n = g.len();
    let w = cons.prims(gamma);
    let mut out = Rhs { drho: vec![T::zero(); n], dm: vec![vec![T::zero(); n]; d], div_g: vec![T::zero(); n] };
    for axis in 0..d {
        let line = Line::new(g, axis);
        let inv_h = T::one() / g.spacing()[axis];
        // flux through the left face of each cell
        let left: Vec<[T; 5]> = (0..n)
            .into_par_iter()
            .map(|k| {
                let km = line.shifted(k, -1);
                if rec == Reconstruction::FirstOrder {
                    return rusanov(&w[km], &w[k], axis, d);
                }
                let kmm = line.shifted(k, -2);
                let kp = line.shifted(k, 1);
                let sl = slope(rec, &w[kmm], &w[km], &w[k], d);
                let sr = slope(rec, &w[km], &w[k], &w[kp], d);
                let wl = offset(&w[km], &sl, T::one(), d, gamma);
                let wr = offset(&w[k], &sr, -T::one(), d, gamma);
                rusanov(&wl, &wr, axis, d)
            })
            .collect();
        let drho = &mut out.drho;
        let dg = &mut out.div_g;
        let dm = &mut out.dm;
        for k in 0..n {
            let fr = if line.has_right(k) {
                left[line.shifted(k, 1)]
            } else {
                // transmissive edge: ghost equals the cell, so the flux is physical
                rusanov(&w[k], &w[k], axis, d)
            };
            let fl = &left[k];
            drho[k] -= (fr[0] - fl[0]) * inv_h;
            for b in 0..d {
                dm[b][k] -= (fr[1 + b] - fl[1 + b]) * inv_h;
            }
            dg[k] += (fr[4] - fl[4]) * inv_h;
        }
    }
    out
}

/// Largest signal speed along each axis, max |u_a| + c.
pub(crate) fn axis_speeds<T: Real>(g: &Grid<T>, cons: &Cons<T>, gamma: T) -> Vec<T> {
    let w = cons.prims(gamma);
    (0..g.dim()).map(|a| w.par_iter().map(|p| p.u[a].abs() + p.c).reduce(T::zero, |x, y| x.max(y))).collect()
}
