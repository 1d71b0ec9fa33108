use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// C^∞ radial cutoff: 1 on |z| ≤ inner, 0 on |z| ≥ outer.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BumpProfile<T> {
    pub inner: T,
    pub outer: T,
}

impl<T: Real> BumpProfile<T> {
    pub fn new(inner: T, outer: T) -> Result<Self> {
        if !(inner >= T::zero() && inner < outer && outer.is_finite()) {
            return Err(Error::InvalidArgument(format!("bump needs 0 ≤ inner < outer (got {inner}, {outer})")));
        }
        Ok(Self { inner, outer })
    }

    #[inline]
    pub fn eval(&self, z: T) -> T {
        smooth_bump(self, z)
    }

    /// d/dz of the profile at |z| (radial derivative, z ≥ 0).
    pub fn derivative(&self, z: T) -> T {
        let w = self.outer - self.inner;
        let t = (z.abs() - self.inner) / w;
        if t <= T::zero() || t >= T::one() {
            return T::zero();
        }
        let (a, b) = (g(T::one() - t), g(t));
        let (da, db) = (-dg(T::one() - t), dg(t));
        let s = a + b;
        ((da * s - a * (da + db)) / (s * s)) / w
    }
}

#[inline]
fn g<T: Real>(s: T) -> T {
    if s > T::zero() {
        (-T::one() / s).exp()
    } else {
        T::zero()
    }
}

#[inline]
fn dg<T: Real>(s: T) -> T {
    if s > T::zero() {
        (-T::one() / s).exp() / (s * s)
    } else {
        T::zero()
    }
}

/// Exponential-mollifier smoothstep g(1−t)/(g(1−t)+g(t)) with
/// t = (|z| − inner)/(outer − inner) clipped to [0, 1] and g(s) = e^{−1/s}.
pub fn smooth_bump<T: Real>(profile: &BumpProfile<T>, z: T) -> T {
    let t = (z.abs() - profile.inner) / (profile.outer - profile.inner);
    let t = t.max(T::zero()).min(T::one());
    let a = g(T::one() - t);
    a / (a + g(t))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn three_cases() {
        let p = BumpProfile::new(1.0f64, 2.0).unwrap();
        assert_eq!(smooth_bump(&p, 0.0), 1.0);
        assert_eq!(smooth_bump(&p, -1.0), 1.0);
        assert_eq!(smooth_bump(&p, 3.0), 0.0);
        assert_eq!(smooth_bump(&p, 2.0), 0.0);
        assert!((smooth_bump(&p, 1.5) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn monotone_on_band() {
        let p = BumpProfile::new(0.5, 3.0).unwrap();
        let mut prev = 1.0;
        for i in 0..=1000 {
            let z = 0.5 + 2.5 * i as f64 / 1000.0;
            let v = smooth_bump(&p, z);
            assert!(v <= prev + 1e-15 && (0.0..=1.0).contains(&v));
            prev = v;
        }
    }

    #[test]
    fn derivative_matches_difference() {
        let p = BumpProfile::new(1.0f64, 2.0).unwrap();
        for &z in &[1.1, 1.3, 1.5, 1.77, 1.95] {
            let h = 1e-6;
            let fd = (smooth_bump(&p, z + h) - smooth_bump(&p, z - h)) / (2.0 * h);
            assert!((fd - p.derivative(z)).abs() < 1e-7, "z={z}");
        }
    }

    #[test]
    fn rejects_inverted_radii() {
        assert!(BumpProfile::new(2.0, 1.0).is_err());
    }
}
