//! Points of C^2 identified with R^4.
//!
//! Conventions used throughout the crate: the real scalar product is
//! `<u, v> = Re(u1 conj(v1) + u2 conj(v2))`, the complex structure J is
//! componentwise multiplication by i, and the symplectic form is
//! `omega(u, v) = <u, J v>`.

use num_complex::Complex64;
use serde::Serialize;
use std::ops::{Add, Mul, Neg, Sub};

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PointC2 {
    pub z1: Complex64,
    pub z2: Complex64,
}

impl PointC2 {
    pub const fn new(z1: Complex64, z2: Complex64) -> Self {
        Self { z1, z2 }
    }

    pub fn zero() -> Self {
        Self::new(Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0))
    }

    pub fn from_re(x1: f64, x2: f64) -> Self {
        Self::new(Complex64::new(x1, 0.0), Complex64::new(x2, 0.0))
    }

    pub fn is_finite(&self) -> bool {
        self.z1.re.is_finite()
            && self.z1.im.is_finite()
            && self.z2.re.is_finite()
            && self.z2.im.is_finite()
    }

    /// Hermitian product u . conj(v), summed over the two components.
    pub fn hermitian(&self, other: &Self) -> Complex64 {
        self.z1 * other.z1.conj() + self.z2 * other.z2.conj()
    }

    /// Real scalar product of R^4.
    pub fn dot(&self, other: &Self) -> f64 {
        self.hermitian(other).re
    }

    /// Symplectic form omega(u, v) = <u, J v> = Im(u . conj(v)).
    pub fn omega(&self, other: &Self) -> f64 {
        self.hermitian(other).im
    }

    /// Complex structure: componentwise multiplication by i.
    pub fn j(&self) -> Self {
        let i = Complex64::new(0.0, 1.0);
        Self::new(i * self.z1, i * self.z2)
    }

    pub fn norm_sq(&self) -> f64 {
        self.z1.norm_sqr() + self.z2.norm_sqr()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    pub fn scale(&self, a: f64) -> Self {
        Self::new(a * self.z1, a * self.z2)
    }

    pub fn scale_c(&self, a: Complex64) -> Self {
        Self::new(a * self.z1, a * self.z2)
    }

    pub fn normalized(&self) -> Option<Self> {
        let n = self.norm();
        if n > 0.0 && n.is_finite() {
            Some(self.scale(1.0 / n))
        } else {
            None
        }
    }

    /// Complex determinant det_C of the pair (self, other) as columns.
    pub fn det_c(&self, other: &Self) -> Complex64 {
        self.z1 * other.z2 - self.z2 * other.z1
    }
}

impl Add for PointC2 {
    type Output = PointC2;
    fn add(self, rhs: PointC2) -> PointC2 {
        PointC2::new(self.z1 + rhs.z1, self.z2 + rhs.z2)
    }
}

impl Sub for PointC2 {
    type Output = PointC2;
    fn sub(self, rhs: PointC2) -> PointC2 {
        PointC2::new(self.z1 - rhs.z1, self.z2 - rhs.z2)
    }
}

impl Neg for PointC2 {
    type Output = PointC2;
    fn neg(self) -> PointC2 {
        PointC2::new(-self.z1, -self.z2)
    }
}

impl Mul<f64> for PointC2 {
    type Output = PointC2;
    fn mul(self, rhs: f64) -> PointC2 {
        self.scale(rhs)
    }
}

impl crate::numerics::VectorValue for PointC2 {
    fn zero() -> Self {
        PointC2::zero()
    }
    fn add_scaled(&mut self, w: f64, v: &Self) {
        self.z1 += w * v.z1;
        self.z2 += w * v.z2;
    }
    fn norm(&self) -> f64 {
        PointC2::norm(self)
    }
    fn sub(&self, other: &Self) -> Self {
        *self - *other
    }
    fn is_finite(&self) -> bool {
        PointC2::is_finite(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn omega_vanishes_on_real_plane() {
        let u = PointC2::from_re(1.0, 0.0);
        let v = PointC2::from_re(0.0, 1.0);
        assert_eq!(u.omega(&v), 0.0);
        assert_eq!(u.dot(&v), 0.0);
        assert_eq!(u.dot(&u), 1.0);
    }

    #[test]
    fn j_is_an_isometry_with_j_squared_minus_one() {
        let u = PointC2::new(Complex64::new(1.0, 2.0), Complex64::new(-0.5, 3.0));
        let ju = u.j();
        assert!((ju.norm() - u.norm()).abs() < 1e-15);
        let jju = ju.j();
        assert!((jju + u).norm() < 1e-15);
        // <u, Ju> = 0 always.
        assert!(u.dot(&ju).abs() < 1e-15);
    }
}
