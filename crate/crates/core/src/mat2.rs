//! Dense complex 2x2 matrices, the workhorse of every SU(2) computation here.
//!
//! Stored row-major as `[m00, m01, m10, m11]`. All operations are written out
//! by hand; no allocation, everything is `Copy`.

use num_complex::Complex64;
use std::ops::{Add, Mul, Neg, Sub};

/// Complex 2x2 matrix, row major.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mat2(pub [Complex64; 4]);

impl Mat2 {
    pub const ZERO: Mat2 = Mat2([
        Complex64::new(0.0, 0.0),
        Complex64::new(0.0, 0.0),
        Complex64::new(0.0, 0.0),
        Complex64::new(0.0, 0.0),
    ]);

    pub const IDENTITY: Mat2 = Mat2([
        Complex64::new(1.0, 0.0),
        Complex64::new(0.0, 0.0),
        Complex64::new(0.0, 0.0),
        Complex64::new(1.0, 0.0),
    ]);

    pub fn new(m00: Complex64, m01: Complex64, m10: Complex64, m11: Complex64) -> Self {
        Mat2([m00, m01, m10, m11])
    }

    /// Hermitian conjugate (conjugate transpose).
    pub fn adjoint(&self) -> Mat2 {
        Mat2([
            self.0[0].conj(),
            self.0[2].conj(),
            self.0[1].conj(),
            self.0[3].conj(),
        ])
    }

    pub fn trace(&self) -> Complex64 {
        self.0[0] + self.0[3]
    }

    pub fn det(&self) -> Complex64 {
        self.0[0] * self.0[3] - self.0[1] * self.0[2]
    }

    pub fn scale(&self, s: f64) -> Mat2 {
        Mat2([
            self.0[0] * s,
            self.0[1] * s,
            self.0[2] * s,
            self.0[3] * s,
        ])
    }

    pub fn scale_c(&self, s: Complex64) -> Mat2 {
        Mat2([
            self.0[0] * s,
            self.0[1] * s,
            self.0[2] * s,
            self.0[3] * s,
        ])
    }

    /// Frobenius inner product `tr(self * other^H)` = sum_ij a_ij conj(b_ij).
    pub fn frob_inner(&self, other: &Mat2) -> Complex64 {
        self.0[0] * other.0[0].conj()
            + self.0[1] * other.0[1].conj()
            + self.0[2] * other.0[2].conj()
            + self.0[3] * other.0[3].conj()
    }

    /// `Re tr(self * other^H)`, the real scalar product of matrices.
    pub fn inner(&self, other: &Mat2) -> f64 {
        self.frob_inner(other).re
    }

    pub fn norm(&self) -> f64 {
        self.frob_inner(self).re.sqrt()
    }

    /// Conjugation `u * self * u^H`. Correct inverse conjugation only for
    /// unitary `u`.
    pub fn conjugate_by(&self, u: &Mat2) -> Mat2 {
        *u * *self * u.adjoint()
    }

    pub fn max_abs_entry(&self) -> f64 {
        self.0
            .iter()
            .map(|z| z.norm())
            .fold(0.0_f64, |a, b| a.max(b))
    }
}

impl Add for Mat2 {
    type Output = Mat2;
    fn add(self, rhs: Mat2) -> Mat2 {
        Mat2([
            self.0[0] + rhs.0[0],
            self.0[1] + rhs.0[1],
            self.0[2] + rhs.0[2],
            self.0[3] + rhs.0[3],
        ])
    }
}

impl Sub for Mat2 {
    type Output = Mat2;
    fn sub(self, rhs: Mat2) -> Mat2 {
        Mat2([
            self.0[0] - rhs.0[0],
            self.0[1] - rhs.0[1],
            self.0[2] - rhs.0[2],
            self.0[3] - rhs.0[3],
        ])
    }
}

impl Neg for Mat2 {
    type Output = Mat2;
    fn neg(self) -> Mat2 {
        Mat2([-self.0[0], -self.0[1], -self.0[2], -self.0[3]])
    }
}

impl Mul for Mat2 {
    type Output = Mat2;
    fn mul(self, rhs: Mat2) -> Mat2 {
        let a = &self.0;
        let b = &rhs.0;
        Mat2([
            a[0] * b[0] + a[1] * b[2],
            a[0] * b[1] + a[1] * b[3],
            a[2] * b[0] + a[3] * b[2],
            a[2] * b[1] + a[3] * b[3],
        ])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn identity_and_trace() {
        let id = Mat2::IDENTITY;
        assert_eq!(id.trace(), c(2.0, 0.0));
        assert_eq!((id * id).0, id.0);
    }

    #[test]
    fn adjoint_reverses_products() {
        let a = Mat2::new(c(1.0, 2.0), c(0.5, -1.0), c(0.0, 3.0), c(-2.0, 0.1));
        let b = Mat2::new(c(0.3, 0.0), c(1.0, 1.0), c(-0.2, 0.7), c(0.9, -0.4));
        let lhs = (a * b).adjoint();
        let rhs = b.adjoint() * a.adjoint();
        assert!((lhs - rhs).norm() < 1e-14);
    }

    #[test]
    fn frob_inner_is_trace_of_product() {
        let a = Mat2::new(c(1.0, 2.0), c(0.5, -1.0), c(0.0, 3.0), c(-2.0, 0.1));
        let b = Mat2::new(c(0.3, 0.0), c(1.0, 1.0), c(-0.2, 0.7), c(0.9, -0.4));
        let direct = (a * b.adjoint()).trace();
        let fast = a.frob_inner(&b);
        assert!((direct - fast).norm() < 1e-14);
    }
}
