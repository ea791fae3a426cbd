use super::Scalar;
use crate::error::{Error, Result};
use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};
use std::ops::{Add, Mul, Neg, Sub};

/// Quaternion w + x i + y j + z k. Every quaternion is a "paravector" of H.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(from = "[f64; 4]", into = "[f64; 4]")]
pub struct Quaternion {
    c: [f64; 4],
}

impl From<[f64; 4]> for Quaternion {
    fn from(c: [f64; 4]) -> Self {
        Self { c }
    }
}

impl From<Quaternion> for [f64; 4] {
    fn from(q: Quaternion) -> Self {
        q.c
    }
}

impl Quaternion {
    pub const fn new(w: f64, x: f64, y: f64, z: f64) -> Self {
        Self { c: [w, x, y, z] }
    }

    pub const I: Self = Self::new(0.0, 1.0, 0.0, 0.0);
    pub const J: Self = Self::new(0.0, 0.0, 1.0, 0.0);
    pub const K: Self = Self::new(0.0, 0.0, 0.0, 1.0);

    pub fn w(&self) -> f64 {
        self.c[0]
    }

    /// Unit pure quaternion along (x, y, z); fails on zero direction.
    pub fn unit_imaginary(x: f64, y: f64, z: f64) -> Result<Self> {
        let r = (x * x + y * y + z * z).sqrt();
        if r == 0.0 || !r.is_finite() {
            return Err(Error::InvalidUnit("zero quaternion direction".into()));
        }
        Ok(Self::new(0.0, x / r, y / r, z / r))
    }
}

impl Scalar for Quaternion {
    fn algebra_dim(&self) -> usize {
        4
    }

    fn coeffs(&self) -> &[f64] {
        &self.c
    }

    fn real_like(&self, x: f64) -> Self {
        Self::new(x, 0.0, 0.0, 0.0)
    }

    fn scale(&self, k: f64) -> Self {
        Self::new(k * self.c[0], k * self.c[1], k * self.c[2], k * self.c[3])
    }

    fn re(&self) -> f64 {
        self.c[0]
    }

    fn imag_norm(&self) -> f64 {
        (self.c[1] * self.c[1] + self.c[2] * self.c[2] + self.c[3] * self.c[3]).sqrt()
    }

    fn imag_unit(&self) -> Option<Self> {
        let v = self.imag_norm();
        (v > 0.0).then(|| Self::new(0.0, self.c[1] / v, self.c[2] / v, self.c[3] / v))
    }

    fn conj(&self) -> Self {
        Self::new(self.c[0], -self.c[1], -self.c[2], -self.c[3])
    }

    fn norm_sq(&self) -> f64 {
        self.c.iter().map(|x| x * x).sum()
    }

    fn is_paravector(&self) -> bool {
        true
    }

    fn inverse(&self) -> Result<Self> {
        let r2 = self.norm_sq();
        if r2 == 0.0 {
            return Err(Error::SingularScalar("inverse of zero quaternion".into()));
        }
        Ok(self.conj().scale(1.0 / r2))
    }

    fn left_matrix(&self) -> DMatrix<f64> {
        let [w, x, y, z] = self.c;
        DMatrix::from_row_slice(
            4,
            4,
            &[
                w, -x, -y, -z, //
                x, w, -z, y, //
                y, z, w, -x, //
                z, -y, x, w,
            ],
        )
    }

    fn right_matrix(&self) -> DMatrix<f64> {
        let [w, x, y, z] = self.c;
        DMatrix::from_row_slice(
            4,
            4,
            &[
                w, -x, -y, -z, //
                x, w, z, -y, //
                y, -z, w, x, //
                z, y, -x, w,
            ],
        )
    }
}

impl Add for Quaternion {
    type Output = Self;
    fn add(self, r: Self) -> Self {
        Self::new(self.c[0] + r.c[0], self.c[1] + r.c[1], self.c[2] + r.c[2], self.c[3] + r.c[3])
    }
}

impl Sub for Quaternion {
    type Output = Self;
    fn sub(self, r: Self) -> Self {
        Self::new(self.c[0] - r.c[0], self.c[1] - r.c[1], self.c[2] - r.c[2], self.c[3] - r.c[3])
    }
}

impl Mul for Quaternion {
    type Output = Self;
    fn mul(self, r: Self) -> Self {
        let [a1, b1, c1, d1] = self.c;
        let [a2, b2, c2, d2] = r.c;
        Self::new(
            a1 * a2 - b1 * b2 - c1 * c2 - d1 * d2,
            a1 * b2 + b1 * a2 + c1 * d2 - d1 * c2,
            a1 * c2 - b1 * d2 + c1 * a2 + d1 * b2,
            a1 * d2 + b1 * c2 - c1 * b2 + d1 * a2,
        )
    }
}

impl Neg for Quaternion {
    type Output = Self;
    fn neg(self) -> Self {
        self.scale(-1.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::DVector;
    use proptest::prelude::*;

    fn arb_q() -> impl Strategy<Value = Quaternion> {
        prop::array::uniform4(-2.0..2.0f64).prop_map(Quaternion::from)
    }

    #[test]
    fn hamilton_relations() {
        let (i, j, k) = (Quaternion::I, Quaternion::J, Quaternion::K);
        let m1 = Quaternion::new(-1.0, 0.0, 0.0, 0.0);
        assert_eq!(i * i, m1);
        assert_eq!(j * j, m1);
        assert_eq!(k * k, m1);
        assert_eq!(i * j * k, m1);
        assert_eq!(i * j, k);
        assert_eq!(j * i, -k);
    }

    proptest! {
        #[test]
        fn associative_and_multiplicative_norm(p in arb_q(), q in arb_q(), r in arb_q()) {
            prop_assert!(((p * q) * r).dist_max(&(p * (q * r))) < 1e-12 * 8.0);
            prop_assert!(((p * q).norm() - p.norm() * q.norm()).abs() < 1e-12 * 4.0);
            let pp = p * p.conj();
            prop_assert!(pp.dist_max(&p.real_like(p.norm_sq())) < 1e-12 * 4.0);
        }

        #[test]
        fn regular_matrices(p in arb_q(), q in arb_q()) {
            let v = DVector::from_column_slice(q.coeffs());
            let l = p.left_matrix() * &v;
            let r = p.right_matrix() * &v;
            prop_assert!(l.iter().zip((p * q).coeffs()).all(|(a, b)| (a - b).abs() < 1e-12));
            prop_assert!(r.iter().zip((q * p).coeffs()).all(|(a, b)| (a - b).abs() < 1e-12));
        }

        #[test]
        fn quadratic_identity(s in arb_q()) {
            let q = s * s - s.scale(2.0 * s.re()) + s.real_like(s.norm_sq());
            prop_assert!(q.norm() <= 1e-12 * s.norm_sq().max(1.0));
        }

        #[test]
        fn inverse_both_sides(s in arb_q()) {
            prop_assume!(s.norm() > 1e-3);
            let inv = s.inverse().unwrap();
            prop_assert!((s * inv).dist_max(&s.one_like()) < 1e-12);
            prop_assert!((inv * s).dist_max(&s.one_like()) < 1e-12);
        }
    }
}
