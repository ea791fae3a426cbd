use super::blade::{self, grade, product_sign, MAX_DIM, MAX_N};
use super::{Scalar, SCALAR_TOL};
use crate::error::{Error, Result};
use nalgebra::DMatrix;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// Element of the real Clifford algebra R_n with e_i² = -1, stored densely
/// as 2^n coefficients in graded-lexicographic blade order.
#[derive(Clone, Copy, PartialEq)]
pub struct Multivector {
    n: u8,
    c: [f64; MAX_DIM],
}

impl Multivector {
    pub fn zero(n: usize) -> Result<Self> {
        check_n(n)?;
        Ok(Self {
            n: n as u8,
            c: [0.0; MAX_DIM],
        })
    }

    pub fn scalar(n: usize, x: f64) -> Result<Self> {
        let mut m = Self::zero(n)?;
        m.c[0] = x;
        Ok(m)
    }

    pub fn from_coeffs(coeffs: &[f64]) -> Result<Self> {
        let len = coeffs.len();
        if !len.is_power_of_two() {
            return Err(Error::UnsupportedDimension(len));
        }
        let n = len.trailing_zeros() as usize;
        let mut m = Self::zero(n)?;
        m.c[..len].copy_from_slice(coeffs);
        Ok(m)
    }

    /// Generator e_i, 1 ≤ i ≤ n.
    pub fn generator(n: usize, i: usize) -> Result<Self> {
        if i == 0 || i > n {
            return Err(Error::InvalidUnit(format!("no generator e{i} in R_{n}")));
        }
        Self::blade(n, 1 << (i - 1))
    }

    /// Basis blade given by a bitmask (bit i-1 for e_i).
    pub fn blade(n: usize, mask: u32) -> Result<Self> {
        let mut m = Self::zero(n)?;
        if mask as usize >= m.dim() {
            return Err(Error::InvalidUnit(format!("blade mask {mask:#b} outside R_{n}")));
        }
        m.c[blade::table(n).index[mask as usize]] = 1.0;
        Ok(m)
    }

    /// Paravector x0 + x1 e1 + ... + xn en as a multivector.
    pub fn paravector(n: usize, parts: &[f64]) -> Result<Self> {
        if parts.len() != n + 1 {
            return Err(Error::DimensionMismatch {
                left: n + 1,
                right: parts.len(),
            });
        }
        let mut m = Self::zero(n)?;
        // grade-0 and grade-1 blades occupy the first n+1 slots
        m.c[..=n].copy_from_slice(parts);
        Ok(m)
    }

    pub fn n(&self) -> usize {
        self.n as usize
    }

    pub fn dim(&self) -> usize {
        1 << self.n
    }

    /// Coefficient of the blade with the given mask.
    pub fn coeff_of(&self, mask: u32) -> f64 {
        self.c[blade::table(self.n()).index[mask as usize]]
    }

    /// Paravector part (x0, x1, ..., xn).
    pub fn paravector_parts(&self) -> &[f64] {
        &self.c[..=self.n()]
    }

    /// Norm of the part of grade ≥ 2.
    pub fn higher_grade_norm(&self) -> f64 {
        self.c[self.n() + 1..self.dim()]
            .iter()
            .map(|x| x * x)
            .sum::<f64>()
            .sqrt()
    }

    /// Clifford product. Fails when the algebras differ.
    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                left: self.n(),
                right: other.n(),
            });
        }
        let t = blade::table(self.n());
        let mut out = [0.0; MAX_DIM];
        for (i, &a) in self.c[..self.dim()].iter().enumerate() {
            if a == 0.0 {
                continue;
            }
            let ma = t.masks[i];
            for (j, &b) in other.c[..other.dim()].iter().enumerate() {
                if b == 0.0 {
                    continue;
                }
                let mb = t.masks[j];
                out[t.index[(ma ^ mb) as usize]] += product_sign(ma, mb) * a * b;
            }
        }
        Ok(Self { n: self.n, c: out })
    }

    fn zip_with(&self, other: &Self, f: impl Fn(f64, f64) -> f64) -> Self {
        assert_eq!(self.n, other.n, "algebra dimension mismatch");
        let mut out = [0.0; MAX_DIM];
        for (k, slot) in out.iter_mut().enumerate().take(self.dim()) {
            *slot = f(self.c[k], other.c[k]);
        }
        Self { n: self.n, c: out }
    }

    fn map(&self, f: impl Fn(usize, f64) -> f64) -> Self {
        let mut out = [0.0; MAX_DIM];
        for (k, slot) in out.iter_mut().enumerate().take(self.dim()) {
            *slot = f(k, self.c[k]);
        }
        Self { n: self.n, c: out }
    }

    fn regular_matrix(&self, left: bool) -> DMatrix<f64> {
        let dim = self.dim();
        let t = blade::table(self.n());
        let mut m = DMatrix::zeros(dim, dim);
        // column j holds the coordinates of a·e_B (left) or e_B·a (right)
        for (j, &mb) in t.masks.iter().enumerate() {
            for (i, &ma) in t.masks.iter().enumerate() {
                let a = self.c[i];
                if a == 0.0 {
                    continue;
                }
                let (sign, target) = if left {
                    (product_sign(ma, mb), ma ^ mb)
                } else {
                    (product_sign(mb, ma), ma ^ mb)
                };
                m[(t.index[target as usize], j)] += sign * a;
            }
        }
        m
    }
}

fn check_n(n: usize) -> Result<()> {
    if (1..=MAX_N).contains(&n) {
        Ok(())
    } else {
        Err(Error::UnsupportedDimension(n))
    }
}

impl Scalar for Multivector {
    fn algebra_dim(&self) -> usize {
        self.dim()
    }

    fn coeffs(&self) -> &[f64] {
        &self.c[..self.dim()]
    }

    fn real_like(&self, x: f64) -> Self {
        let mut c = [0.0; MAX_DIM];
        c[0] = x;
        Self { n: self.n, c }
    }

    fn scale(&self, k: f64) -> Self {
        self.map(|_, x| k * x)
    }

    fn re(&self) -> f64 {
        self.c[0]
    }

    fn imag_norm(&self) -> f64 {
        self.c[1..=self.n()].iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    fn imag_unit(&self) -> Option<Self> {
        let v = self.imag_norm();
        if v == 0.0 {
            return None;
        }
        let n = self.n();
        Some(self.map(|k, x| if (1..=n).contains(&k) { x / v } else { 0.0 }))
    }

    /// Clifford conjugation: e_A ↦ (-1)^{k(k+1)/2} e_A for |A| = k.
    fn conj(&self) -> Self {
        let t = blade::table(self.n());
        self.map(|k, x| {
            let g = grade(t.masks[k]);
            if (g * (g + 1) / 2).is_multiple_of(2) {
                x
            } else {
                -x
            }
        })
    }

    fn norm_sq(&self) -> f64 {
        self.coeffs().iter().map(|x| x * x).sum()
    }

    fn is_paravector(&self) -> bool {
        self.higher_grade_norm() <= SCALAR_TOL * self.norm().max(1.0)
    }

    fn inverse(&self) -> Result<Self> {
        if !self.is_paravector() {
            return Err(Error::NotParavector(self.higher_grade_norm()));
        }
        let r2 = self.paravector_parts().iter().map(|x| x * x).sum::<f64>();
        if r2 == 0.0 {
            return Err(Error::SingularScalar("inverse of zero paravector".into()));
        }
        let n = self.n();
        Ok(self.map(|k, x| match k {
            0 => x / r2,
            k if k <= n => -x / r2,
            _ => 0.0,
        }))
    }

    fn left_matrix(&self) -> DMatrix<f64> {
        self.regular_matrix(true)
    }

    fn right_matrix(&self) -> DMatrix<f64> {
        self.regular_matrix(false)
    }
}

impl Add for Multivector {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        self.zip_with(&rhs, |a, b| a + b)
    }
}

impl Sub for Multivector {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self.zip_with(&rhs, |a, b| a - b)
    }
}

impl Mul for Multivector {
    type Output = Self;
    /// Panics on mismatched algebras; use [`Multivector::try_mul`] to get an error instead.
    fn mul(self, rhs: Self) -> Self {
        self.try_mul(&rhs).expect("algebra dimension mismatch")
    }
}

impl Neg for Multivector {
    type Output = Self;
    fn neg(self) -> Self {
        self.map(|_, x| -x)
    }
}

impl fmt::Debug for Multivector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let t = blade::table(self.n());
        let terms: Vec<String> = self
            .coeffs()
            .iter()
            .zip(&t.masks)
            .filter(|(x, _)| **x != 0.0)
            .map(|(x, &m)| format!("{x}·{}", blade::blade_name(m)))
            .collect();
        if terms.is_empty() {
            write!(f, "0 (R_{})", self.n)
        } else {
            write!(f, "{} (R_{})", terms.join(" + "), self.n)
        }
    }
}

impl Serialize for Multivector {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.coeffs().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Multivector {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = Vec::<f64>::deserialize(d)?;
        Multivector::from_coeffs(&v).map_err(serde::de::Error::custom)
    }
}
