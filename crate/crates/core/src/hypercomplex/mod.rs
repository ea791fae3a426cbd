//! Hypercomplex scalars: the real Clifford algebra R_n (n ≤ 5) and the
//! quaternions, together with paravectors, imaginary units and the
//! left/right regular matrix representations.

mod blade;
mod multivector;
mod paravector;
mod quaternion;

pub use blade::{blade_name, MAX_DIM, MAX_N};
pub use multivector::Multivector;
pub use paravector::{slice_point, sphere_of, ImaginaryUnit, Paravector};
pub use quaternion::Quaternion;

use crate::error::Result;
use nalgebra::DMatrix;
use std::fmt::Debug;
use std::ops::{Add, Mul, Neg, Sub};

/// Relative tolerance used when deciding that a floating-point quantity is
/// zero at the scale of its operands.
pub const SCALAR_TOL: f64 = 1e-12;

/// A finite-dimensional real algebra with an anti-involution that acts as
/// conjugation on its "paravector" subspace (R + span of the generators).
///
/// Operators, resolvents and the functional calculus are generic over this
/// trait so that the Clifford and quaternionic settings share one code path.
pub trait Scalar:
    Copy
    + Debug
    + PartialEq
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    /// Real dimension of the algebra (2^n or 4).
    fn algebra_dim(&self) -> usize;

    /// Coefficients in the fixed basis order.
    fn coeffs(&self) -> &[f64];

    /// The real number `x` embedded in the same algebra as `self`.
    fn real_like(&self, x: f64) -> Self;

    fn scale(&self, k: f64) -> Self;

    /// Real (scalar) part.
    fn re(&self) -> f64;

    /// Euclidean norm of the vector part (the coefficients on the generators).
    fn imag_norm(&self) -> f64;

    /// Vector part, normalized; `None` when it vanishes.
    fn imag_unit(&self) -> Option<Self>;

    /// Conjugation; on paravectors x0 + x̲ it returns x0 - x̲.
    fn conj(&self) -> Self;

    /// Sum of squared coefficients.
    fn norm_sq(&self) -> f64;

    /// True when the element lies in R + span{generators} up to rounding.
    fn is_paravector(&self) -> bool;

    /// Inverse of a nonzero paravector.
    fn inverse(&self) -> Result<Self>;

    /// Matrix of v ↦ self·v on coefficient vectors.
    fn left_matrix(&self) -> DMatrix<f64>;

    /// Matrix of v ↦ v·self on coefficient vectors.
    fn right_matrix(&self) -> DMatrix<f64>;

    fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    fn zero_like(&self) -> Self {
        self.real_like(0.0)
    }

    fn one_like(&self) -> Self {
        self.real_like(1.0)
    }

    /// Integer power; negative exponents go through `inverse`.
    fn powi(&self, k: i32) -> Result<Self> {
        let base = if k < 0 { self.inverse()? } else { *self };
        let mut acc = self.one_like();
        for _ in 0..k.unsigned_abs() {
            acc = acc * base;
        }
        Ok(acc)
    }

    /// Max absolute coefficient difference.
    fn dist_max(&self, other: &Self) -> f64 {
        self.coeffs()
            .iter()
            .zip(other.coeffs())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    /// Euclidean distance between coefficient vectors.
    fn dist(&self, other: &Self) -> f64 {
        (*self - *other).norm()
    }
}

/// `e^{x}` for a paravector-valued scalar, evaluated on its own slice:
/// e^{x0} (cos|x̲| + I_x sin|x̲|).
pub fn exp_paravector<S: Scalar>(x: &S) -> S {
    let r = x.re().exp();
    let v = x.imag_norm();
    match x.imag_unit() {
        Some(i) => x.real_like(r * v.cos()) + i.scale(r * v.sin()),
        None => x.real_like(r),
    }
}
