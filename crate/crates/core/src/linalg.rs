//! Dense real linear algebra used by the operator layer: Kronecker lifts,
//! LU inversion with a reciprocal-condition guard, and norm estimates.

use crate::error::{Error, Result};
use nalgebra::{DMatrix, DVector};

/// Iterations of the power method used for 2-norm estimates.
pub const POWER_ITERATIONS: usize = 50;

/// Inverses whose reciprocal condition number falls below this are treated as singular.
pub const RCOND_MIN: f64 = 1e-13;

/// Kronecker product a ⊗ b (block (i, j) is a[(i, j)]·b).
pub fn kron(a: &DMatrix<f64>, b: &DMatrix<f64>) -> DMatrix<f64> {
    let (ar, ac) = a.shape();
    let (br, bc) = b.shape();
    let mut out = DMatrix::zeros(ar * br, ac * bc);
    for i in 0..ar {
        for j in 0..ac {
            let x = a[(i, j)];
            if x == 0.0 {
                continue;
            }
            out.view_mut((i * br, j * bc), (br, bc)).copy_from(&(b * x));
        }
    }
    out
}

/// Matrix 1-norm (max column sum).
pub fn norm1(m: &DMatrix<f64>) -> f64 {
    m.column_iter()
        .map(|c| c.iter().map(|x| x.abs()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// Spectral norm estimated by power iteration on mᵀm from a fixed start vector.
pub fn norm2(m: &DMatrix<f64>) -> f64 {
    let cols = m.ncols();
    if cols == 0 || m.nrows() == 0 {
        return 0.0;
    }
    // irrational-ish weights so the start vector is not orthogonal to structured singular vectors
    let mut x = DVector::from_fn(cols, |i, _| 1.0 + 0.5 * ((i as f64 + 1.0) * 0.754_877_666).sin());
    x /= x.norm();
    let mut sigma = 0.0;
    for _ in 0..POWER_ITERATIONS {
        let y = m * &x;
        let z = m.transpose() * &y;
        let zn = z.norm();
        if zn == 0.0 {
            return y.norm();
        }
        sigma = zn.sqrt();
        x = z / zn;
    }
    // ‖m x‖ for the final unit vector is a guaranteed lower bound; report the larger estimate
    sigma.max((m * &x).norm())
}

/// Frobenius norm.
pub fn frobenius(m: &DMatrix<f64>) -> f64 {
    m.norm()
}

/// Inverse by LU with partial pivoting together with the 1-norm condition number.
pub struct Inverse {
    pub inv: DMatrix<f64>,
    pub cond: f64,
}

/// LU inverse; fails with [`Error::Numerical`] when the matrix is singular to
/// working precision (reciprocal condition below [`RCOND_MIN`]).
pub fn lu_inverse(m: &DMatrix<f64>) -> std::result::Result<Inverse, f64> {
    let lu = m.clone().lu();
    let inv = match lu.try_inverse() {
        Some(inv) => inv,
        None => return Err(0.0),
    };
    let cond = norm1(m) * norm1(&inv);
    if !cond.is_finite() || 1.0 / cond < RCOND_MIN {
        return Err(if cond.is_finite() { 1.0 / cond } else { 0.0 });
    }
    Ok(Inverse { inv, cond })
}

/// Smallest singular value.
pub fn min_singular_value(m: &DMatrix<f64>) -> Result<f64> {
    let sv = m
        .clone()
        .try_svd(false, false, f64::EPSILON, 10_000)
        .ok_or_else(|| Error::Numerical("SVD did not converge".into()))?
        .singular_values;
    Ok(sv.iter().copied().fold(f64::INFINITY, f64::min))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kron_shapes_and_blocks() {
        let a = DMatrix::from_row_slice(2, 2, &[0.0, -1.0, 1.0, 0.0]);
        let b = DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 3.0, 4.0]);
        let k = kron(&a, &b);
        assert_eq!(k.shape(), (4, 4));
        assert_eq!(k[(0, 2)], -1.0);
        assert_eq!(k[(3, 1)], 4.0);
        assert_eq!(k[(0, 0)], 0.0);
    }

    #[test]
    fn norm2_matches_svd() {
        let m = DMatrix::from_fn(6, 6, |i, j| ((i * 7 + j * 3) as f64).sin());
        let exact = m.clone().svd(false, false).singular_values.max();
        assert!((norm2(&m) - exact).abs() < 1e-8 * exact);
        assert_eq!(norm2(&DMatrix::zeros(3, 3)), 0.0);
    }

    #[test]
    fn lu_inverse_guards_singularity() {
        let m = DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 2.0, 4.0]);
        assert!(lu_inverse(&m).is_err());
        let m = DMatrix::from_row_slice(2, 2, &[2.0, 1.0, 1.0, 3.0]);
        let inv = lu_inverse(&m).unwrap();
        assert!((&m * &inv.inv - DMatrix::identity(2, 2)).amax() < 1e-15);
        assert!(inv.cond > 1.0);
    }

    #[test]
    fn min_singular_value_of_diag() {
        let m = DMatrix::from_diagonal(&DVector::from_vec(vec![3.0, 0.5, 2.0]));
        assert!((min_singular_value(&m).unwrap() - 0.5).abs() < 1e-14);
    }
}
