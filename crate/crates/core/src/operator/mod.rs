//! Paravector operators T = T0 + Σ e_j T_j on V_n = V ⊗ R_n and quaternionic
//! matrix operators, in real matrix form.
//!
//! Coordinates of V_n are blade-major: coordinate `A*d + i` holds the i-th
//! component of v_A. In this layout the operator T acts as
//! `Σ_j L(e_j) ⊗ T_j` and the scalar multiplication v ↦ a·v as `L(a) ⊗ I_d`,
//! where `L(a)` is the left-regular matrix of `a`.
//!
//! Scalars meet operators through two compositions: `(aX)(v) = a·X(v)` and
//! `(Xa)(v) = X(a·v)`. With this convention the operator series
//! Σ T^m s^{-1-m} satisfies the left S-resolvent equation at matrix level,
//! and every identity of the calculus becomes a plain matrix identity.

mod identities;
pub mod random;
mod resolvent;

pub use identities::{
    finite_sum_residual, kernel_form_residuals, new_resolvent_forms_gap, new_resolvent_residual,
    pseudo_commutation_residual, resolvent_equation_residuals, series_residual, KernelResiduals,
    NewEquationForm, Residual, ResolventResiduals,
};
pub use resolvent::{
    pseudo_resolvent, resolvent_series, s_resolvent, s_resolvent_with_cond, sc_resolvent,
    PseudoResolvent,
};

use crate::error::{Error, Result};
use crate::hypercomplex::{Multivector, Quaternion, Scalar};
use crate::linalg::{self, kron};
use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};
use std::ops::{Add, Mul, Sub};

/// Which side a scalar multiplies on, or which S-resolvent is meant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
}

/// A real-linear map on V ⊗ A (A the scalar algebra, of real dimension
/// `blocks`), as a real `(d·blocks) × (d·blocks)` matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorMatrix {
    blocks: usize,
    d: usize,
    m: DMatrix<f64>,
}

impl OperatorMatrix {
    pub fn from_matrix(blocks: usize, d: usize, m: DMatrix<f64>) -> Result<Self> {
        let dim = blocks * d;
        if m.shape() != (dim, dim) {
            return Err(Error::InvalidOperator(format!(
                "expected {dim}x{dim} matrix, got {}x{}",
                m.nrows(),
                m.ncols()
            )));
        }
        Ok(Self { blocks, d, m })
    }

    pub fn identity(blocks: usize, d: usize) -> Self {
        Self {
            blocks,
            d,
            m: DMatrix::identity(blocks * d, blocks * d),
        }
    }

    pub fn zeros(blocks: usize, d: usize) -> Self {
        Self {
            blocks,
            d,
            m: DMatrix::zeros(blocks * d, blocks * d),
        }
    }

    /// L_a: v ↦ a·v, the block lift `L(a) ⊗ I_d`.
    pub fn scalar<S: Scalar>(a: &S, d: usize) -> Self {
        Self {
            blocks: a.algebra_dim(),
            d,
            m: kron(&a.left_matrix(), &DMatrix::identity(d, d)),
        }
    }

    /// R_a: v ↦ v·a, the right scalar action.
    pub fn right_scalar<S: Scalar>(a: &S, d: usize) -> Self {
        Self {
            blocks: a.algebra_dim(),
            d,
            m: kron(&a.right_matrix(), &DMatrix::identity(d, d)),
        }
    }

    pub fn blocks(&self) -> usize {
        self.blocks
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn dim(&self) -> usize {
        self.blocks * self.d
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.m
    }

    pub fn into_matrix(self) -> DMatrix<f64> {
        self.m
    }

    pub fn scale(&self, k: f64) -> Self {
        Self {
            blocks: self.blocks,
            d: self.d,
            m: &self.m * k,
        }
    }

    /// Spectral norm (power-iteration estimate).
    pub fn norm2(&self) -> f64 {
        linalg::norm2(&self.m)
    }

    pub fn frobenius(&self) -> f64 {
        linalg::frobenius(&self.m)
    }

    pub fn pow(&self, k: usize) -> Self {
        let mut acc = Self::identity(self.blocks, self.d);
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    fn same_shape(&self, other: &Self) -> bool {
        self.blocks == other.blocks && self.d == other.d
    }

    /// Checked composition `self ∘ other`.
    pub fn try_compose(&self, other: &Self) -> Result<Self> {
        if !self.same_shape(other) {
            return Err(Error::DimensionMismatch {
                left: self.dim(),
                right: other.dim(),
            });
        }
        Ok(self * other)
    }
}

impl Mul for &OperatorMatrix {
    type Output = OperatorMatrix;
    fn mul(self, rhs: Self) -> OperatorMatrix {
        assert!(self.same_shape(rhs), "operator shape mismatch");
        OperatorMatrix {
            blocks: self.blocks,
            d: self.d,
            m: &self.m * &rhs.m,
        }
    }
}

impl Add for &OperatorMatrix {
    type Output = OperatorMatrix;
    fn add(self, rhs: Self) -> OperatorMatrix {
        assert!(self.same_shape(rhs), "operator shape mismatch");
        OperatorMatrix {
            blocks: self.blocks,
            d: self.d,
            m: &self.m + &rhs.m,
        }
    }
}

impl Sub for &OperatorMatrix {
    type Output = OperatorMatrix;
    fn sub(self, rhs: Self) -> OperatorMatrix {
        assert!(self.same_shape(rhs), "operator shape mismatch");
        OperatorMatrix {
            blocks: self.blocks,
            d: self.d,
            m: &self.m - &rhs.m,
        }
    }
}

macro_rules! owned_op {
    ($tr:ident, $f:ident) => {
        impl $tr for OperatorMatrix {
            type Output = OperatorMatrix;
            fn $f(self, rhs: Self) -> OperatorMatrix {
                $tr::$f(&self, &rhs)
            }
        }
    };
}

owned_op!(Mul, mul);
owned_op!(Add, add);
owned_op!(Sub, sub);

/// `L_a ∘ X` (side = left) or `X ∘ L_a` (side = right).
pub fn scalar_compose<S: Scalar>(x: &OperatorMatrix, a: &S, side: Side) -> Result<OperatorMatrix> {
    if a.algebra_dim() != x.blocks {
        return Err(Error::DimensionMismatch {
            left: x.blocks,
            right: a.algebra_dim(),
        });
    }
    let la = OperatorMatrix::scalar(a, x.d);
    Ok(match side {
        Side::Left => &la * x,
        Side::Right => x * &la,
    })
}

/// An operator on V ⊗ A in matrix form, bundled with the scalar action of A.
///
/// This is the common currency of the resolvent, spectrum and calculus
/// layers; it is built from a [`ParavectorOperator`] or a [`QuaternionOperator`].
#[derive(Debug, Clone)]
pub struct ModuleOperator<S: Scalar> {
    rep: OperatorMatrix,
    rep_sq: OperatorMatrix,
    one: S,
    norm_bound: f64,
}

impl<S: Scalar> ModuleOperator<S> {
    /// `one` fixes the algebra (its `real_like` prototype); `norm_bound` must
    /// dominate the spectral norm of `rep`.
    pub fn new(rep: OperatorMatrix, one: S, norm_bound: f64) -> Result<Self> {
        if rep.blocks != one.algebra_dim() {
            return Err(Error::DimensionMismatch {
                left: rep.blocks,
                right: one.algebra_dim(),
            });
        }
        let rep_sq = &rep * &rep;
        Ok(Self {
            rep,
            rep_sq,
            one: one.one_like(),
            norm_bound,
        })
    }

    pub fn rep(&self) -> &OperatorMatrix {
        &self.rep
    }

    pub fn rep_sq(&self) -> &OperatorMatrix {
        &self.rep_sq
    }

    /// The unit scalar of the algebra.
    pub fn one(&self) -> S {
        self.one
    }

    pub fn d(&self) -> usize {
        self.rep.d
    }

    pub fn dim(&self) -> usize {
        self.rep.dim()
    }

    /// ‖T‖ = Σ_j ‖T_j‖₂.
    pub fn norm_bound(&self) -> f64 {
        self.norm_bound
    }

    pub fn identity(&self) -> OperatorMatrix {
        OperatorMatrix::identity(self.rep.blocks, self.rep.d)
    }

    /// L_a for a scalar of this algebra.
    pub fn lift(&self, a: &S) -> OperatorMatrix {
        OperatorMatrix::scalar(a, self.rep.d)
    }

    /// Real number as a scalar of this algebra.
    pub fn real(&self, x: f64) -> S {
        self.one.real_like(x)
    }
}

fn spectral_norm(m: &DMatrix<f64>) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    m.clone().svd(false, false).singular_values.max()
}

fn check_components(d: usize, comps: &[DMatrix<f64>]) -> Result<()> {
    if d == 0 {
        return Err(Error::InvalidOperator("d must be positive".into()));
    }
    for (j, c) in comps.iter().enumerate() {
        if c.shape() != (d, d) {
            return Err(Error::InvalidOperator(format!(
                "component {j} is {}x{}, expected {d}x{d}",
                c.nrows(),
                c.ncols()
            )));
        }
        if c.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidOperator(format!("component {j} has non-finite entries")));
        }
    }
    Ok(())
}

/// Tolerance below which pairwise commutators count as vanishing.
pub const COMMUTING_TOL: f64 = 1e-12;

/// T = T0 + Σ_{j=1}^n e_j T_j with real d×d components.
#[derive(Debug, Clone, PartialEq)]
pub struct ParavectorOperator {
    n: usize,
    d: usize,
    components: Vec<DMatrix<f64>>,
    commuting: bool,
}

impl ParavectorOperator {
    pub fn new(n: usize, components: Vec<DMatrix<f64>>) -> Result<Self> {
        if !(1..=crate::hypercomplex::MAX_N).contains(&n) {
            return Err(Error::UnsupportedDimension(n));
        }
        if components.len() != n + 1 {
            return Err(Error::InvalidOperator(format!(
                "expected {} components for n = {n}, got {}",
                n + 1,
                components.len()
            )));
        }
        let d = components[0].nrows();
        check_components(d, &components)?;
        let commuting = components.iter().enumerate().all(|(i, a)| {
            components[i + 1..].iter().all(|b| {
                let scale = (a.norm() * b.norm()).max(1.0);
                (a * b - b * a).amax() <= COMMUTING_TOL * scale
            })
        });
        Ok(Self {
            n,
            d,
            components,
            commuting,
        })
    }

    /// The zero operator.
    pub fn zero(n: usize, d: usize) -> Result<Self> {
        Self::new(n, vec![DMatrix::zeros(d, d); n + 1])
    }

    /// λ·I (real scalar operator).
    pub fn real_scalar(n: usize, d: usize, lambda: f64) -> Result<Self> {
        let mut comps = vec![DMatrix::zeros(d, d); n + 1];
        comps[0] = DMatrix::identity(d, d) * lambda;
        Self::new(n, comps)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn components(&self) -> &[DMatrix<f64>] {
        &self.components
    }

    pub fn is_commuting(&self) -> bool {
        self.commuting
    }

    /// Σ_j ‖T_j‖₂.
    pub fn operator_norm_bound(&self) -> f64 {
        self.components.iter().map(spectral_norm).sum()
    }

    /// Multiplies every component by `k`.
    pub fn scaled(&self, k: f64) -> Self {
        Self::new(self.n, self.components.iter().map(|c| c * k).collect())
            .expect("scaling preserves validity")
    }

    /// T̄ = T0 - Σ e_j T_j.
    pub fn conjugate(&self) -> Self {
        let comps = self
            .components
            .iter()
            .enumerate()
            .map(|(j, c)| if j == 0 { c.clone() } else { -c })
            .collect();
        Self::new(self.n, comps).expect("conjugation preserves validity")
    }

    /// The matrix of v ↦ Σ_j e_j·T_j(v_B) e_B on blade-major coordinates.
    pub fn rep_matrix(&self) -> OperatorMatrix {
        let blocks = 1 << self.n;
        let mut m = DMatrix::zeros(blocks * self.d, blocks * self.d);
        for (j, c) in self.components.iter().enumerate() {
            let unit = if j == 0 {
                Multivector::scalar(self.n, 1.0)
            } else {
                Multivector::generator(self.n, j)
            }
            .expect("validated n");
            m += kron(&unit.left_matrix(), c);
        }
        OperatorMatrix {
            blocks,
            d: self.d,
            m,
        }
    }

    pub fn module(&self) -> ModuleOperator<Multivector> {
        let one = Multivector::scalar(self.n, 1.0).expect("validated n");
        ModuleOperator::new(self.rep_matrix(), one, self.operator_norm_bound())
            .expect("shapes agree by construction")
    }
}

/// A right-linear operator on H^d given by a d×d quaternion matrix
/// T = T0 + i T1 + j T2 + k T3 (real component matrices).
#[derive(Debug, Clone, PartialEq)]
pub struct QuaternionOperator {
    d: usize,
    components: [DMatrix<f64>; 4],
}

impl QuaternionOperator {
    pub fn new(components: [DMatrix<f64>; 4]) -> Result<Self> {
        let d = components[0].nrows();
        check_components(d, &components)?;
        Ok(Self { d, components })
    }

    /// From row-major quaternion entries.
    pub fn from_entries(d: usize, entries: &[Quaternion]) -> Result<Self> {
        if entries.len() != d * d {
            return Err(Error::InvalidOperator(format!(
                "expected {} entries, got {}",
                d * d,
                entries.len()
            )));
        }
        let comps = std::array::from_fn(|c| DMatrix::from_fn(d, d, |i, j| entries[i * d + j].coeffs()[c]));
        Self::new(comps)
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn entry(&self, i: usize, j: usize) -> Quaternion {
        let c = &self.components;
        Quaternion::new(c[0][(i, j)], c[1][(i, j)], c[2][(i, j)], c[3][(i, j)])
    }

    pub fn components(&self) -> &[DMatrix<f64>; 4] {
        &self.components
    }

    /// Σ_c ‖T_c‖₂, an upper bound for the operator norm.
    pub fn operator_norm_bound(&self) -> f64 {
        self.components.iter().map(spectral_norm).sum()
    }

    pub fn scaled(&self, k: f64) -> Self {
        Self::new(self.components.clone().map(|c| c * k)).expect("scaling preserves validity")
    }

    /// Matrix of v ↦ T v on component-major coordinates (coordinate `c*d + i`
    /// is the c-th quaternion component of v_i).
    pub fn rep_matrix(&self) -> OperatorMatrix {
        let units = [Quaternion::new(1.0, 0.0, 0.0, 0.0), Quaternion::I, Quaternion::J, Quaternion::K];
        let mut m = DMatrix::zeros(4 * self.d, 4 * self.d);
        for (u, c) in units.iter().zip(&self.components) {
            m += kron(&u.left_matrix(), c);
        }
        OperatorMatrix { blocks: 4, d: self.d, m }
    }

    pub fn module(&self) -> ModuleOperator<Quaternion> {
        ModuleOperator::new(
            self.rep_matrix(),
            Quaternion::new(1.0, 0.0, 0.0, 0.0),
            self.operator_norm_bound(),
        )
        .expect("shapes agree by construction")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypercomplex::Paravector;
    use nalgebra::DVector;

    fn random_op(n: usize, d: usize, seed: u64) -> ParavectorOperator {
        random::paravector_operator(seed, n, d, None)
    }

    /// Coordinates of v ∈ V_n as one multivector per V-coordinate.
    fn split(v: &DVector<f64>, n: usize, d: usize) -> Vec<Multivector> {
        let blocks = 1 << n;
        (0..d)
            .map(|i| Multivector::from_coeffs(&(0..blocks).map(|a| v[a * d + i]).collect::<Vec<_>>()).unwrap())
            .collect()
    }

    #[test]
    fn zero_operator_has_zero_matrix() {
        let t = ParavectorOperator::zero(2, 3).unwrap();
        assert_eq!(t.rep_matrix().matrix().amax(), 0.0);
    }

    #[test]
    fn e1_operator_is_left_regular_matrix() {
        let t = ParavectorOperator::new(1, vec![DMatrix::zeros(1, 1), DMatrix::identity(1, 1)]).unwrap();
        assert_eq!(
            t.rep_matrix().into_matrix(),
            DMatrix::from_row_slice(2, 2, &[0.0, -1.0, 1.0, 0.0])
        );
    }

    #[test]
    fn rep_matches_direct_evaluation() {
        // T(v) = Σ_{j,B} T_j(v_B) e_j e_B, evaluated with Clifford products
        for (n, d, seed) in [(1, 2, 1), (2, 3, 2), (3, 2, 3)] {
            let t = random_op(n, d, seed);
            let blocks = 1 << n;
            let v = DVector::from_fn(blocks * d, |k, _| ((k * 13 + 5) as f64).cos());
            let got = split(&(t.rep_matrix().matrix() * &v), n, d);
            let mut blade_vals = vec![DVector::zeros(d); blocks];
            for (a, slot) in blade_vals.iter_mut().enumerate() {
                *slot = DVector::from_fn(d, |i, _| v[a * d + i]);
            }
            let mut expect = vec![Multivector::zero(n).unwrap(); d];
            for (j, tj) in t.components().iter().enumerate() {
                let ej = if j == 0 {
                    Multivector::scalar(n, 1.0).unwrap()
                } else {
                    Multivector::generator(n, j).unwrap()
                };
                for (b, vb) in blade_vals.iter().enumerate() {
                    let mut eb = vec![0.0; blocks];
                    eb[b] = 1.0;
                    let eb = Multivector::from_coeffs(&eb).unwrap();
                    let w = tj * vb;
                    for i in 0..d {
                        expect[i] = expect[i] + (ej * eb).scale(w[i]);
                    }
                }
            }
            for (g, e) in got.iter().zip(&expect) {
                assert!(g.dist_max(e) < 1e-12);
            }
        }
    }

    #[test]
    fn rep_is_right_module_homomorphism() {
        let t = random_op(3, 2, 9).rep_matrix();
        let a = Multivector::from_coeffs(&[0.3, -1.0, 0.2, 0.5, 0.1, -0.7, 0.4, 0.9]).unwrap();
        let ra = OperatorMatrix::right_scalar(&a, 2);
        assert!((&t * &ra - &ra * &t).matrix().amax() < 1e-12);
        // but it does not commute with left multiplication by e1
        let l1 = OperatorMatrix::scalar(&Multivector::generator(3, 1).unwrap(), 2);
        assert!((&t * &l1 - &l1 * &t).matrix().amax() > 1e-3);
    }

    #[test]
    fn scalar_compose_examples() {
        let x = random_op(2, 2, 4).rep_matrix();
        let one = Multivector::scalar(2, 1.0).unwrap();
        assert_eq!(scalar_compose(&x, &one, Side::Left).unwrap(), x);
        assert_eq!(scalar_compose(&x, &one, Side::Right).unwrap(), x);
        // T - s̄I realized as rep(T) - L_{s̄}
        let s = Paravector::new(&[1.0, 2.0, -1.0]).unwrap();
        let id = OperatorMatrix::identity(4, 2);
        let sbar = scalar_compose(&id, &s.conjugate().to_multivector(), Side::Right).unwrap();
        assert_eq!(sbar, OperatorMatrix::scalar(&s.conjugate().to_multivector(), 2));
        let wrong = Multivector::scalar(3, 1.0).unwrap();
        assert!(scalar_compose(&x, &wrong, Side::Left).is_err());
    }

    #[test]
    fn scalar_compose_composition_law() {
        let x = random_op(2, 3, 5).rep_matrix();
        let a = Multivector::from_coeffs(&[0.2, 0.4, -0.1, 0.8]).unwrap();
        let b = Multivector::from_coeffs(&[-0.6, 0.3, 0.9, 0.5]).unwrap();
        let lhs = scalar_compose(&scalar_compose(&x, &a, Side::Right).unwrap(), &b, Side::Right).unwrap();
        let rhs = scalar_compose(&x, &(a * b), Side::Right).unwrap();
        assert!((&lhs - &rhs).matrix().amax() < 1e-12);
        let lhs = scalar_compose(&scalar_compose(&x, &a, Side::Left).unwrap(), &b, Side::Left).unwrap();
        let rhs = scalar_compose(&x, &(b * a), Side::Left).unwrap();
        assert!((&lhs - &rhs).matrix().amax() < 1e-12);
    }

    #[test]
    fn commuting_flag() {
        let diag = |a: f64, b: f64| DMatrix::from_diagonal(&DVector::from_vec(vec![a, b]));
        let t = ParavectorOperator::new(2, vec![DMatrix::zeros(2, 2), diag(1.0, 2.0), diag(3.0, 4.0)]).unwrap();
        assert!(t.is_commuting());
        assert!(!random_op(2, 3, 1).is_commuting());
    }

    #[test]
    fn invalid_operators() {
        assert!(ParavectorOperator::new(2, vec![DMatrix::zeros(2, 2); 2]).is_err());
        assert!(ParavectorOperator::new(1, vec![DMatrix::zeros(2, 2), DMatrix::zeros(3, 3)]).is_err());
        assert!(ParavectorOperator::new(6, vec![DMatrix::zeros(1, 1); 7]).is_err());
    }

    #[test]
    fn quaternion_rep_matches_entrywise_action() {
        let t = random::quaternion_operator(3, 3, None);
        let v: Vec<Quaternion> = (0..3)
            .map(|i| Quaternion::new(i as f64, 0.5, -1.0, 0.25 * i as f64))
            .collect();
        let coords = DVector::from_fn(12, |k, _| v[k % 3].coeffs()[k / 3]);
        let w = t.rep_matrix().matrix() * coords;
        for i in 0..3 {
            let mut expect = Quaternion::new(0.0, 0.0, 0.0, 0.0);
            for (j, vj) in v.iter().enumerate() {
                expect = expect + t.entry(i, j) * *vj;
            }
            for c in 0..4 {
                assert!((w[c * 3 + i] - expect.coeffs()[c]).abs() < 1e-12);
            }
        }
    }
}
