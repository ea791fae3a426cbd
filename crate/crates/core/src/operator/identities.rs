//! Residual evaluators for the resolvent identities. Each returns the
//! power-iteration 2-norm of LHS - RHS, with the Frobenius norm and the
//! relevant condition number alongside.

use super::resolvent::{pseudo_resolvent, resolvent_series, s_resolvent_with_cond};
use super::{ModuleOperator, OperatorMatrix, Side};
use crate::error::{Error, Result};
use crate::hypercomplex::{Scalar, SCALAR_TOL};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Residual {
    pub value: f64,
    pub frobenius: f64,
    pub cond: f64,
}

impl Residual {
    fn of(diff: &OperatorMatrix, cond: f64) -> Self {
        Self {
            value: diff.norm2(),
            frobenius: diff.frobenius(),
            cond,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ResolventResiduals {
    pub left: Residual,
    pub right: Residual,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum NewEquationForm {
    I,
    II,
}

/// S_L(s)∘L_s - T∘S_L(s) - I and L_s∘S_R(s) - S_R(s)∘T - I.
pub fn resolvent_equation_residuals<S: Scalar>(t: &ModuleOperator<S>, s: &S) -> Result<ResolventResiduals> {
    let (sl, cond) = s_resolvent_with_cond(t, s, Side::Left)?;
    let (sr, _) = s_resolvent_with_cond(t, s, Side::Right)?;
    let ls = t.lift(s);
    let id = t.identity();
    let left = &(&(&sl * &ls) - &(t.rep() * &sl)) - &id;
    let right = &(&(&ls * &sr) - &(&sr * t.rep())) - &id;
    Ok(ResolventResiduals {
        left: Residual::of(&left, cond),
        right: Residual::of(&right, cond),
    })
}

/// `a` must be invertible at the scale `scale`; used for the quadratic
/// factors that vanish exactly when one point lies on the other's sphere.
fn checked_inverse<S: Scalar>(a: &S, scale: f64, what: &str) -> Result<S> {
    if a.norm() <= SCALAR_TOL * scale.max(1.0) {
        return Err(Error::SingularScalar(format!("{what} vanishes: the points share a sphere")));
    }
    a.inverse()
}

/// p² - 2Re(s)p + |s|²
fn quad<S: Scalar>(p: &S, s: &S) -> S {
    *p * *p - p.scale(2.0 * s.re()) + p.real_like(s.norm_sq())
}

struct NewEquation {
    lhs: OperatorMatrix,
    rhs_i: OperatorMatrix,
    rhs_ii: OperatorMatrix,
    cond: f64,
}

fn new_equation<S: Scalar>(t: &ModuleOperator<S>, s: &S, p: &S) -> Result<NewEquation> {
    let scale = s.norm_sq() + p.norm_sq();
    let q1_inv = checked_inverse(&quad(p, s), scale, "p² - 2s0p + |s|²")?;
    let q2_inv = checked_inverse(&quad(s, p), scale, "s² - 2p0s + |p|²")?;
    let (sr, cond_s) = s_resolvent_with_cond(t, s, Side::Right)?;
    let (sl, cond_p) = s_resolvent_with_cond(t, p, Side::Left)?;
    let diff = &sr - &sl;
    let rhs_i = &(&(&diff * &t.lift(p)) - &(&t.lift(&s.conj()) * &diff)) * &t.lift(&q1_inv);
    // the bracket is D p̄ - s D: expanding the series term by term gives
    // q2^{-1}[s(S_L - S_R) - (S_L - S_R)p̄]
    let rhs_ii = &t.lift(&q2_inv) * &(&(&diff * &t.lift(&p.conj())) - &(&t.lift(s) * &diff));
    Ok(NewEquation {
        lhs: &sr * &sl,
        rhs_i,
        rhs_ii,
        cond: cond_s.max(cond_p),
    })
}

/// Residual of S_R(s)S_L(p) = [D p - s̄ D](p² - 2s0p + |s|²)^{-1} (form I) or
/// (s² - 2p0s + |p|²)^{-1}[D p̄ - s D] (form II), D = S_R(s) - S_L(p).
pub fn new_resolvent_residual<S: Scalar>(
    t: &ModuleOperator<S>,
    s: &S,
    p: &S,
    form: NewEquationForm,
) -> Result<Residual> {
    let eq = new_equation(t, s, p)?;
    let rhs = match form {
        NewEquationForm::I => &eq.rhs_i,
        NewEquationForm::II => &eq.rhs_ii,
    };
    Ok(Residual::of(&(&eq.lhs - rhs), eq.cond))
}

/// Distance between the form I and form II right-hand sides.
pub fn new_resolvent_forms_gap<S: Scalar>(t: &ModuleOperator<S>, s: &S, p: &S) -> Result<Residual> {
    let eq = new_equation(t, s, p)?;
    Ok(Residual::of(&(&eq.rhs_i - &eq.rhs_ii), eq.cond))
}

/// (T - s̄)Q_sQ_p(T - p̄) - (T - s̄)Q_pQ_s(T - p̄).
pub fn pseudo_commutation_residual<S: Scalar>(t: &ModuleOperator<S>, s: &S, p: &S) -> Result<Residual> {
    let qs = pseudo_resolvent(t, s)?;
    let qp = pseudo_resolvent(t, p)?;
    let a = t.rep() - &t.lift(&s.conj());
    let b = t.rep() - &t.lift(&p.conj());
    let one = &(&(&a * &qs.q) * &qp.q) * &b;
    let two = &(&(&a * &qp.q) * &qs.q) * &b;
    Ok(Residual::of(&(&one - &two), qs.cond.max(qp.cond)))
}

/// ‖resolvent_series(m) - s_resolvent‖₂.
pub fn series_residual<S: Scalar>(t: &ModuleOperator<S>, s: &S, m: usize, side: Side) -> Result<Residual> {
    let (closed, cond) = s_resolvent_with_cond(t, s, side)?;
    let series = resolvent_series(t, s, m, side)?;
    Ok(Residual::of(&(&series - &closed), cond))
}

/// Residual of the finite-sum identities
///
/// left:  Σ_{j≤m} p^j A s^{-1-j} = -q^{-1}(pA - As̄) + p^{m+1}q^{-1}(pA - As̄)s^{-1-m}
/// right: Σ_{j≤m} s^{-1-j} A p^j = -(Ap - s̄A)q^{-1} + s^{-1-m}(Ap - s̄A)q^{-1}p^{m+1}
///
/// with q = p² - 2Re(s)p + |s|² and scalars acting through L.
pub fn finite_sum_residual<S: Scalar>(a: &OperatorMatrix, s: &S, p: &S, m: usize, side: Side) -> Result<Residual> {
    if a.blocks() != s.algebra_dim() || a.blocks() != p.algebra_dim() {
        return Err(Error::DimensionMismatch {
            left: a.blocks(),
            right: s.algebra_dim(),
        });
    }
    let d = a.d();
    let lift = |x: &S| OperatorMatrix::scalar(x, d);
    let q_inv = checked_inverse(&quad(p, s), s.norm_sq() + p.norm_sq(), "p² - 2Re(s)p + |s|²")?;
    let s_inv = s.inverse()?;
    let (lp, ls_bar, lq) = (lift(p), lift(&s.conj()), lift(&q_inv));

    let mut sum = OperatorMatrix::zeros(a.blocks(), d);
    let mut p_pow = p.one_like();
    let mut s_pow = s_inv;
    for j in 0..=m {
        let term = match side {
            Side::Left => &(&lift(&p_pow) * a) * &lift(&s_pow),
            Side::Right => &(&lift(&s_pow) * a) * &lift(&p_pow),
        };
        sum = &sum + &term;
        if j < m {
            p_pow = p_pow * *p;
            s_pow = s_pow * s_inv;
        }
    }
    // p_pow = p^m and s_pow = s^{-1-m} here
    let p_next = lift(&(p_pow * *p));
    let s_last = lift(&s_pow);
    let rhs = match side {
        Side::Left => {
            let core = &(&lp * a) - &(a * &ls_bar);
            let first = (&lq * &core).scale(-1.0);
            let second = &(&(&p_next * &lq) * &core) * &s_last;
            &first + &second
        }
        Side::Right => {
            let core = &(a * &lp) - &(&ls_bar * a);
            let first = (&core * &lq).scale(-1.0);
            let second = &(&(&s_last * &core) * &lq) * &p_next;
            &first + &second
        }
    };
    Ok(Residual::of(&(&sum - &rhs), 1.0))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KernelResiduals {
    pub left: f64,
    pub right: f64,
}

/// Scalar kernel identities
///
/// left:  -(x² - 2Re(s)x + |s|²)^{-1}(x - s̄) = (s - x̄)(s² - 2Re(x)s + |x|²)^{-1}
/// right: -(x - s̄)(x² - 2Re(s)x + |s|²)^{-1} = (s² - 2Re(x)s + |x|²)^{-1}(s - x̄)
pub fn kernel_form_residuals<S: Scalar>(x: &S, s: &S) -> Result<KernelResiduals> {
    let scale = x.norm_sq() + s.norm_sq();
    let qx = checked_inverse(&quad(x, s), scale, "x² - 2Re(s)x + |s|²")?;
    let qs = checked_inverse(&quad(s, x), scale, "s² - 2Re(x)s + |x|²")?;
    let a = *x - s.conj();
    let b = *s - x.conj();
    let left = (-(qx * a)).dist(&(b * qs));
    let right = (-(a * qx)).dist(&(qs * b));
    Ok(KernelResiduals { left, right })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypercomplex::{Multivector, Paravector, Quaternion};
    use crate::operator::{random, ParavectorOperator};
    use nalgebra::{DMatrix, DVector};

    fn pv(p: &[f64]) -> Multivector {
        Paravector::new(p).unwrap().to_multivector()
    }

    #[test]
    fn classical_equations_examples() {
        let z = ParavectorOperator::zero(1, 2).unwrap().module();
        let r = resolvent_equation_residuals(&z, &pv(&[1.0, 1.0])).unwrap();
        assert!(r.left.value < 1e-14 && r.right.value < 1e-14);

        let diag = DMatrix::from_diagonal(&DVector::from_vec(vec![1.0, -1.0]));
        let t = ParavectorOperator::new(2, vec![diag, DMatrix::zeros(2, 2), DMatrix::zeros(2, 2)])
            .unwrap()
            .module();
        let r = resolvent_equation_residuals(&t, &pv(&[3.0, 0.0, 0.0])).unwrap();
        assert!(r.left.value < 1e-12 && r.right.value < 1e-12);

        let t = random::paravector_operator(42, 2, 4, None).module();
        let r = resolvent_equation_residuals(&t, &pv(&[2.0, 1.0, 1.0])).unwrap();
        assert!(r.left.value < 1e-10 && r.right.value < 1e-10);
    }

    #[test]
    fn new_equation_examples() {
        let z = ParavectorOperator::zero(2, 2).unwrap().module();
        for form in [NewEquationForm::I, NewEquationForm::II] {
            let r = new_resolvent_residual(&z, &pv(&[2.0, 0.0, 0.0]), &pv(&[3.0, 0.0, 0.0]), form).unwrap();
            assert!(r.value < 1e-14, "{form:?} {r:?}");
        }
        let lam = ParavectorOperator::real_scalar(2, 2, 0.4).unwrap().module();
        let (s, p) = (pv(&[2.0, 1.0, 0.0]), pv(&[0.0, 0.0, 1.0]));
        for form in [NewEquationForm::I, NewEquationForm::II] {
            assert!(new_resolvent_residual(&lam, &s, &p, form).unwrap().value < 1e-12);
        }
        let t = random::paravector_operator(42, 2, 4, None).module();
        let (s, p) = (pv(&[3.0, 0.0, 0.0]), pv(&[2.0, 1.0, 0.0]));
        for form in [NewEquationForm::I, NewEquationForm::II] {
            assert!(new_resolvent_residual(&t, &s, &p, form).unwrap().value < 1e-10);
        }
        assert!(new_resolvent_forms_gap(&t, &s, &p).unwrap().value < 1e-10);
    }

    #[test]
    fn form_ii_bracket_order() {
        // with the bracket written s D - D p̄ the right side is exactly -S_R(s)S_L(p)
        let t = random::paravector_operator(5, 2, 3, None).module();
        let (s, p) = (pv(&[3.0, 0.5, 0.0]), pv(&[-2.0, 0.0, 1.5]));
        let eq = new_equation(&t, &s, &p).unwrap();
        let (sr, _) = s_resolvent_with_cond(&t, &s, Side::Right).unwrap();
        let (sl, _) = s_resolvent_with_cond(&t, &p, Side::Left).unwrap();
        let d = &sr - &sl;
        let q2_inv = quad(&s, &p).inverse().unwrap();
        let swapped = &t.lift(&q2_inv) * &(&(&t.lift(&s) * &d) - &(&d * &t.lift(&p.conj())));
        assert!((&swapped + &eq.lhs).norm2() < 1e-10);
    }

    #[test]
    fn new_equation_rejects_same_sphere() {
        let t = random::paravector_operator(42, 2, 2, None).module();
        let (s, p) = (pv(&[3.0, 1.0, 0.0]), pv(&[3.0, 0.0, -1.0]));
        assert!(matches!(
            new_resolvent_residual(&t, &s, &p, NewEquationForm::I),
            Err(Error::SingularScalar(_))
        ));
    }

    #[test]
    fn new_equation_quaternionic() {
        let t = random::quaternion_operator(3, 3, None).module();
        let s = Quaternion::new(4.0, 0.5, 0.0, -1.0);
        let p = Quaternion::new(-3.0, 1.0, 2.0, 0.0);
        for form in [NewEquationForm::I, NewEquationForm::II] {
            let r = new_resolvent_residual(&t, &s, &p, form).unwrap();
            assert!(r.value <= 1e-9 * r.cond, "{r:?}");
        }
    }

    #[test]
    fn pseudo_commutation_examples() {
        let t = random::paravector_operator(42, 2, 4, None).module();
        let s = pv(&[3.0, 0.0, 0.0]);
        assert_eq!(pseudo_commutation_residual(&t, &s, &s).unwrap().value, 0.0);
        let p = pv(&[-2.5, 0.0, 0.0]);
        assert!(pseudo_commutation_residual(&t, &s, &p).unwrap().value < 1e-12);
        let p = pv(&[1.0, 2.0, 0.0]);
        assert!(pseudo_commutation_residual(&t, &s, &p).unwrap().value < 1e-10);
    }

    #[test]
    fn finite_sum_examples() {
        let a = random::paravector_operator(7, 2, 3, None).rep_matrix();
        let (s, p) = (pv(&[2.0, 0.0, 1.0]), pv(&[0.0, 0.5, 0.0]));
        for side in [Side::Left, Side::Right] {
            assert!(finite_sum_residual(&a, &s, &p, 0, side).unwrap().value < 1e-12 * a.norm2().max(1.0));
            assert!(finite_sum_residual(&a, &s, &p, 8, side).unwrap().value < 1e-11 * a.norm2());
        }
        let id = OperatorMatrix::identity(4, 2);
        let (s, p) = (pv(&[3.0, 0.0, 0.0]), pv(&[1.0, 0.0, 0.0]));
        assert!(finite_sum_residual(&id, &s, &p, 5, Side::Left).unwrap().value < 1e-12);
    }

    #[test]
    fn series_converges() {
        let t = random::paravector_operator(42, 2, 4, Some(0.5)).module();
        let s = pv(&[2.0, 0.0, 0.0]);
        let mut last = f64::INFINITY;
        for m in (10..=100).step_by(10) {
            let r = series_residual(&t, &s, m, Side::Left).unwrap().value;
            assert!(r <= last || r < 1e-14);
            last = r;
        }
        assert!(last < 1e-12);
    }

    #[test]
    fn kernel_identities_hold() {
        let x = pv(&[0.3, -0.7, 1.2]);
        let s = pv(&[1.5, 0.2, 0.4]);
        let r = kernel_form_residuals(&x, &s).unwrap();
        assert!(r.left < 1e-13 && r.right < 1e-13);
        // both kernels reduce to (s - x)^{-1} when x and s commute
        let x = pv(&[0.5, 0.0, 0.0]);
        let s = pv(&[2.0, 1.0, 0.0]);
        let qx = quad(&x, &s).inverse().unwrap();
        let form_i = -(qx * (x - s.conj()));
        assert!(form_i.dist(&(s - x).inverse().unwrap()) < 1e-14);
        assert!(kernel_form_residuals(&pv(&[1.0, 1.0, 0.0]), &pv(&[1.0, 0.0, 1.0])).is_err());
    }
}
