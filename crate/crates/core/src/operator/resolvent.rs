use super::{ModuleOperator, OperatorMatrix, ParavectorOperator, Side};
use crate::error::{Error, Result};
use crate::hypercomplex::{Multivector, Scalar};
use crate::linalg::{self, kron};
use nalgebra::DMatrix;

/// Q_s(T) = (T² - 2Re(s)T + |s|²I)^{-1} with the 1-norm condition number of
/// the inverted matrix.
#[derive(Debug, Clone)]
pub struct PseudoResolvent {
    pub q: OperatorMatrix,
    pub cond: f64,
}

fn require_paravector<S: Scalar>(s: &S) -> Result<()> {
    if s.is_paravector() {
        Ok(())
    } else {
        Err(Error::NotParavector(
            (s.norm_sq() - s.re() * s.re() - s.imag_norm().powi(2)).max(0.0).sqrt(),
        ))
    }
}

/// Q_s(T), via LU with partial pivoting. Fails with [`Error::OnSpectrum`]
/// when the reciprocal condition number drops below 1e-13.
pub fn pseudo_resolvent<S: Scalar>(t: &ModuleOperator<S>, s: &S) -> Result<PseudoResolvent> {
    require_paravector(s)?;
    let m = t.rep_sq().matrix() - t.rep().matrix() * (2.0 * s.re())
        + DMatrix::identity(t.dim(), t.dim()) * s.norm_sq();
    match linalg::lu_inverse(&m) {
        Ok(inv) => Ok(PseudoResolvent {
            q: OperatorMatrix::from_matrix(t.rep().blocks(), t.d(), inv.inv)?,
            cond: inv.cond,
        }),
        Err(rcond) => Err(Error::OnSpectrum {
            u: s.re(),
            v: s.imag_norm(),
            rcond,
        }),
    }
}

/// S_L^{-1}(s,T) = -Q_s(T)(T - s̄I) or S_R^{-1}(s,T) = -(T - s̄I)Q_s(T),
/// together with cond(Q_s).
pub fn s_resolvent_with_cond<S: Scalar>(
    t: &ModuleOperator<S>,
    s: &S,
    side: Side,
) -> Result<(OperatorMatrix, f64)> {
    let pr = pseudo_resolvent(t, s)?;
    let shifted = t.rep() - &t.lift(&s.conj());
    let r = match side {
        Side::Left => &pr.q * &shifted,
        Side::Right => &shifted * &pr.q,
    };
    Ok((r.scale(-1.0), pr.cond))
}

pub fn s_resolvent<S: Scalar>(t: &ModuleOperator<S>, s: &S, side: Side) -> Result<OperatorMatrix> {
    s_resolvent_with_cond(t, s, side).map(|(r, _)| r)
}

/// Partial sum Σ_{m=0}^{m_max} T^m s^{-1-m} (left) or Σ s^{-1-m} T^m (right).
///
/// Converges to the closed-form S-resolvent when ‖T‖ < |s|; outside that
/// region the partial sums are still returned and simply fail to converge.
pub fn resolvent_series<S: Scalar>(
    t: &ModuleOperator<S>,
    s: &S,
    m_max: usize,
    side: Side,
) -> Result<OperatorMatrix> {
    require_paravector(s)?;
    let s_inv = s.inverse()?;
    let mut power = t.identity();
    let mut coeff = s_inv;
    let mut acc = OperatorMatrix::zeros(t.rep().blocks(), t.d());
    for m in 0..=m_max {
        let term = match side {
            Side::Left => &power * &t.lift(&coeff),
            Side::Right => &t.lift(&coeff) * &power,
        };
        acc = &acc + &term;
        if m < m_max {
            power = &power * t.rep();
            coeff = coeff * s_inv;
        }
    }
    Ok(acc)
}

/// The commutative S_C-resolvent (sI - T̄)(s²I - s(T+T̄) + TT̄)^{-1} (left)
/// or (s²I - s(T+T̄) + TT̄)^{-1}(sI - T̄) (right). Requires commuting components.
pub fn sc_resolvent(t: &ParavectorOperator, s: &Multivector, side: Side) -> Result<OperatorMatrix> {
    if !t.is_commuting() {
        return Err(Error::Precondition(
            "S_C-resolvent needs an operator with commuting components".into(),
        ));
    }
    require_paravector(s)?;
    let (n, d) = (t.n(), t.d());
    let blocks = 1 << n;
    let comps = t.components();
    // T + T̄ = 2T0 and TT̄ = Σ T_j² act on the V factor only
    let sum = &comps[0] * 2.0;
    let tt: DMatrix<f64> = comps.iter().map(|c| c * c).sum();
    let id_b = DMatrix::identity(blocks, blocks);
    let s2 = *s * *s;
    let m = kron(&s2.left_matrix(), &DMatrix::identity(d, d)) - kron(&s.left_matrix(), &sum)
        + kron(&id_b, &tt);
    let inv = linalg::lu_inverse(&m).map_err(|rcond| Error::OnSpectrum {
        u: s.re(),
        v: s.imag_norm(),
        rcond,
    })?;
    let inv = OperatorMatrix::from_matrix(blocks, d, inv.inv)?;
    let shifted = &OperatorMatrix::scalar(s, d) - &t.conjugate().rep_matrix();
    Ok(match side {
        Side::Left => &shifted * &inv,
        Side::Right => &inv * &shifted,
    })
}
