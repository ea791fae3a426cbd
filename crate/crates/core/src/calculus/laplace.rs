use crate::error::{Error, Result};
use crate::hypercomplex::{exp_paravector, Scalar};
use crate::operator::{ModuleOperator, OperatorMatrix, Side};
use gauss_quad::legendre::GaussLegendre;
use nalgebra::DMatrix;
use std::num::NonZeroUsize;

/// Composite Gauss-Legendre settings for the Laplace integral.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LaplaceOptions {
    /// Truncation point; defaults to 40/(s0 - ‖T‖).
    pub t_max: Option<f64>,
    /// Panel count; defaults to ⌈t_max (|s| + ‖T‖)⌉, at least 8.
    pub panels: Option<usize>,
    /// Gauss-Legendre nodes per panel.
    pub order: usize,
}

impl Default for LaplaceOptions {
    fn default() -> Self {
        Self {
            t_max: None,
            panels: None,
            order: 16,
        }
    }
}

/// ∫_0^∞ e^{tT} e^{-ts} dt (left) or ∫_0^∞ e^{-ts} e^{tT} dt (right), with
/// e^{-ts} = e^{-ts0}(cos(t|s̲|) - I_s sin(t|s̲|)). Requires s0 > ‖T‖.
pub fn laplace_resolvent<S: Scalar>(
    t: &ModuleOperator<S>,
    s: &S,
    side: Side,
    opts: &LaplaceOptions,
) -> Result<OperatorMatrix> {
    let gap = s.re() - t.norm_bound();
    if gap <= 0.0 {
        return Err(Error::Divergence(format!(
            "Re(s) = {} does not exceed the operator norm bound {}",
            s.re(),
            t.norm_bound()
        )));
    }
    let t_max = opts.t_max.unwrap_or(40.0 / gap);
    let panels = opts
        .panels
        .unwrap_or_else(|| ((t_max * (s.norm() + t.norm_bound())).ceil() as usize).max(8));
    let order = NonZeroUsize::new(opts.order).ok_or_else(|| Error::Precondition("order must be positive".into()))?;
    let rule = GaussLegendre::new(order);
    let h = t_max / panels as f64;
    let rep = t.rep().matrix();
    let step = (rep * h).exp();
    // e^{τ_i T} for the node offsets inside one panel
    let local: Vec<(f64, f64, DMatrix<f64>)> = rule
        .as_node_weight_pairs()
        .iter()
        .map(|&(x, w)| {
            let tau = 0.5 * h * (x + 1.0);
            (tau, 0.5 * h * w, (rep * tau).exp())
        })
        .collect();
    let (blocks, d) = (t.rep().blocks(), t.d());
    let mut acc = DMatrix::zeros(t.dim(), t.dim());
    let mut start = DMatrix::identity(t.dim(), t.dim());
    for j in 0..panels {
        let t0 = j as f64 * h;
        for (tau, w, e_tau) in &local {
            let time = t0 + tau;
            let e = &start * e_tau;
            let kernel = t.lift(&exp_paravector(&s.scale(-time)));
            let m = match side {
                Side::Left => e * kernel.matrix(),
                Side::Right => kernel.matrix() * e,
            };
            acc += m * *w;
        }
        start = &start * &step;
    }
    OperatorMatrix::from_matrix(blocks, d, acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypercomplex::{Multivector, Paravector, Quaternion};
    use crate::operator::{random, s_resolvent, ParavectorOperator};

    fn pv(p: &[f64]) -> Multivector {
        Paravector::new(p).unwrap().to_multivector()
    }

    #[test]
    fn zero_operator() {
        let z = ParavectorOperator::zero(1, 2).unwrap().module();
        let opts = LaplaceOptions::default();
        let r = laplace_resolvent(&z, &pv(&[2.0, 0.0]), Side::Left, &opts).unwrap();
        assert!((&r - &z.identity().scale(0.5)).norm2() < 1e-10);
        let r = laplace_resolvent(&z, &pv(&[1.0, 1.0]), Side::Left, &opts).unwrap();
        assert!((&r - &z.lift(&pv(&[0.5, -0.5]))).norm2() < 1e-8);
    }

    #[test]
    fn matches_closed_form() {
        let t = random::paravector_operator(7, 2, 3, Some(0.5)).module();
        let opts = LaplaceOptions::default();
        for s in [pv(&[2.0, 0.0, 0.0]), pv(&[1.0, 0.7, -0.3])] {
            for side in [Side::Left, Side::Right] {
                let l = laplace_resolvent(&t, &s, side, &opts).unwrap();
                assert!((&l - &s_resolvent(&t, &s, side).unwrap()).norm2() < 1e-6);
            }
        }
        let q = random::quaternion_operator(7, 4, Some(0.5)).module();
        let s = Quaternion::new(1.2, 0.3, -0.8, 0.5);
        for side in [Side::Left, Side::Right] {
            let l = laplace_resolvent(&q, &s, side, &opts).unwrap();
            assert!((&l - &s_resolvent(&q, &s, side).unwrap()).norm2() < 1e-6);
        }
    }

    #[test]
    fn divergence_rejected() {
        let t = random::paravector_operator(7, 2, 3, Some(0.5)).module();
        assert!(matches!(
            laplace_resolvent(&t, &pv(&[0.4, 0.0, 0.0]), Side::Left, &LaplaceOptions::default()),
            Err(Error::Divergence(_))
        ));
    }
}
