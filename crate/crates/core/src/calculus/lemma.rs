use super::{func_calc, quadrature, CalculusResult, SAFETY_FRACTION};
use crate::error::{Error, Result};
use crate::hypercomplex::Scalar;
use crate::operator::{ModuleOperator, OperatorMatrix, Side};
use crate::par::Execution;
use crate::slicefun::{pointwise_product, FunctionKind, SliceFunction};
use crate::spectrum::Contour;

/// (1/2π)∮ f(s) ds_I (s̄B - Bp)(p² - 2s0p + |s|²)^{-1}, which equals B when f
/// is absent and B∘L_{f(p)} for intrinsic f. The contour must enclose [p].
pub fn lemma_integral<S: Scalar>(
    b: &OperatorMatrix,
    p: &S,
    contour: &Contour<S>,
    f: Option<&SliceFunction<S>>,
) -> Result<CalculusResult> {
    if let Some(f) = f {
        if f.kind() != FunctionKind::Intrinsic {
            return Err(Error::Precondition("the lemma integral needs an intrinsic function".into()));
        }
        for pole in f.poles() {
            if contour.circles().iter().any(|c| c.contains(pole, 0.0) || c.boundary_distance(pole, 0.0) < SAFETY_FRACTION * c.radius) {
                return Err(Error::UnsafeContour(format!("pole {pole} is not safely outside the contour")));
            }
        }
    }
    let (u, v) = (p.re(), p.imag_norm());
    for (pu, pv) in [(u, v), (u, -v)] {
        if !contour.encloses(pu, pv) {
            return Err(Error::UnsafeContour(format!("[p] point ({pu}, {pv}) is not enclosed")));
        }
        if contour.circles().iter().any(|c| c.boundary_distance(pu, pv) < SAFETY_FRACTION * c.radius) {
            return Err(Error::UnsafeContour(format!("[p] point ({pu}, {pv}) is too close to the contour")));
        }
    }
    let d = b.d();
    let lp = OperatorMatrix::scalar(p, d);
    let bp = b * &lp;
    let p_sq = *p * *p;
    quadrature(b.blocks(), d, contour, Execution::Auto, |s, w| {
        let q = p_sq - p.scale(2.0 * s.re()) + p.real_like(s.norm_sq());
        let q_inv = q.inverse()?;
        let fw = match f {
            Some(f) => f.eval(s)? * *w,
            None => *w,
        };
        let core = &(&OperatorMatrix::scalar(&s.conj(), d) * b) - &bp;
        let m = &(&OperatorMatrix::scalar(&fw, d) * &core) * &OperatorMatrix::scalar(&q_inv, d);
        Ok((m.into_matrix(), 1.0))
    })
}

/// ‖(fg)(T) - f(T)g(T)‖₂ with f(T) from the right calculus on `inner` and
/// g(T), (fg)(T) from the left calculus on `inner` scaled to twice the radius.
/// Returns the residual and the summed error estimates.
pub fn product_rule_residual<S: Scalar>(
    f: &SliceFunction<S>,
    g: &SliceFunction<S>,
    t: &ModuleOperator<S>,
    inner: &Contour<S>,
) -> Result<(f64, f64)> {
    let fg = pointwise_product(f, g)?;
    let outer = inner.with_radius_scale(2.0)?;
    let lhs = func_calc(&fg, t, &outer, Side::Left)?;
    let ft = func_calc(f, t, inner, Side::Right)?;
    let gt = func_calc(g, t, &outer, Side::Left)?;
    let res = (&lhs.value - &(&ft.value * &gt.value)).norm2();
    Ok((res, lhs.err_estimate + ft.err_estimate + gt.err_estimate))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypercomplex::{ImaginaryUnit, Multivector, Paravector};
    use crate::operator::random;

    fn e1(n: usize) -> Multivector {
        ImaginaryUnit::generator(n, 1).unwrap().to_multivector()
    }

    fn pv(p: &[f64]) -> Multivector {
        Paravector::new(p).unwrap().to_multivector()
    }

    #[test]
    fn lemma_examples() {
        let id = OperatorMatrix::identity(4, 2);
        let c = Contour::circle(e1(2), 0.0, 1.0, 256).unwrap();
        let r = lemma_integral(&id, &pv(&[0.0, 0.5, 0.0]), &c, None).unwrap();
        assert!((&r.value - &id).norm2() < 1e-10);

        let c = Contour::circle(e1(2), 1.0, 1.0, 256).unwrap();
        let exp = SliceFunction::exp();
        let r = lemma_integral(&id, &pv(&[1.0, 0.0, 0.0]), &c, Some(&exp)).unwrap();
        assert!((&r.value - &id.scale(std::f64::consts::E)).norm2() < 1e-9);

        let b = random::paravector_operator(3, 2, 2, None).rep_matrix();
        let p = pv(&[0.5, 0.0, 0.5]);
        let c = Contour::circle(e1(2), 0.0, 2.0, 256).unwrap();
        let sq = SliceFunction::polynomial(&[0.0, 0.0, 1.0]);
        let r = lemma_integral(&b, &p, &c, Some(&sq)).unwrap();
        let expect = &b * &OperatorMatrix::scalar(&(p * p), 2);
        assert!((&r.value - &expect).norm2() < 1e-9);
        assert!(lemma_integral(&b, &pv(&[3.0, 0.0, 0.0]), &c, None).is_err());
    }

    #[test]
    fn product_rule_examples() {
        let t = random::paravector_operator(7, 2, 3, Some(1.0)).module();
        let c = Contour::circle(e1(2), 0.0, 1.5, 512).unwrap();
        let x = SliceFunction::polynomial(&[0.0, 1.0]);
        let one = SliceFunction::polynomial(&[1.0]);
        assert!(product_rule_residual(&one, &x, &t, &c).unwrap().0 < 1e-10);
        assert!(product_rule_residual(&x, &x, &t, &c).unwrap().0 < 1e-8);
        let g = SliceFunction::Left(vec![e1(2), Multivector::scalar(2, 1.0).unwrap()]);
        assert!(product_rule_residual(&SliceFunction::exp(), &g, &t, &c).unwrap().0 < 1e-7);
    }
}
