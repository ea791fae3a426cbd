//! The S-functional calculus by trapezoidal quadrature on circles in one slice:
//!
//! left:  f(T) = (1/2π)∮ S_L^{-1}(s,T) ds_I f(s) ≈ Σ_k S_L^{-1}(s_k,T)∘L_{w_k f(s_k)}
//! right: f(T) = (1/2π)∮ f(s) ds_I S_R^{-1}(s,T) ≈ Σ_k L_{f(s_k) w_k}∘S_R^{-1}(s_k,T)
//!
//! Node terms are computed independently (in parallel when enabled) and summed
//! in node order, so results do not depend on the thread count.

mod laplace;
mod lemma;
mod riesz;

pub use laplace::{laplace_resolvent, LaplaceOptions};
pub use lemma::{lemma_integral, product_rule_residual};
pub use riesz::{riesz_projector, Projector};

use crate::error::{Error, Result};
use crate::hypercomplex::Scalar;
use crate::operator::{s_resolvent_with_cond, ModuleOperator, OperatorMatrix, Side};
use crate::par::{self, Execution};
use crate::slicefun::SliceFunction;
use crate::spectrum::{s_spectrum_of, Circle, Contour, Spectrum};
use nalgebra::DMatrix;

/// Contours closer to the spectrum than this fraction of their radius are rejected.
pub const SAFETY_FRACTION: f64 = 0.1;

#[derive(Debug, Clone)]
pub struct CalculusResult {
    pub value: OperatorMatrix,
    /// ‖Q_N - Q_{N/2}‖₂ plus a first-order rounding bound.
    pub err_estimate: f64,
    pub nodes: usize,
    pub circles: Vec<Circle>,
}

/// Σ_k term_k for per-node terms built by `term(s_k, w_k) -> (matrix, cond)`,
/// with the halved-rule error estimate.
pub(crate) fn quadrature<S, F>(
    blocks: usize,
    d: usize,
    contour: &Contour<S>,
    exec: Execution,
    term: F,
) -> Result<CalculusResult>
where
    S: Scalar,
    F: Fn(&S, &S) -> Result<(DMatrix<f64>, f64)> + Sync + Send,
{
    let nodes = contour.nodes();
    let terms = par::try_map_indexed(nodes.len(), exec, |k| term(&nodes[k].s, &nodes[k].w))?;
    let dim = blocks * d;
    let mut full = DMatrix::zeros(dim, dim);
    let mut half = DMatrix::zeros(dim, dim);
    let mut rounding = 0.0;
    // every circle has an even node count, so global parity matches per-circle parity
    for (k, (m, cond)) in terms.iter().enumerate() {
        full += m;
        if k % 2 == 0 {
            half += m * 2.0;
        }
        rounding += cond * m.norm();
    }
    let diff = OperatorMatrix::from_matrix(blocks, d, &full - &half)?;
    Ok(CalculusResult {
        value: OperatorMatrix::from_matrix(blocks, d, full)?,
        err_estimate: diff.norm2() + f64::EPSILON * rounding,
        nodes: nodes.len(),
        circles: contour.circles().to_vec(),
    })
}

/// Raw contour integral of `f` against the chosen S-resolvent. No geometry
/// checks; see [`func_calc`] for the checked entry point.
pub fn contour_integral<S, F>(
    t: &ModuleOperator<S>,
    contour: &Contour<S>,
    side: Side,
    f: F,
    exec: Execution,
) -> Result<CalculusResult>
where
    S: Scalar,
    F: Fn(&S) -> Result<S> + Sync + Send,
{
    quadrature(t.rep().blocks(), t.d(), contour, exec, |s, w| {
        let (r, cond) = s_resolvent_with_cond(t, s, side)?;
        let fs = f(s)?;
        let m = match side {
            Side::Left => &r * &t.lift(&(*w * fs)),
            Side::Right => &t.lift(&(fs * *w)) * &r,
        };
        Ok((m.into_matrix(), cond))
    })
}

/// Checks that every spectral point is enclosed (when `enclose_all`) and no
/// circle passes closer than [`SAFETY_FRACTION`]·radius to the spectrum or
/// to a pole of `f`.
pub fn check_contour<S: Scalar>(
    spec: &Spectrum,
    contour: &Contour<S>,
    poles: &[f64],
    enclose_all: bool,
) -> Result<()> {
    let margin = contour.relative_margin(&spec.spheres);
    if margin < SAFETY_FRACTION {
        return Err(Error::UnsafeContour(format!(
            "spectrum within {margin:.3e} radii of the contour (minimum {SAFETY_FRACTION})"
        )));
    }
    if enclose_all {
        for sp in &spec.spheres {
            for (u, v) in sp.slice_points() {
                if !contour.encloses(u, v) {
                    return Err(Error::UnsafeContour(format!(
                        "spectral point ({u}, {v}) lies outside the contour"
                    )));
                }
            }
        }
    }
    for &p in poles {
        for c in contour.circles() {
            if c.contains(p, 0.0) || c.boundary_distance(p, 0.0) < SAFETY_FRACTION * c.radius {
                return Err(Error::UnsafeContour(format!("pole {p} is not safely outside the contour")));
            }
        }
    }
    Ok(())
}

/// f(T) over a contour that must enclose the whole S-spectrum.
pub fn func_calc<S: Scalar>(
    f: &SliceFunction<S>,
    t: &ModuleOperator<S>,
    contour: &Contour<S>,
    side: Side,
) -> Result<CalculusResult> {
    func_calc_with(f, t, contour, side, Execution::Auto)
}

pub fn func_calc_with<S: Scalar>(
    f: &SliceFunction<S>,
    t: &ModuleOperator<S>,
    contour: &Contour<S>,
    side: Side,
    exec: Execution,
) -> Result<CalculusResult> {
    if !f.fits_side(side) {
        return Err(Error::Precondition(format!(
            "a {:?} function cannot use the {side:?} calculus",
            f.kind()
        )));
    }
    let spec = s_spectrum_of(t)?;
    check_contour(&spec, contour, &f.poles(), true)?;
    contour_integral(t, contour, side, |s| f.eval(s), exec)
}

/// ‖f(T)_left - f(T)_right‖₂ for intrinsic f, with the summed error estimates.
pub fn left_right_agreement<S: Scalar>(
    f: &SliceFunction<S>,
    t: &ModuleOperator<S>,
    contour: &Contour<S>,
) -> Result<(f64, f64)> {
    if f.kind() != crate::slicefun::FunctionKind::Intrinsic {
        return Err(Error::Precondition("left/right agreement needs an intrinsic function".into()));
    }
    let l = func_calc(f, t, contour, Side::Left)?;
    let r = func_calc(f, t, contour, Side::Right)?;
    Ok(((&l.value - &r.value).norm2(), l.err_estimate + r.err_estimate))
}

/// Scalar Cauchy formula f(x) = (1/2π)∮ S_L^{-1}(s,x) ds_I f(s) (or the
/// right mirror), with the kernel in form II:
/// S_L^{-1}(s,x) = (s - x̄)(s² - 2Re(x)s + |x|²)^{-1},
/// S_R^{-1}(s,x) = (s² - 2Re(x)s + |x|²)^{-1}(s - x̄).
pub fn cauchy_eval<S: Scalar>(f: &SliceFunction<S>, x: &S, contour: &Contour<S>, side: Side) -> Result<S> {
    if !f.fits_side(side) {
        return Err(Error::Precondition(format!(
            "a {:?} function cannot use the {side:?} formula",
            f.kind()
        )));
    }
    let (u, v) = (x.re(), x.imag_norm());
    for (pu, pv) in [(u, v), (u, -v)] {
        if !contour.encloses(pu, pv) {
            return Err(Error::UnsafeContour(format!("({pu}, {pv}) is not enclosed")));
        }
        for c in contour.circles() {
            if c.boundary_distance(pu, pv) < SAFETY_FRACTION * c.radius {
                return Err(Error::UnsafeContour(format!("({pu}, {pv}) is too close to the contour")));
            }
        }
    }
    let xbar = x.conj();
    let mut acc = x.zero_like();
    for node in contour.nodes() {
        let s = node.s;
        let q = s * s - s.scale(2.0 * u) + s.real_like(x.norm_sq());
        let q_inv = q.inverse()?;
        let fs = f.eval(&s)?;
        acc = acc
            + match side {
                Side::Left => (s - xbar) * q_inv * node.w * fs,
                Side::Right => fs * node.w * q_inv * (s - xbar),
            };
    }
    Ok(acc)
}
