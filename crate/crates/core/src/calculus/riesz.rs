use super::{check_contour, contour_integral, CalculusResult};
use crate::error::Result;
use crate::hypercomplex::Scalar;
use crate::operator::{ModuleOperator, Side};
use crate::par::Execution;
use crate::spectrum::{build_contour, Contour, RadiusPolicy, Spectrum};

/// P = (1/2π)∮ S_L^{-1}(s,T) ds_I and T_part = (1/2π)∮ S_L^{-1}(s,T) ds_I s
/// over a contour around the selected spheres only.
#[derive(Debug, Clone)]
pub struct Projector<S: Scalar> {
    pub p: CalculusResult,
    pub t_part: CalculusResult,
    pub contour: Contour<S>,
}

pub fn riesz_projector<S: Scalar>(
    t: &ModuleOperator<S>,
    spec: &Spectrum,
    subset: &[usize],
    unit: S,
    nodes_per_circle: usize,
    policy: RadiusPolicy,
) -> Result<Projector<S>> {
    let contour = build_contour(spec, subset, unit, nodes_per_circle, policy)?;
    check_contour(spec, &contour, &[], false)?;
    let p = contour_integral(t, &contour, Side::Left, |s| Ok(s.one_like()), Execution::Auto)?;
    let t_part = contour_integral(t, &contour, Side::Left, |s| Ok(*s), Execution::Auto)?;
    Ok(Projector { p, t_part, contour })
}
