//! Grid scan of the singularity margin over the (u, v) half-plane, used to
//! cross-check the eigenvalue-derived spheres independently.

use super::q_singularity_margin;
use crate::error::{Error, Result};
use crate::hypercomplex::Scalar;
use crate::operator::ModuleOperator;
use crate::par::{self, Execution};
use argmin::core::{CostFunction, Executor};
use argmin::solver::neldermead::NelderMead;
use serde::{Deserialize, Serialize};

/// A refined local minimum of the singularity margin.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridMinimum {
    pub u: f64,
    pub v: f64,
    pub margin: f64,
}

struct MarginCost<'a, S: Scalar> {
    t: &'a ModuleOperator<S>,
}

impl<S: Scalar> CostFunction for MarginCost<'_, S> {
    type Param = Vec<f64>;
    type Output = f64;

    fn cost(&self, p: &Self::Param) -> std::result::Result<f64, argmin::core::Error> {
        // the margin is even in v, so the optimizer may roam the full plane
        q_singularity_margin(self.t, p[0], p[1].abs()).map_err(|e| argmin::core::Error::msg(e.to_string()))
    }
}

fn refine<S: Scalar>(t: &ModuleOperator<S>, u: f64, v: f64, h: f64) -> Result<GridMinimum> {
    let simplex = vec![vec![u, v], vec![u + h, v], vec![u, v + h]];
    let solver = NelderMead::new(simplex)
        .with_sd_tolerance(1e-16)
        .map_err(|e| Error::Numerical(e.to_string()))?;
    let res = Executor::new(MarginCost { t }, solver)
        .configure(|state| state.max_iters(2000))
        .run()
        .map_err(|e| Error::Numerical(e.to_string()))?;
    let best = res
        .state()
        .best_param
        .clone()
        .ok_or_else(|| Error::Numerical("Nelder-Mead returned no parameter".into()))?;
    let (u, v) = (best[0], best[1].abs());
    Ok(GridMinimum {
        u,
        v,
        margin: q_singularity_margin(t, u, v)?,
    })
}

/// Evaluates the margin on a `resolution × resolution` grid covering
/// [-R, R] × [0, R] with R slightly above the operator norm bound, then
/// refines every discrete local minimum with Nelder-Mead. Minima are
/// returned in grid order.
pub fn grid_scan<S: Scalar>(t: &ModuleOperator<S>, resolution: usize, exec: Execution) -> Result<Vec<GridMinimum>> {
    if resolution < 3 {
        return Err(Error::Precondition("grid scan needs at least 3 points per axis".into()));
    }
    let r = 1.05 * t.norm_bound() + 0.1;
    let k = resolution;
    let hu = 2.0 * r / (k - 1) as f64;
    let hv = r / (k - 1) as f64;
    let at = |i: usize, j: usize| (-r + i as f64 * hu, j as f64 * hv);
    let values = par::try_map_indexed(k * k, exec, |idx| {
        let (u, v) = at(idx / k, idx % k);
        q_singularity_margin(t, u, v)
    })?;
    let val = |i: usize, j: usize| values[i * k + j];

    let mut seeds = Vec::new();
    for i in 0..k {
        for j in 0..k {
            let c = val(i, j);
            let mut is_min = true;
            for di in -1i64..=1 {
                for dj in -1i64..=1 {
                    let (ni, nj) = (i as i64 + di, j as i64 + dj);
                    if (di, dj) == (0, 0) || ni < 0 || nj < 0 || ni >= k as i64 || nj >= k as i64 {
                        continue;
                    }
                    if val(ni as usize, nj as usize) < c {
                        is_min = false;
                    }
                }
            }
            if is_min {
                seeds.push(at(i, j));
            }
        }
    }
    let refined = par::try_map_indexed(seeds.len(), exec, |idx| refine(t, seeds[idx].0, seeds[idx].1, hu.min(hv)))?;
    let mut out: Vec<GridMinimum> = Vec::new();
    for m in refined {
        if !out.iter().any(|o| (o.u - m.u).abs() < 1e-7 && (o.v - m.v).abs() < 1e-7) {
            out.push(m);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operator::{random, ParavectorOperator};
    use crate::spectrum::s_spectrum;

    #[test]
    fn scan_finds_the_spheres() {
        let t = random::paravector_operator(3, 2, 2, None);
        let spec = s_spectrum(&t).unwrap();
        let minima = grid_scan(&t.module(), 50, Execution::Auto).unwrap();
        let deep: Vec<_> = minima.iter().filter(|m| m.margin < 1e-6).collect();
        assert!(!deep.is_empty());
        for m in deep {
            assert!(spec.distance_to(m.u, m.v) < 1e-4, "{m:?}");
        }
    }

    #[test]
    fn zero_operator_minimum_at_origin() {
        let t = ParavectorOperator::zero(1, 1).unwrap().module();
        let minima = grid_scan(&t, 11, Execution::Sequential).unwrap();
        assert!(minima.iter().any(|m| m.u.abs() < 1e-6 && m.v < 1e-6));
    }
}
