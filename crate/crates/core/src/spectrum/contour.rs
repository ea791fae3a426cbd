use super::{SpectralSphere, Spectrum};
use crate::error::{Error, Result};
use crate::hypercomplex::{Scalar, SCALAR_TOL};
use serde::Serialize;
use std::f64::consts::PI;

/// Spheres closer than this cannot be separated by a contour.
pub const MIN_GAP: f64 = 1e-6;

/// Default circle radius cap.
pub const DEFAULT_RADIUS: f64 = 0.25;

/// A circle in the slice C_I: center `cu + I cv` (cv may be negative) and radius.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Circle {
    pub cu: f64,
    pub cv: f64,
    pub radius: f64,
}

impl Circle {
    pub fn distance_to_center(&self, u: f64, v: f64) -> f64 {
        (u - self.cu).hypot(v - self.cv)
    }

    pub fn contains(&self, u: f64, v: f64) -> bool {
        self.distance_to_center(u, v) < self.radius
    }

    /// Distance from (u, v) to the circle line.
    pub fn boundary_distance(&self, u: f64, v: f64) -> f64 {
        (self.distance_to_center(u, v) - self.radius).abs()
    }
}

/// Quadrature node: s_k = c + r e^{Iθ_k} with weight w_k = (s_k - c)/N, so that
/// Σ_k X(s_k) w_k f(s_k) approximates (1/2π)∮ X(s) ds_I f(s) with ds_I = -ds I.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContourNode<S> {
    pub circle: usize,
    pub theta: f64,
    pub s: S,
    pub w: S,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RadiusPolicy {
    /// min(0.25, gap/3), shrunk further if clustering needs it.
    Default,
    /// min(r, gap/3).
    Cap(f64),
}

impl RadiusPolicy {
    fn cap(self) -> f64 {
        match self {
            RadiusPolicy::Default => DEFAULT_RADIUS,
            RadiusPolicy::Cap(r) => r,
        }
    }
}

/// A finite union of disjoint, counterclockwise circles in one slice C_I.
#[derive(Debug, Clone)]
pub struct Contour<S: Scalar> {
    unit: S,
    circles: Vec<Circle>,
    nodes_per_circle: usize,
    nodes: Vec<ContourNode<S>>,
}

fn check_unit<S: Scalar>(unit: &S) -> Result<()> {
    let sq = *unit * *unit;
    if unit.re().abs() > SCALAR_TOL || sq.dist_max(&unit.real_like(-1.0)) > SCALAR_TOL {
        return Err(Error::InvalidUnit(format!("{unit:?} does not square to -1")));
    }
    Ok(())
}

impl<S: Scalar> Contour<S> {
    /// `unit` must be a unit imaginary (I² = -1); circles must be disjoint.
    pub fn new(unit: S, circles: Vec<Circle>, nodes_per_circle: usize) -> Result<Self> {
        check_unit(&unit)?;
        if circles.is_empty() {
            return Err(Error::Precondition("contour needs at least one circle".into()));
        }
        if nodes_per_circle < 4 || !nodes_per_circle.is_multiple_of(2) {
            return Err(Error::Precondition(format!(
                "nodes per circle must be even and at least 4, got {nodes_per_circle}"
            )));
        }
        for (i, a) in circles.iter().enumerate() {
            if !(a.radius > 0.0 && a.radius.is_finite()) {
                return Err(Error::Precondition(format!("circle {i} has radius {}", a.radius)));
            }
            for b in &circles[i + 1..] {
                if a.distance_to_center(b.cu, b.cv) <= a.radius + b.radius {
                    return Err(Error::NonSeparable("contour circles overlap".into()));
                }
            }
        }
        let nf = nodes_per_circle as f64;
        let mut nodes = Vec::with_capacity(circles.len() * nodes_per_circle);
        for (ci, c) in circles.iter().enumerate() {
            let center = unit.real_like(c.cu) + unit.scale(c.cv);
            for k in 0..nodes_per_circle {
                let theta = 2.0 * PI * k as f64 / nf;
                let offset = unit.real_like(c.radius * theta.cos()) + unit.scale(c.radius * theta.sin());
                nodes.push(ContourNode {
                    circle: ci,
                    theta,
                    s: center + offset,
                    w: offset.scale(1.0 / nf),
                });
            }
        }
        Ok(Self {
            unit,
            circles,
            nodes_per_circle,
            nodes,
        })
    }

    /// One circle centered at the real point `center`.
    pub fn circle(unit: S, center: f64, radius: f64, nodes: usize) -> Result<Self> {
        Self::new(
            unit,
            vec![Circle {
                cu: center,
                cv: 0.0,
                radius,
            }],
            nodes,
        )
    }

    pub fn unit(&self) -> S {
        self.unit
    }

    pub fn circles(&self) -> &[Circle] {
        &self.circles
    }

    pub fn nodes_per_circle(&self) -> usize {
        self.nodes_per_circle
    }

    pub fn nodes(&self) -> &[ContourNode<S>] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn max_radius(&self) -> f64 {
        self.circles.iter().map(|c| c.radius).fold(0.0, f64::max)
    }

    /// Same circles and unit, different node count.
    pub fn with_nodes(&self, nodes_per_circle: usize) -> Result<Self> {
        Self::new(self.unit, self.circles.clone(), nodes_per_circle)
    }

    /// Same circles and nodes, another slice unit.
    pub fn with_unit(&self, unit: S) -> Result<Self> {
        Self::new(unit, self.circles.clone(), self.nodes_per_circle)
    }

    /// Every circle scaled about its own center.
    pub fn with_radius_scale(&self, k: f64) -> Result<Self> {
        let circles = self
            .circles
            .iter()
            .map(|c| Circle {
                radius: c.radius * k,
                ..*c
            })
            .collect();
        Self::new(self.unit, circles, self.nodes_per_circle)
    }

    /// Whether the slice point (u, v) lies inside the contour.
    pub fn encloses(&self, u: f64, v: f64) -> bool {
        self.circles.iter().any(|c| c.contains(u, v))
    }

    /// Smallest ratio boundary_distance / radius over all circles and all
    /// slice points of the given spheres.
    pub fn relative_margin(&self, spheres: &[SpectralSphere]) -> f64 {
        let mut worst = f64::INFINITY;
        for sp in spheres {
            for (u, v) in sp.slice_points() {
                for c in &self.circles {
                    worst = worst.min(c.boundary_distance(u, v) / c.radius);
                }
            }
        }
        worst
    }

    /// CSV rows `circle_id,theta,re,im_1,...` with the coefficients of s_k - Re(s_k).
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let dim = self.unit.algebra_dim();
        let mut header = vec!["circle_id".to_string(), "theta".into(), "re".into()];
        header.extend((1..dim).map(|k| format!("im_{k}")));
        w.write_record(&header).map_err(csv_err)?;
        for node in &self.nodes {
            let mut row = vec![node.circle.to_string(), node.theta.to_string()];
            row.extend(node.s.coeffs().iter().map(|c| c.to_string()));
            w.write_record(&row).map_err(csv_err)?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Numerical(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| Error::Numerical(e.to_string()))
    }
}

fn csv_err(e: csv::Error) -> Error {
    Error::Numerical(e.to_string())
}

fn find(parent: &mut [usize], i: usize) -> usize {
    let mut r = i;
    while parent[r] != r {
        r = parent[r];
    }
    let mut i = i;
    while parent[i] != r {
        let next = parent[i];
        parent[i] = r;
        i = next;
    }
    r
}

/// Circles of radius r around each point, merged into one enclosing circle
/// wherever two of them come closer than 3r.
fn cluster(points: &[(f64, f64)], r: f64) -> Vec<Circle> {
    let mut parent: Vec<usize> = (0..points.len()).collect();
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            let (a, b) = (points[i], points[j]);
            if (a.0 - b.0).hypot(a.1 - b.1) < 3.0 * r {
                let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                parent[ri.max(rj)] = ri.min(rj);
            }
        }
    }
    let mut roots: Vec<usize> = Vec::new();
    for i in 0..points.len() {
        let root = find(&mut parent, i);
        if !roots.contains(&root) {
            roots.push(root);
        }
    }
    roots
        .into_iter()
        .map(|root| {
            let members: Vec<(f64, f64)> = (0..points.len())
                .filter(|&i| find(&mut parent, i) == root)
                .map(|i| points[i])
                .collect();
            let (mut u0, mut u1, mut v0, mut v1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
            for &(u, v) in &members {
                u0 = u0.min(u);
                u1 = u1.max(u);
                v0 = v0.min(v);
                v1 = v1.max(v);
            }
            let (cu, cv) = ((u0 + u1) / 2.0, (v0 + v1) / 2.0);
            let spread = members
                .iter()
                .map(|&(u, v)| (u - cu).hypot(v - cv))
                .fold(0.0, f64::max);
            Circle {
                cu,
                cv,
                radius: spread + r,
            }
        })
        .collect()
}

fn circles_disjoint(circles: &[Circle]) -> bool {
    circles.iter().enumerate().all(|(i, a)| {
        circles[i + 1..]
            .iter()
            .all(|b| a.distance_to_center(b.cu, b.cv) > a.radius + b.radius)
    })
}

/// Contour around the spheres with indices `subset`: circles about u ± Iv in
/// the slice C_I, radius min(cap, gap/3) where gap is the distance to the
/// nearest excluded slice point. Nearby circles are merged; every excluded
/// point keeps a distance of at least r from each circle.
pub fn build_contour<S: Scalar>(
    spec: &Spectrum,
    subset: &[usize],
    unit: S,
    nodes_per_circle: usize,
    policy: RadiusPolicy,
) -> Result<Contour<S>> {
    if subset.is_empty() {
        return Err(Error::Precondition("empty sphere subset".into()));
    }
    if let Some(&bad) = subset.iter().find(|&&i| i >= spec.spheres.len()) {
        return Err(Error::Precondition(format!(
            "sphere index {bad} out of range ({} spheres)",
            spec.spheres.len()
        )));
    }
    let selected: Vec<(f64, f64)> = subset.iter().flat_map(|&i| spec.spheres[i].slice_points()).collect();
    let excluded: Vec<(f64, f64)> = (0..spec.spheres.len())
        .filter(|i| !subset.contains(i))
        .flat_map(|i| spec.spheres[i].slice_points())
        .collect();
    let gap = selected
        .iter()
        .flat_map(|a| excluded.iter().map(move |b| (a.0 - b.0).hypot(a.1 - b.1)))
        .fold(f64::INFINITY, f64::min);
    if gap < MIN_GAP {
        return Err(Error::NonSeparable(format!(
            "selected and excluded spheres are {gap:.3e} apart"
        )));
    }
    let mut r = policy.cap().min(gap / 3.0);
    while r >= MIN_GAP / 3.0 {
        let circles = cluster(&selected, r);
        let clear = circles.iter().all(|c| {
            excluded
                .iter()
                .all(|&(u, v)| c.distance_to_center(u, v) >= c.radius + r)
        });
        if clear && circles_disjoint(&circles) {
            return Contour::new(unit, circles, nodes_per_circle);
        }
        r /= 2.0;
    }
    Err(Error::NonSeparable(
        "no circle radius separates the selected spheres from the rest".into(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypercomplex::{ImaginaryUnit, Multivector, Paravector};
    use crate::spectrum::SpectrumSource;

    fn spec(points: &[(f64, f64)]) -> Spectrum {
        Spectrum {
            source: SpectrumSource::S,
            spheres: points.iter().map(|&(u, v)| SpectralSphere::new(u, v)).collect(),
        }
    }

    fn e1() -> Multivector {
        ImaginaryUnit::generator(2, 1).unwrap().to_multivector()
    }

    #[test]
    fn single_real_point() {
        let c = build_contour(&spec(&[(0.0, 0.0)]), &[0], e1(), 16, RadiusPolicy::Default).unwrap();
        assert_eq!(c.circles(), &[Circle { cu: 0.0, cv: 0.0, radius: 0.25 }]);
        assert_eq!(c.len(), 16);
    }

    #[test]
    fn excludes_the_other_point() {
        let s = spec(&[(1.0, 0.0), (-1.0, 0.0)]);
        let c = build_contour(&s, &[0], e1(), 16, RadiusPolicy::Cap(10.0)).unwrap();
        assert!(c.max_radius() <= 2.0 / 3.0);
        assert!(c.encloses(1.0, 0.0) && !c.encloses(-1.0, 0.0));
    }

    #[test]
    fn residue_of_inverse() {
        // (1/2π)∮ s^{-1} ds_I = Σ_k s_k^{-1} w_k = 1
        let c = build_contour(&spec(&[(0.0, 0.0)]), &[0], e1(), 64, RadiusPolicy::Default).unwrap();
        let total = c
            .nodes()
            .iter()
            .fold(Multivector::zero(2).unwrap(), |acc, n| acc + n.s.inverse().unwrap() * n.w);
        assert!(total.dist_max(&Multivector::scalar(2, 1.0).unwrap()) < 1e-12);
    }

    #[test]
    fn conjugate_pair_gets_two_circles() {
        let s = spec(&[(0.5, 1.0), (0.0, 0.0)]);
        let c = build_contour(&s, &[0], e1(), 8, RadiusPolicy::Default).unwrap();
        assert_eq!(c.circles().len(), 2);
        assert!(c.encloses(0.5, 1.0) && c.encloses(0.5, -1.0) && !c.encloses(0.0, 0.0));
    }

    #[test]
    fn close_spheres_merge() {
        let s = spec(&[(0.0, 0.05), (0.3, 0.0), (3.0, 0.0)]);
        let c = build_contour(&s, &[0, 1], e1(), 8, RadiusPolicy::Default).unwrap();
        assert_eq!(c.circles().len(), 1);
        assert_eq!(c.circles()[0].cv, 0.0);
        for (u, v) in [(0.0, 0.05), (0.0, -0.05), (0.3, 0.0)] {
            assert!(c.encloses(u, v));
        }
        assert!(!c.encloses(3.0, 0.0));
    }

    #[test]
    fn overlapping_spheres_rejected() {
        let s = spec(&[(0.0, 0.0), (1e-8, 0.0)]);
        assert!(matches!(
            build_contour(&s, &[0], e1(), 8, RadiusPolicy::Default),
            Err(Error::NonSeparable(_))
        ));
        assert!(build_contour(&s, &[], e1(), 8, RadiusPolicy::Default).is_err());
        assert!(build_contour(&s, &[5], e1(), 8, RadiusPolicy::Default).is_err());
    }

    #[test]
    fn nodes_lie_on_the_slice() {
        let unit = ImaginaryUnit::normalized(&[1.0, 1.0]).unwrap().to_multivector();
        let c = Contour::circle(unit, 0.5, 2.0, 32).unwrap();
        for n in c.nodes() {
            let p = Paravector::from_multivector(&n.s).unwrap();
            assert!((p.parts()[1] - p.parts()[2]).abs() < 1e-15);
            assert!(((n.s - n.s.real_like(0.5)).norm() - 2.0).abs() < 1e-14);
        }
        assert!(Contour::circle(Multivector::scalar(2, 1.0).unwrap(), 0.0, 1.0, 8).is_err());
    }

    #[test]
    fn csv_dump() {
        let c = Contour::circle(e1(), 0.0, 1.0, 4).unwrap();
        let csv = c.to_csv().unwrap();
        let lines: Vec<_> = csv.lines().collect();
        assert_eq!(lines[0], "circle_id,theta,re,im_1,im_2,im_3");
        assert_eq!(lines.len(), 5);
        assert!(lines[1].starts_with("0,0,1,0"));
    }
}
