//! S-spectrum and F-spectrum as finite sets of spheres (u, v), a singular-value
//! cross-check, and integration contours around selected spheres.
//!
//! Q_s(T) = q(rep(T)) with q(x) = (x - (u+iv))(x - (u-iv)), so Q_s(T) is singular
//! exactly when u ± iv is an eigenvalue of the real matrix rep(T). The
//! S-spectrum is therefore read off the complex eigenvalues of rep(T).

mod contour;
mod scan;

pub use contour::{build_contour, Circle, Contour, ContourNode, RadiusPolicy, MIN_GAP};
pub use scan::{grid_scan, GridMinimum};

use crate::error::{Error, Result};
use crate::linalg;
use crate::operator::{ModuleOperator, ParavectorOperator};
use crate::hypercomplex::Scalar;
use nalgebra::{Complex, DMatrix, Schur};
use serde::{Deserialize, Serialize};

/// Eigenvalues closer than this in (u, v) are reported as one sphere.
pub const MERGE_TOL: f64 = 1e-8;

const SCHUR_MAX_ITER: usize = 100_000;

/// The sphere [u + Iv], all I ∈ S. v = 0 is a real spectral point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectralSphere {
    pub u: f64,
    pub v: f64,
    #[serde(rename = "mult")]
    pub multiplicity: usize,
}

impl SpectralSphere {
    pub fn new(u: f64, v: f64) -> Self {
        Self { u, v, multiplicity: 1 }
    }

    /// Max-coordinate distance in the (u, v) half-plane.
    pub fn distance(&self, other: &Self) -> f64 {
        (self.u - other.u).abs().max((self.v - other.v).abs())
    }

    pub fn modulus(&self) -> f64 {
        self.u.hypot(self.v)
    }

    /// Slice points u + iv and u - iv in C_I coordinates (one point if v = 0).
    pub fn slice_points(&self) -> Vec<(f64, f64)> {
        if self.v == 0.0 {
            vec![(self.u, 0.0)]
        } else {
            vec![(self.u, self.v), (self.u, -self.v)]
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SpectrumSource {
    S,
    F,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Spectrum {
    pub source: SpectrumSource,
    pub spheres: Vec<SpectralSphere>,
}

impl Spectrum {
    /// Largest sphere modulus √(u² + v²).
    pub fn radius(&self) -> f64 {
        self.spheres.iter().map(SpectralSphere::modulus).fold(0.0, f64::max)
    }

    /// Distance from (u, v) to the nearest sphere, measured in one slice
    /// (points u ± iv of every sphere).
    pub fn distance_to(&self, u: f64, v: f64) -> f64 {
        self.spheres
            .iter()
            .flat_map(|s| s.slice_points())
            .map(|(a, b)| (a - u).hypot(b - v))
            .fold(f64::INFINITY, f64::min)
    }

    /// Largest distance from any sphere of `self` to the nearest sphere of
    /// `other`, in both directions.
    pub fn mismatch(&self, other: &Self) -> f64 {
        let one_way = |a: &Self, b: &Self| {
            a.spheres
                .iter()
                .map(|x| b.spheres.iter().map(|y| x.distance(y)).fold(f64::INFINITY, f64::min))
                .fold(0.0, f64::max)
        };
        one_way(self, other).max(one_way(other, self))
    }
}

/// Groups complex eigenvalues a + bi into spheres (a, |b|), merging within
/// [`MERGE_TOL`] and summing multiplicities. Output is sorted by (u, v).
pub fn spheres_from_eigenvalues(eigs: &[Complex<f64>]) -> Vec<SpectralSphere> {
    let mut pts: Vec<(f64, f64)> = eigs
        .iter()
        .map(|z| {
            let v = z.im.abs();
            (z.re, if v < MERGE_TOL { 0.0 } else { v })
        })
        .collect();
    pts.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
    let mut groups: Vec<(f64, f64, usize)> = Vec::new();
    for (u, v) in pts {
        // sums divided by counts give the cluster centroid
        let hit = groups
            .iter_mut()
            .find(|(su, sv, k)| (su / *k as f64 - u).abs() <= MERGE_TOL && (sv / *k as f64 - v).abs() <= MERGE_TOL);
        match hit {
            Some(g) => {
                g.0 += u;
                g.1 += v;
                g.2 += 1;
            }
            None => groups.push((u, v, 1)),
        }
    }
    let mut out: Vec<SpectralSphere> = groups
        .into_iter()
        .map(|(su, sv, k)| SpectralSphere {
            u: su / k as f64,
            v: sv / k as f64,
            multiplicity: k,
        })
        .collect();
    out.sort_by(|a, b| a.u.total_cmp(&b.u).then(a.v.total_cmp(&b.v)));
    out
}

fn eigenvalues(m: &DMatrix<f64>) -> Result<Vec<Complex<f64>>> {
    let schur = Schur::try_new(m.clone(), f64::EPSILON, SCHUR_MAX_ITER)
        .ok_or_else(|| Error::Numerical("Schur iteration did not converge".into()))?;
    Ok(schur.complex_eigenvalues().iter().copied().collect())
}

/// σ_S from the eigenvalues of the real representation matrix. Works for
/// Clifford and quaternionic operators alike.
pub fn s_spectrum_of<S: Scalar>(t: &ModuleOperator<S>) -> Result<Spectrum> {
    Ok(Spectrum {
        source: SpectrumSource::S,
        spheres: spheres_from_eigenvalues(&eigenvalues(t.rep().matrix())?),
    })
}

pub fn s_spectrum(t: &ParavectorOperator) -> Result<Spectrum> {
    s_spectrum_of(&t.module())
}

/// σ_F for commuting components: s² - 2sT0 + TT̄ is singular exactly at the
/// eigenvalues of the companion matrix [[0, I], [-TT̄, 2T0]], TT̄ = Σ_j T_j².
pub fn f_spectrum(t: &ParavectorOperator) -> Result<Spectrum> {
    if !t.is_commuting() {
        return Err(Error::Precondition("F-spectrum needs commuting components".into()));
    }
    let d = t.d();
    let comps = t.components();
    let tt: DMatrix<f64> = comps.iter().map(|c| c * c).sum();
    let mut comp = DMatrix::zeros(2 * d, 2 * d);
    comp.view_mut((0, d), (d, d)).fill_with_identity();
    comp.view_mut((d, 0), (d, d)).copy_from(&(-tt));
    comp.view_mut((d, d), (d, d)).copy_from(&(&comps[0] * 2.0));
    Ok(Spectrum {
        source: SpectrumSource::F,
        spheres: spheres_from_eigenvalues(&eigenvalues(&comp)?),
    })
}

/// Smallest singular value of rep(T)² - 2u·rep(T) + (u² + v²)I.
pub fn q_singularity_margin<S: Scalar>(t: &ModuleOperator<S>, u: f64, v: f64) -> Result<f64> {
    let n = t.dim();
    let m = t.rep_sq().matrix() - t.rep().matrix() * (2.0 * u) + DMatrix::identity(n, n) * (u * u + v * v);
    linalg::min_singular_value(&m)
}
