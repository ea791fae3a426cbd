use super::blade::MAX_N;
use super::{Multivector, Scalar};
use crate::error::{Error, Result};
use crate::spectrum::SpectralSphere;
use serde::{Deserialize, Serialize};

/// A point x0 + x1 e1 + ... + xn en of R^{n+1}.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Paravector {
    n: usize,
    parts: [f64; MAX_N + 1],
}

impl Paravector {
    pub fn new(parts: &[f64]) -> Result<Self> {
        let n = parts.len().wrapping_sub(1);
        if !(1..=MAX_N).contains(&n) {
            return Err(Error::UnsupportedDimension(n));
        }
        let mut p = [0.0; MAX_N + 1];
        p[..=n].copy_from_slice(parts);
        Ok(Self { n, parts: p })
    }

    pub fn real(n: usize, x: f64) -> Result<Self> {
        let mut parts = vec![0.0; n + 1];
        parts[0] = x;
        Self::new(&parts)
    }

    /// Paravector part of a multivector; fails if grade ≥ 2 does not vanish.
    pub fn from_multivector(m: &Multivector) -> Result<Self> {
        if !m.is_paravector() {
            return Err(Error::NotParavector(m.higher_grade_norm()));
        }
        Self::new(m.paravector_parts())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn parts(&self) -> &[f64] {
        &self.parts[..=self.n]
    }

    pub fn re(&self) -> f64 {
        self.parts[0]
    }

    /// |x̲|
    pub fn imag_norm(&self) -> f64 {
        self.parts[1..=self.n].iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    /// |x|² = x0² + ... + xn²
    pub fn norm_sq(&self) -> f64 {
        self.parts().iter().map(|x| x * x).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    /// x̄ = x0 - x̲
    pub fn conjugate(&self) -> Self {
        let mut out = *self;
        for x in &mut out.parts[1..=self.n] {
            *x = -*x;
        }
        out
    }

    /// x̄ / |x|²
    pub fn inverse(&self) -> Result<Self> {
        let r2 = self.norm_sq();
        if r2 == 0.0 {
            return Err(Error::SingularScalar("inverse of zero paravector".into()));
        }
        let mut out = self.conjugate();
        for x in &mut out.parts[..=self.n] {
            *x /= r2;
        }
        Ok(out)
    }

    /// I_x = x̲/|x̲|, or `None` for real points.
    pub fn imaginary_unit(&self) -> Option<ImaginaryUnit> {
        let v = self.imag_norm();
        (v > 0.0).then(|| ImaginaryUnit {
            n: self.n,
            dir: {
                let mut d = [0.0; MAX_N];
                for (k, x) in self.parts[1..=self.n].iter().enumerate() {
                    d[k] = x / v;
                }
                d
            },
        })
    }

    pub fn to_multivector(&self) -> Multivector {
        Multivector::paravector(self.n, self.parts()).expect("paravector dimension already validated")
    }
}

impl From<Paravector> for Multivector {
    fn from(p: Paravector) -> Self {
        p.to_multivector()
    }
}

impl Serialize for Paravector {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.parts().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Paravector {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = Vec::<f64>::deserialize(d)?;
        Paravector::new(&v).map_err(serde::de::Error::custom)
    }
}

/// An element I of the unit sphere S of purely imaginary paravectors (I² = -1).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ImaginaryUnit {
    n: usize,
    dir: [f64; MAX_N],
}

impl ImaginaryUnit {
    /// Accepts a direction (x1, ..., xn) whose Euclidean norm is 1 within 1e-12.
    pub fn new(dir: &[f64]) -> Result<Self> {
        let n = dir.len();
        if !(1..=MAX_N).contains(&n) {
            return Err(Error::UnsupportedDimension(n));
        }
        let norm = dir.iter().map(|x| x * x).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidUnit(format!("direction has norm {norm}")));
        }
        let mut d = [0.0; MAX_N];
        d[..n].copy_from_slice(dir);
        Ok(Self { n, dir: d })
    }

    /// Normalizes an arbitrary nonzero direction.
    pub fn normalized(dir: &[f64]) -> Result<Self> {
        let norm = dir.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::InvalidUnit("zero direction".into()));
        }
        let unit: Vec<f64> = dir.iter().map(|x| x / norm).collect();
        Self::new(&unit)
    }

    /// The generator e_i as an imaginary unit.
    pub fn generator(n: usize, i: usize) -> Result<Self> {
        if i == 0 || i > n {
            return Err(Error::InvalidUnit(format!("no generator e{i} in R_{n}")));
        }
        let mut dir = vec![0.0; n];
        dir[i - 1] = 1.0;
        Self::new(&dir)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn direction(&self) -> &[f64] {
        &self.dir[..self.n]
    }

    pub fn to_paravector(&self) -> Paravector {
        let mut parts = vec![0.0; self.n + 1];
        parts[1..].copy_from_slice(self.direction());
        Paravector::new(&parts).expect("validated dimension")
    }

    pub fn to_multivector(&self) -> Multivector {
        self.to_paravector().to_multivector()
    }
}

/// The sphere [x] = {x0 + I|x̲| : I ∈ S} containing x.
pub fn sphere_of(x: &Paravector) -> SpectralSphere {
    SpectralSphere::new(x.re(), x.imag_norm())
}

/// u + I v on the slice C_I.
pub fn slice_point(u: f64, v: f64, unit: &ImaginaryUnit) -> Result<Paravector> {
    if v < 0.0 {
        return Err(Error::Precondition(format!("slice_point needs v >= 0, got {v}")));
    }
    let norm = unit.direction().iter().map(|x| x * x).sum::<f64>().sqrt();
    if (norm - 1.0).abs() > 1e-12 {
        return Err(Error::InvalidUnit(format!("direction has norm {norm}")));
    }
    let mut parts = vec![u];
    parts.extend(unit.direction().iter().map(|x| v * x));
    Paravector::new(&parts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn pv(p: &[f64]) -> Paravector {
        Paravector::new(p).unwrap()
    }

    #[test]
    fn conjugate_examples() {
        assert_eq!(pv(&[1.0, 1.0]).conjugate(), pv(&[1.0, -1.0]));
        assert_eq!(pv(&[2.0, 0.0]).conjugate(), pv(&[2.0, 0.0]));
    }

    #[test]
    fn inverse_examples() {
        assert_eq!(pv(&[2.0, 0.0]).inverse().unwrap(), pv(&[0.5, 0.0]));
        assert_eq!(pv(&[1.0, 1.0]).inverse().unwrap(), pv(&[0.5, -0.5]));
        assert_eq!(pv(&[0.0, 1.0]).inverse().unwrap(), pv(&[0.0, -1.0]));
        assert!(matches!(
            pv(&[0.0, 0.0, 0.0]).inverse(),
            Err(Error::SingularScalar(_))
        ));
    }

    #[test]
    fn sphere_examples() {
        assert_eq!(sphere_of(&pv(&[3.0, 0.0])), SpectralSphere::new(3.0, 0.0));
        assert_eq!(sphere_of(&pv(&[1.0, 2.0])), SpectralSphere::new(1.0, 2.0));
        let a = sphere_of(&pv(&[1.0, 1.0, 1.0]));
        let b = sphere_of(&pv(&[1.0, 2f64.sqrt(), 0.0]));
        assert!((a.u - b.u).abs() < 1e-15 && (a.v - b.v).abs() < 1e-15);
    }

    #[test]
    fn slice_point_examples() {
        let e1 = ImaginaryUnit::generator(1, 1).unwrap();
        assert_eq!(slice_point(0.0, 1.0, &e1).unwrap(), pv(&[0.0, 1.0]));
        let i = ImaginaryUnit::normalized(&[1.0, 1.0]).unwrap();
        assert_eq!(slice_point(2.0, 0.0, &i).unwrap(), pv(&[2.0, 0.0, 0.0]));
        let x = slice_point(1.0, 2.0, &i).unwrap();
        let r2 = 2f64.sqrt();
        assert!((x.parts()[1] - r2).abs() < 1e-15 && (x.parts()[2] - r2).abs() < 1e-15);
        assert!(slice_point(1.0, -1.0, &i).is_err());
        assert!(ImaginaryUnit::new(&[1.0, 1.0]).is_err());
    }

    #[test]
    fn unit_squares_to_minus_one() {
        let i = ImaginaryUnit::normalized(&[0.3, -1.2, 0.7]).unwrap().to_multivector();
        let sq = i * i;
        assert!((sq + i.one_like()).norm() <= 1e-12);
    }

    proptest! {
        #[test]
        fn x_times_conjugate_is_norm(parts in prop::collection::vec(-3.0..3.0f64, 2..=6)) {
            let x = pv(&parts);
            let prod = x.to_multivector() * x.conjugate().to_multivector();
            let expect = x.to_multivector().real_like(x.norm_sq());
            prop_assert!(prod.dist_max(&expect) <= 1e-12 * x.norm_sq().max(1.0));
        }

        #[test]
        fn conjugation_properties(parts in prop::collection::vec(-3.0..3.0f64, 2..=6)) {
            let x = pv(&parts);
            prop_assert_eq!(x.conjugate().conjugate(), x);
            prop_assert_eq!(sphere_of(&x), sphere_of(&x.conjugate()));
            // Clifford conjugation agrees with paravector conjugation
            prop_assert_eq!(x.to_multivector().conj(), x.conjugate().to_multivector());
        }

        #[test]
        fn paravector_quadratic_identity(parts in prop::collection::vec(-3.0..3.0f64, 2..=6)) {
            // s² - 2 Re(s) s + |s|² = 0
            let s = pv(&parts).to_multivector();
            let q = s * s - s.scale(2.0 * s.re()) + s.real_like(s.norm_sq());
            prop_assert!(q.norm() <= 1e-12 * s.norm_sq().max(1.0));
        }

        #[test]
        fn slice_point_lies_on_sphere(u in -3.0..3.0f64, v in 0.0..3.0f64, dir in prop::collection::vec(-1.0..1.0f64, 3)) {
            prop_assume!(dir.iter().map(|x| x * x).sum::<f64>() > 1e-6);
            let i = ImaginaryUnit::normalized(&dir).unwrap();
            let s = sphere_of(&slice_point(u, v, &i).unwrap());
            prop_assert!((s.u - u).abs() < 1e-14 && (s.v - v).abs() < 1e-12);
        }
    }
}
