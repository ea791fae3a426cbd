//! Slice hyperholomorphic functions: power series with hypercomplex
//! coefficients on one side, and intrinsic functions evaluated through a
//! holomorphic stem f(u + Iv) = α(u, v) + I β(u, v).

use crate::error::{Error, Result};
use crate::hypercomplex::{Multivector, Scalar};
use crate::operator::Side;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Minimal distance to a pole of a rational function.
pub const POLE_GUARD: f64 = 1e-6;

/// Central-difference step for the slice Cauchy-Riemann check.
pub const FD_STEP: f64 = 1e-5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FunctionKind {
    Left,
    Right,
    Intrinsic,
}

/// Functions with real Taylor coefficients; they map every slice into itself.
#[derive(Debug, Clone, PartialEq)]
pub enum Intrinsic {
    Exp,
    Sin,
    Cos,
    /// Σ c_m x^m
    Polynomial(Vec<f64>),
    /// scale · Π(x - z_i) / Π(x - p_j)
    Rational {
        scale: f64,
        zeros: Vec<f64>,
        poles: Vec<f64>,
    },
}

impl Intrinsic {
    pub fn stem(&self, z: Complex64) -> Result<Complex64> {
        Ok(match self {
            Intrinsic::Exp => z.exp(),
            Intrinsic::Sin => z.sin(),
            Intrinsic::Cos => z.cos(),
            Intrinsic::Polynomial(c) => c.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &a| acc * z + a),
            Intrinsic::Rational { scale, zeros, poles } => {
                let mut num = Complex64::new(*scale, 0.0);
                for &r in zeros {
                    num *= z - r;
                }
                let mut den = Complex64::new(1.0, 0.0);
                for &p in poles {
                    let f = z - p;
                    if f.norm() < POLE_GUARD {
                        return Err(Error::Domain(format!("{z} is within {POLE_GUARD:e} of the pole {p}")));
                    }
                    den *= f;
                }
                num / den
            }
        })
    }

    pub fn poles(&self) -> &[f64] {
        match self {
            Intrinsic::Rational { poles, .. } => poles,
            _ => &[],
        }
    }

    /// Evaluates on the slice of x: x = u + I_x v ↦ α + I_x β.
    pub fn eval<S: Scalar>(&self, x: &S) -> Result<S> {
        if !x.is_paravector() {
            return Err(Error::NotParavector(x.norm()));
        }
        let w = self.stem(Complex64::new(x.re(), x.imag_norm()))?;
        Ok(match x.imag_unit() {
            Some(i) => x.real_like(w.re) + i.scale(w.im),
            None => x.real_like(w.re),
        })
    }
}

/// A left, right or intrinsic slice hyperholomorphic function.
#[derive(Debug, Clone, PartialEq)]
pub enum SliceFunction<S: Scalar> {
    Intrinsic(Intrinsic),
    /// Σ x^m a_m
    Left(Vec<S>),
    /// Σ a_m x^m
    Right(Vec<S>),
    /// x ↦ f(x)·g(x) with f intrinsic and g left (or intrinsic).
    Product(Intrinsic, Box<SliceFunction<S>>),
}

impl<S: Scalar> SliceFunction<S> {
    pub fn exp() -> Self {
        Self::Intrinsic(Intrinsic::Exp)
    }

    /// Real polynomial Σ c_m x^m.
    pub fn polynomial(coeffs: &[f64]) -> Self {
        Self::Intrinsic(Intrinsic::Polynomial(coeffs.to_vec()))
    }

    pub fn kind(&self) -> FunctionKind {
        match self {
            Self::Intrinsic(_) => FunctionKind::Intrinsic,
            Self::Left(_) => FunctionKind::Left,
            Self::Right(_) => FunctionKind::Right,
            Self::Product(_, g) => match g.kind() {
                FunctionKind::Intrinsic => FunctionKind::Intrinsic,
                _ => FunctionKind::Left,
            },
        }
    }

    /// Whether the function may be integrated against the `side` resolvent.
    pub fn fits_side(&self, side: Side) -> bool {
        matches!(
            (self.kind(), side),
            (FunctionKind::Intrinsic, _) | (FunctionKind::Left, Side::Left) | (FunctionKind::Right, Side::Right)
        )
    }

    /// Real poles of every rational factor.
    pub fn poles(&self) -> Vec<f64> {
        match self {
            Self::Intrinsic(f) => f.poles().to_vec(),
            Self::Left(_) | Self::Right(_) => Vec::new(),
            Self::Product(f, g) => {
                let mut p = f.poles().to_vec();
                p.extend(g.poles());
                p
            }
        }
    }

    pub fn eval(&self, x: &S) -> Result<S> {
        match self {
            Self::Intrinsic(f) => f.eval(x),
            Self::Left(a) => {
                // a_0 + x(a_1 + x(a_2 + ...))
                Ok(a.iter().rev().fold(x.zero_like(), |acc, &c| *x * acc + c))
            }
            Self::Right(a) => Ok(a.iter().rev().fold(x.zero_like(), |acc, &c| acc * *x + c)),
            Self::Product(f, g) => Ok(f.eval(x)? * g.eval(x)?),
        }
    }

    /// Evaluates f(u + Iv) from the two values f(u ± Jv) only.
    pub fn representation_formula_eval(&self, x: &S, j: &S) -> Result<S> {
        let v = x.imag_norm();
        let Some(i) = x.imag_unit() else {
            return self.eval(x);
        };
        let (alpha, beta) = self.stem_pair(x.re(), v, j)?;
        Ok(match self.kind() {
            FunctionKind::Right => alpha + beta * i,
            _ => alpha + i * beta,
        })
    }

    /// (α, β) with f(u + Iv) = α + Iβ (left and intrinsic) or α + βI (right),
    /// reconstructed from the slice C_J.
    pub fn stem_pair(&self, u: f64, v: f64, j: &S) -> Result<(S, S)> {
        let plus = self.eval(&(j.real_like(u) + j.scale(v)))?;
        let minus = self.eval(&(j.real_like(u) - j.scale(v)))?;
        let alpha = (plus + minus).scale(0.5);
        let beta = match self.kind() {
            FunctionKind::Right => ((minus - plus) * *j).scale(0.5),
            _ => (*j * (minus - plus)).scale(0.5),
        };
        Ok((alpha, beta))
    }

    /// Slice Cauchy-Riemann residual on C_I; see [`stem_residual`].
    pub fn stem_residual(&self, unit: &S, samples: &[(f64, f64)]) -> Result<f64> {
        for &(u, v) in samples {
            for p in self.poles() {
                if (u - p).hypot(v) < 2.0 * FD_STEP + POLE_GUARD {
                    return Err(Error::Domain(format!("sample ({u}, {v}) too close to the pole {p}")));
                }
            }
        }
        let side = match self.kind() {
            FunctionKind::Right => Side::Right,
            _ => Side::Left,
        };
        stem_residual(|x| self.eval(x), unit, samples, side)
    }
}

/// max over samples of ‖½(∂_u f + I ∂_v f)‖ (left) or ‖½(∂_u f + ∂_v f I)‖
/// (right) for x = u + Iv, by central differences with step [`FD_STEP`].
pub fn stem_residual<S, F>(f: F, unit: &S, samples: &[(f64, f64)], side: Side) -> Result<f64>
where
    S: Scalar,
    F: Fn(&S) -> Result<S>,
{
    let h = FD_STEP;
    let at = |u: f64, v: f64| f(&(unit.real_like(u) + unit.scale(v)));
    let mut worst: f64 = 0.0;
    for &(u, v) in samples {
        let du = (at(u + h, v)? - at(u - h, v)?).scale(0.5 / h);
        let dv = (at(u, v + h)? - at(u, v - h)?).scale(0.5 / h);
        let cr = match side {
            Side::Left => du + *unit * dv,
            Side::Right => du + dv * *unit,
        };
        worst = worst.max(cr.scale(0.5).norm());
    }
    Ok(worst)
}

/// x ↦ f(x)g(x) for f intrinsic. Polynomial factors are multiplied out.
pub fn pointwise_product<S: Scalar>(f: &SliceFunction<S>, g: &SliceFunction<S>) -> Result<SliceFunction<S>> {
    let SliceFunction::Intrinsic(fi) = f else {
        return Err(Error::Precondition("the first factor must be intrinsic".into()));
    };
    if g.kind() == FunctionKind::Right {
        return Err(Error::Precondition("the second factor must be left slice hyperholomorphic".into()));
    }
    Ok(match (fi, g) {
        (Intrinsic::Polynomial(c), SliceFunction::Left(a)) if !a.is_empty() && !c.is_empty() => {
            let zero = a[0].zero_like();
            let mut out = vec![zero; c.len() + a.len() - 1];
            for (i, &ci) in c.iter().enumerate() {
                for (j, &aj) in a.iter().enumerate() {
                    out[i + j] = out[i + j] + aj.scale(ci);
                }
            }
            SliceFunction::Left(out)
        }
        (Intrinsic::Polynomial(c), SliceFunction::Intrinsic(Intrinsic::Polynomial(b))) if !b.is_empty() && !c.is_empty() => {
            let mut out = vec![0.0; c.len() + b.len() - 1];
            for (i, &ci) in c.iter().enumerate() {
                for (j, &bj) in b.iter().enumerate() {
                    out[i + j] += ci * bj;
                }
            }
            SliceFunction::polynomial(&out)
        }
        _ => SliceFunction::Product(fi.clone(), Box::new(g.clone())),
    })
}

/// Function descriptor as read from JSON.
///
/// `{"kind": "left", "series": [[...], ...]}`, `{"named": "exp"}`,
/// `{"named": "polynomial", "coeffs": [...]}`,
/// `{"named": "rational", "scale": 1, "zeros": [], "poles": [5]}`,
/// `{"product": [f, g]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum FunctionSpec {
    Series {
        kind: FunctionKind,
        series: Vec<Vec<f64>>,
    },
    Named {
        named: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        coeffs: Option<Vec<f64>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        scale: Option<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        zeros: Option<Vec<f64>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        poles: Option<Vec<f64>>,
    },
    Product {
        product: Box<(FunctionSpec, FunctionSpec)>,
    },
}

impl FunctionSpec {
    pub fn named(name: &str) -> Self {
        Self::Named {
            named: name.into(),
            coeffs: None,
            scale: None,
            zeros: None,
            poles: None,
        }
    }

    /// Builds the function over R_n.
    pub fn build(&self, n: usize) -> Result<SliceFunction<Multivector>> {
        match self {
            Self::Series { kind, series } => {
                let coeffs = series
                    .iter()
                    .map(|c| {
                        let m = Multivector::from_coeffs(c)?;
                        if m.n() != n {
                            return Err(Error::DimensionMismatch { left: 1 << n, right: c.len() });
                        }
                        Ok(m)
                    })
                    .collect::<Result<Vec<_>>>()?;
                match kind {
                    FunctionKind::Left => Ok(SliceFunction::Left(coeffs)),
                    FunctionKind::Right => Ok(SliceFunction::Right(coeffs)),
                    FunctionKind::Intrinsic => {
                        let real: Option<Vec<f64>> = coeffs
                            .iter()
                            .map(|c| (c.coeffs()[1..].iter().all(|&x| x == 0.0)).then(|| c.re()))
                            .collect();
                        real.map(|c| SliceFunction::polynomial(&c))
                            .ok_or_else(|| Error::Precondition("intrinsic series needs real coefficients".into()))
                    }
                }
            }
            Self::Named {
                named,
                coeffs,
                scale,
                zeros,
                poles,
            } => {
                let f = match named.as_str() {
                    "exp" => Intrinsic::Exp,
                    "sin" => Intrinsic::Sin,
                    "cos" => Intrinsic::Cos,
                    "one" => Intrinsic::Polynomial(vec![1.0]),
                    "identity" => Intrinsic::Polynomial(vec![0.0, 1.0]),
                    "polynomial" => Intrinsic::Polynomial(
                        coeffs
                            .clone()
                            .ok_or_else(|| Error::Precondition("polynomial needs \"coeffs\"".into()))?,
                    ),
                    "rational" => Intrinsic::Rational {
                        scale: scale.unwrap_or(1.0),
                        zeros: zeros.clone().unwrap_or_default(),
                        poles: poles.clone().unwrap_or_default(),
                    },
                    other => return Err(Error::Precondition(format!("unknown function \"{other}\""))),
                };
                Ok(SliceFunction::Intrinsic(f))
            }
            Self::Product { product } => pointwise_product(&product.0.build(n)?, &product.1.build(n)?),
        }
    }
}
