//! Seeded residual suite. Every identity is evaluated once per instance and
//! reported as the worst of its samples, measured against its tolerance.

use crate::calculus::{
    func_calc, laplace_resolvent, left_right_agreement, lemma_integral, product_rule_residual, riesz_projector,
    LaplaceOptions,
};
use crate::error::{Error, Result};
use crate::hypercomplex::{exp_paravector, ImaginaryUnit, Multivector, Paravector, Quaternion, Scalar};
use crate::operator::{
    finite_sum_residual, kernel_form_residuals, new_resolvent_forms_gap, new_resolvent_residual,
    pseudo_commutation_residual, resolvent_equation_residuals, series_residual, NewEquationForm,
};
use crate::operator::random::{self, box_point, InstanceRng};
use crate::operator::{s_resolvent, s_resolvent_with_cond, sc_resolvent, ModuleOperator, OperatorMatrix, ParavectorOperator, Side};
use crate::par::{self, Execution};
use crate::slicefun::SliceFunction;
use crate::spectrum::{f_spectrum, grid_scan, s_spectrum, s_spectrum_of, Contour, RadiusPolicy, Spectrum};
use rand::Rng;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, HashMap};

pub const DEFAULT_NODES: usize = 512;
const SPECTRAL_MARGIN: f64 = 0.1;
const SAMPLES: usize = 5;
const KERNEL_SAMPLES: usize = 50;
const SERIES_TERMS: usize = 100;
const FINITE_SUM_TERMS: usize = 8;
const GRID_RESOLUTION: usize = 50;
const GRID_ZERO: f64 = 1e-6;
const MAX_DRAWS: usize = 10_000;

/// What the base tolerance multiplies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scaling {
    Absolute,
    /// Condition number of the pseudo-resolvents involved.
    Cond,
    /// Sum of the quadrature error estimates of the compared values.
    Estimate,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Identity {
    pub name: &'static str,
    pub criterion: u8,
    pub tol: f64,
    pub scaling: Scaling,
}

const fn id(name: &'static str, criterion: u8, tol: f64, scaling: Scaling) -> Identity {
    Identity {
        name,
        criterion,
        tol,
        scaling,
    }
}

use Scaling::{Absolute, Cond, Estimate};

/// Identities in report order.
pub const IDENTITIES: &[Identity] = &[
    id("resolvent_left", 1, 1e-9, Cond),
    id("resolvent_right", 1, 1e-9, Cond),
    id("quaternion_resolvent_left", 1, 1e-9, Cond),
    id("quaternion_resolvent_right", 1, 1e-9, Cond),
    id("new_equation_i", 2, 1e-9, Cond),
    id("new_equation_ii", 2, 1e-9, Cond),
    id("new_equation_forms", 2, 1e-9, Cond),
    id("quaternion_new_equation_i", 2, 1e-9, Cond),
    id("quaternion_new_equation_ii", 2, 1e-9, Cond),
    id("quaternion_new_equation_forms", 2, 1e-9, Cond),
    id("kernel_forms", 3, 1e-11, Absolute),
    id("series", 4, 1e-10, Absolute),
    id("finite_sum", 4, 1e-11, Absolute),
    id("pseudo_commutation", 5, 1e-10, Cond),
    id("quaternion_pseudo_commutation", 5, 1e-10, Cond),
    id("norm_bound", 6, 1e-9, Absolute),
    id("grid_scan", 6, 1e-4, Absolute),
    id("sf_spectrum", 6, 1e-8, Absolute),
    id("sc_resolvent", 6, 1e-9, Cond),
    id("calc_identity", 7, 1e-10, Absolute),
    id("calc_polynomial", 7, 1e-8, Absolute),
    id("calc_exp", 7, 1e-7, Absolute),
    id("left_right", 7, 1e-7, Absolute),
    id("slice_independence", 7, 2.0, Estimate),
    id("radius_independence", 7, 2.0, Estimate),
    id("riesz_idempotent", 8, 1e-8, Absolute),
    id("riesz_commute", 8, 1e-8, Absolute),
    id("riesz_sum", 8, 1e-8, Absolute),
    id("riesz_part", 8, 1e-8, Absolute),
    id("lemma_b", 9, 1e-9, Absolute),
    id("lemma_square", 9, 1e-9, Absolute),
    id("lemma_exp", 9, 1e-9, Absolute),
    id("product_x_x", 10, 1e-7, Absolute),
    id("product_exp_x_plus_e1", 10, 1e-7, Absolute),
    id("product_square_x_e2", 10, 1e-7, Absolute),
    id("laplace_left", 11, 1e-6, Absolute),
    id("laplace_right", 11, 1e-6, Absolute),
    id("quaternion_laplace_left", 11, 1e-6, Absolute),
    id("quaternion_laplace_right", 11, 1e-6, Absolute),
];

pub fn identity(name: &str) -> Option<&'static Identity> {
    IDENTITIES.iter().find(|i| i.name == name)
}

/// (n, d) of the instance with this seed; seeds 1..=9 cover n ∈ {1,2,3} × d ∈ {2,3,4}.
pub fn instance_shape(seed: u64) -> (usize, usize) {
    (1 + (seed % 3) as usize, 2 + ((seed / 3) % 3) as usize)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SuiteConfig {
    /// Seed of the first instance; instance k uses seed + k.
    pub seed: u64,
    pub instances: usize,
    pub nodes: usize,
    /// Replaces every base tolerance.
    pub tol: Option<f64>,
    /// Per-identity base tolerances; these win over `tol`.
    pub tol_overrides: BTreeMap<String, f64>,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self {
            seed: 1,
            instances: 20,
            nodes: DEFAULT_NODES,
            tol: None,
            tol_overrides: BTreeMap::new(),
        }
    }
}

impl SuiteConfig {
    pub fn base_tol(&self, ident: &Identity) -> f64 {
        self.tol_overrides
            .get(ident.name)
            .copied()
            .or(self.tol)
            .unwrap_or(ident.tol)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Record {
    pub identity: String,
    pub seed: u64,
    pub s: Option<Vec<f64>>,
    pub p: Option<Vec<f64>>,
    pub residual: f64,
    pub cond: f64,
    pub tol: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub seed: u64,
    pub instances: usize,
    pub nodes: usize,
    pub records: Vec<Record>,
    pub failures: usize,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }

    pub fn failed(&self) -> impl Iterator<Item = &Record> {
        self.records.iter().filter(|r| !r.pass)
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| Error::Numerical(e.to_string()))
    }

    /// identity, seed, residual, cond, tol, pass
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let err = |e: csv::Error| Error::Numerical(e.to_string());
        w.write_record(["identity", "seed", "residual", "cond", "tol", "pass"]).map_err(err)?;
        for r in &self.records {
            w.write_record([
                r.identity.clone(),
                r.seed.to_string(),
                format!("{:e}", r.residual),
                format!("{:e}", r.cond),
                format!("{:e}", r.tol),
                r.pass.to_string(),
            ])
            .map_err(err)?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Numerical(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| Error::Numerical(e.to_string()))
    }
}

/// One evaluated sample of an identity.
#[derive(Debug, Clone)]
struct Sample {
    s: Option<Vec<f64>>,
    p: Option<Vec<f64>>,
    residual: f64,
    cond: f64,
    /// cond, error estimate or 1, depending on the identity's scaling
    scale: f64,
}

impl Sample {
    fn plain(residual: f64) -> Self {
        Self {
            s: None,
            p: None,
            residual,
            cond: 1.0,
            scale: 1.0,
        }
    }

    fn at<S: Scalar>(mut self, s: Option<&S>, p: Option<&S>) -> Self {
        self.s = s.map(|x| x.coeffs().to_vec());
        self.p = p.map(|x| x.coeffs().to_vec());
        self
    }

    fn cond(residual: f64, cond: f64) -> Self {
        Self {
            cond,
            scale: cond,
            ..Self::plain(residual)
        }
    }

    fn estimate(residual: f64, estimate: f64) -> Self {
        Self {
            scale: estimate,
            ..Self::plain(residual)
        }
    }
}

/// The sample with the largest residual relative to its scale; earliest wins ties.
fn worst(samples: Vec<Sample>) -> Sample {
    samples
        .into_iter()
        .reduce(|a, b| if b.residual * a.scale > a.residual * b.scale { b } else { a })
        .expect("at least one sample")
}

type Measurements = HashMap<&'static str, Sample>;

pub fn run_suite(cfg: &SuiteConfig, exec: Execution) -> Result<Report> {
    let per_instance = par::try_map_indexed(cfg.instances, exec, |k| {
        let seed = cfg.seed + k as u64;
        instance_records(seed, cfg)
    })?;
    let records: Vec<Record> = per_instance.into_iter().flatten().collect();
    let failures = records.iter().filter(|r| !r.pass).count();
    Ok(Report {
        seed: cfg.seed,
        instances: cfg.instances,
        nodes: cfg.nodes,
        records,
        failures,
    })
}

fn instance_records(seed: u64, cfg: &SuiteConfig) -> Result<Vec<Record>> {
    let mut m = Measurements::new();
    let (n, d) = instance_shape(seed);
    let t = random::paravector_operator(seed, n, d, None);
    operator_identities(seed, &t, &mut m)?;
    spectrum_identities(seed, &t, &mut m)?;
    calculus_identities(seed, &t, cfg.nodes, &mut m)?;
    riesz_identities(seed, n, d, cfg.nodes, &mut m)?;
    quaternion_identities(seed, &mut m)?;
    IDENTITIES
        .iter()
        .map(|ident| {
            let sample = m
                .remove(ident.name)
                .ok_or_else(|| Error::Numerical(format!("identity {} was not evaluated", ident.name)))?;
            let tol = cfg.base_tol(ident) * sample.scale;
            Ok(Record {
                identity: ident.name.to_string(),
                seed,
                s: sample.s,
                p: sample.p,
                residual: sample.residual,
                cond: sample.cond,
                tol,
                pass: sample.residual <= tol,
            })
        })
        .collect()
}

/// Independent stream for each (seed, purpose) pair.
fn stream(seed: u64, purpose: u64) -> InstanceRng {
    random::rng(seed.wrapping_mul(0x9e37_79b9_7f4a_7c15) ^ purpose)
}

fn clifford_point(n: usize, r: f64) -> impl Fn(&mut InstanceRng) -> Multivector {
    move |rng| {
        Paravector::new(&box_point(rng, n, r))
            .expect("valid paravector")
            .to_multivector()
    }
}

fn quaternion_point(r: f64) -> impl Fn(&mut InstanceRng) -> Quaternion {
    move |rng| {
        let mut c = || rng.random_range(-r..=r);
        Quaternion::new(c(), c(), c(), c())
    }
}

fn sphere_gap<S: Scalar>(a: &S, b: &S) -> f64 {
    (a.re() - b.re()).hypot(a.imag_norm() - b.imag_norm())
}

fn draw_until<S: Scalar>(
    rng: &mut InstanceRng,
    draw: &impl Fn(&mut InstanceRng) -> S,
    accept: impl Fn(&S) -> bool,
) -> Result<S> {
    for _ in 0..MAX_DRAWS {
        let x = draw(rng);
        if accept(&x) {
            return Ok(x);
        }
    }
    Err(Error::Numerical("could not draw an admissible sample point".into()))
}

fn resolvent_points<S: Scalar>(
    rng: &mut InstanceRng,
    spec: &Spectrum,
    draw: &impl Fn(&mut InstanceRng) -> S,
) -> Result<Vec<(S, S)>> {
    let outside = |x: &S| spec.distance_to(x.re(), x.imag_norm()) >= SPECTRAL_MARGIN;
    (0..SAMPLES)
        .map(|_| {
            let s = draw_until(rng, draw, outside)?;
            let p = draw_until(rng, draw, |p| outside(p) && sphere_gap(p, &s) >= SPECTRAL_MARGIN)?;
            Ok((s, p))
        })
        .collect()
}

/// Classical and new resolvent equations and the pseudo-resolvent
/// commutation over SAMPLES points; keys get `prefix` prepended.
fn resolvent_family<S: Scalar>(
    t: &ModuleOperator<S>,
    pts: &[(S, S)],
    prefix: &str,
    m: &mut Measurements,
) -> Result<()> {
    let mut left = Vec::new();
    let mut right = Vec::new();
    let mut form_i = Vec::new();
    let mut form_ii = Vec::new();
    let mut forms = Vec::new();
    let mut pseudo = Vec::new();
    for (s, p) in pts {
        let r = resolvent_equation_residuals(t, s)?;
        left.push(Sample::cond(r.left.value, r.left.cond).at(Some(s), None));
        right.push(Sample::cond(r.right.value, r.right.cond).at(Some(s), None));
        let r = new_resolvent_residual(t, s, p, NewEquationForm::I)?;
        form_i.push(Sample::cond(r.value, r.cond).at(Some(s), Some(p)));
        let r = new_resolvent_residual(t, s, p, NewEquationForm::II)?;
        form_ii.push(Sample::cond(r.value, r.cond).at(Some(s), Some(p)));
        let r = new_resolvent_forms_gap(t, s, p)?;
        forms.push(Sample::cond(r.value, r.cond).at(Some(s), Some(p)));
        let r = pseudo_commutation_residual(t, s, p)?;
        pseudo.push(Sample::cond(r.value, r.cond).at(Some(s), Some(p)));
    }
    let key = |name: &str| -> &'static str {
        identity(&format!("{prefix}{name}"))
            .map(|i| i.name)
            .expect("known identity")
    };
    m.insert(key("resolvent_left"), worst(left));
    m.insert(key("resolvent_right"), worst(right));
    m.insert(key("new_equation_i"), worst(form_i));
    m.insert(key("new_equation_ii"), worst(form_ii));
    m.insert(key("new_equation_forms"), worst(forms));
    m.insert(key("pseudo_commutation"), worst(pseudo));
    Ok(())
}

fn laplace_family<S: Scalar>(
    t: &ModuleOperator<S>,
    s: &S,
    left: &'static str,
    right: &'static str,
    m: &mut Measurements,
) -> Result<()> {
    let opts = LaplaceOptions::default();
    for (side, key) in [(Side::Left, left), (Side::Right, right)] {
        let l = laplace_resolvent(t, s, side, &opts)?;
        let closed = s_resolvent(t, s, side)?;
        m.insert(key, Sample::plain((&l - &closed).norm2()).at(Some(s), None));
    }
    Ok(())
}

fn operator_identities(seed: u64, t: &ParavectorOperator, m: &mut Measurements) -> Result<()> {
    let n = t.n();
    let module = t.module();
    let spec = s_spectrum(t)?;
    let bound = t.operator_norm_bound();

    let mut rng = stream(seed, 1);
    let pts = resolvent_points(&mut rng, &spec, &clifford_point(n, spec.radius() + 1.0))?;
    resolvent_family(&module, &pts, "", m)?;

    let mut rng = stream(seed, 2);
    let unit_box = clifford_point(n, 1.0);
    let kernel = (0..KERNEL_SAMPLES)
        .map(|_| {
            let x = unit_box(&mut rng);
            let s = draw_until(&mut rng, &unit_box, |s| sphere_gap(s, &x) >= SPECTRAL_MARGIN)?;
            let r = kernel_form_residuals(&x, &s)?;
            Ok(Sample::plain(r.left.max(r.right)).at(Some(&s), Some(&x)))
        })
        .collect::<Result<Vec<_>>>()?;
    m.insert("kernel_forms", worst(kernel));

    // |s| = 2.5 ‖T‖ keeps the series ratio at 0.4
    let mut rng = stream(seed, 3);
    let dir = draw_until(&mut rng, &unit_box, |x| x.norm() > 0.1)?;
    let s = dir.scale(2.5 * bound.max(0.4) / dir.norm());
    let series = [Side::Left, Side::Right]
        .into_iter()
        .map(|side| Ok(Sample::plain(series_residual(&module, &s, SERIES_TERMS, side)?.value).at(Some(&s), None)))
        .collect::<Result<Vec<_>>>()?;
    m.insert("series", worst(series));

    let mut rng = stream(seed, 4);
    let a = module.rep().scale(1.0 / bound.max(f64::MIN_POSITIVE));
    let outer = clifford_point(n, 2.0);
    let inner = clifford_point(n, 0.5);
    let mut finite = Vec::new();
    for _ in 0..SAMPLES {
        let s = draw_until(&mut rng, &outer, |s| s.norm() >= 1.0)?;
        let p = draw_until(&mut rng, &inner, |p| sphere_gap(p, &s) >= SPECTRAL_MARGIN)?;
        for side in [Side::Left, Side::Right] {
            let r = finite_sum_residual(&a, &s, &p, FINITE_SUM_TERMS, side)?;
            finite.push(Sample::plain(r.value).at(Some(&s), Some(&p)));
        }
    }
    m.insert("finite_sum", worst(finite));

    let mut rng = stream(seed, 5);
    let mut s_parts = box_point(&mut rng, n, 1.0);
    s_parts[0] = 2.0 * bound;
    let s = Paravector::new(&s_parts)?.to_multivector();
    laplace_family(&module, &s, "laplace_left", "laplace_right", m)
}

fn spectrum_identities(seed: u64, t: &ParavectorOperator, m: &mut Measurements) -> Result<()> {
    let module = t.module();
    let spec = s_spectrum(t)?;
    let excess = (spec.radius() - t.operator_norm_bound()).max(0.0);
    m.insert("norm_bound", Sample::plain(excess));

    let minima = grid_scan(&module, GRID_RESOLUTION, Execution::Sequential)?;
    let zeros: Vec<f64> = minima
        .iter()
        .filter(|g| g.margin < GRID_ZERO)
        .map(|g| spec.distance_to(g.u, g.v))
        .collect();
    // a scan that finds nothing counts as missing by the whole search box
    let far = if zeros.is_empty() {
        spec.radius() + 1.0
    } else {
        zeros.into_iter().fold(0.0, f64::max)
    };
    m.insert("grid_scan", Sample::plain(far));

    let c = random::commuting_operator(seed, t.n(), t.d());
    let c_spec = s_spectrum(&c)?;
    let gap = c_spec.mismatch(&f_spectrum(&c)?);
    m.insert("sf_spectrum", Sample::plain(gap));

    let cm = c.module();
    let mut rng = stream(seed, 11);
    let draw = clifford_point(t.n(), c_spec.radius() + 1.0);
    let mut sc = Vec::new();
    for _ in 0..SAMPLES {
        let s = draw_until(&mut rng, &draw, |s| c_spec.distance_to(s.re(), s.imag_norm()) >= SPECTRAL_MARGIN)?;
        for side in [Side::Left, Side::Right] {
            let (closed, cond) = s_resolvent_with_cond(&cm, &s, side)?;
            let r = (&sc_resolvent(&c, &s, side)? - &closed).norm2();
            sc.push(Sample::cond(r, cond).at(Some(&s), None));
        }
    }
    m.insert("sc_resolvent", worst(sc));
    Ok(())
}

/// Σ_m rep(T)^m ∘ L_{a_m}
fn operator_polynomial(t: &ModuleOperator<Multivector>, coeffs: &[Multivector]) -> OperatorMatrix {
    let mut acc = OperatorMatrix::zeros(t.rep().blocks(), t.d());
    let mut power = t.identity();
    for a in coeffs {
        acc = &acc + &(&power * &t.lift(a));
        power = &power * t.rep();
    }
    acc
}

fn calculus_identities(seed: u64, t: &ParavectorOperator, nodes: usize, m: &mut Measurements) -> Result<()> {
    let n = t.n();
    // the calculus identities run on the instance rescaled to ‖T‖ = 1
    let t = t.scaled(1.0 / t.operator_norm_bound());
    let module = t.module();
    let e = |i: usize| ImaginaryUnit::generator(n, i.min(n)).map(|u| u.to_multivector());
    let e1 = e(1)?;
    let one = Multivector::scalar(n, 1.0)?;
    let zero = Multivector::zero(n)?;
    let contour = Contour::circle(e1, 0.0, 2.0, nodes)?;
    let dist = |a: &OperatorMatrix, b: &OperatorMatrix| (a - b).norm2();

    let f_one = SliceFunction::polynomial(&[1.0]);
    let r = func_calc(&f_one, &module, &contour, Side::Left)?;
    m.insert("calc_identity", Sample::plain(dist(&r.value, &module.identity())));

    let mut rng = stream(seed, 6);
    let real: Vec<f64> = (0..=6).map(|_| rng.random_range(-1.0..=1.0)).collect();
    let draw = clifford_point(n, 1.0);
    let cliff: Vec<Multivector> = (0..=6).map(|_| draw(&mut rng)).collect();
    let real_mv: Vec<Multivector> = real.iter().map(|&c| one.scale(c)).collect();
    let p_real = func_calc(&SliceFunction::polynomial(&real), &module, &contour, Side::Left)?;
    let p_left = func_calc(&SliceFunction::Left(cliff.clone()), &module, &contour, Side::Left)?;
    let p_right = func_calc(&SliceFunction::Right(cliff.clone()), &module, &contour, Side::Right)?;
    // right series Σ a_m x^m maps to Σ L_{a_m} ∘ rep(T)^m
    let mut right_oracle = OperatorMatrix::zeros(module.rep().blocks(), module.d());
    let mut power = module.identity();
    for a in &cliff {
        right_oracle = &right_oracle + &(&module.lift(a) * &power);
        power = &power * module.rep();
    }
    let poly = [
        dist(&p_real.value, &operator_polynomial(&module, &real_mv)),
        dist(&p_left.value, &operator_polynomial(&module, &cliff)),
        dist(&p_right.value, &right_oracle),
    ];
    m.insert("calc_polynomial", Sample::plain(poly.into_iter().fold(0.0, f64::max)));

    let exp = SliceFunction::exp();
    let r = func_calc(&exp, &module, &contour, Side::Left)?;
    let oracle = OperatorMatrix::from_matrix(module.rep().blocks(), module.d(), module.rep().matrix().clone().exp())?;
    m.insert("calc_exp", Sample::plain(dist(&r.value, &oracle)));

    let (lr, _) = left_right_agreement(&exp, &module, &contour)?;
    m.insert("left_right", Sample::plain(lr));

    let other_unit = if n == 1 {
        -e1
    } else {
        let mut rng = stream(seed, 7);
        let dir: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..=1.0)).collect();
        ImaginaryUnit::normalized(&dir)?.to_multivector()
    };
    let r2 = func_calc(&exp, &module, &contour.with_unit(other_unit)?, Side::Left)?;
    m.insert(
        "slice_independence",
        Sample::estimate(dist(&r.value, &r2.value), r.err_estimate + r2.err_estimate),
    );
    let r3 = func_calc(&exp, &module, &contour.with_radius_scale(1.5)?, Side::Left)?;
    m.insert(
        "radius_independence",
        Sample::estimate(dist(&r.value, &r3.value), r.err_estimate + r3.err_estimate),
    );

    let mut rng = stream(seed, 8);
    let b = module.rep().clone();
    let p = clifford_point(n, 0.5)(&mut rng);
    let around_p = Contour::circle(e1, p.re(), p.imag_norm() + 0.5, nodes)?;
    let d = module.d();
    let r = lemma_integral(&b, &p, &around_p, None)?;
    m.insert("lemma_b", Sample::plain(dist(&r.value, &b)).at(None, Some(&p)));
    let sq = SliceFunction::polynomial(&[0.0, 0.0, 1.0]);
    let r = lemma_integral(&b, &p, &around_p, Some(&sq))?;
    let expect = &b * &OperatorMatrix::scalar(&(p * p), d);
    m.insert("lemma_square", Sample::plain(dist(&r.value, &expect)).at(None, Some(&p)));
    let r = lemma_integral(&b, &p, &around_p, Some(&exp))?;
    let expect = &b * &OperatorMatrix::scalar(&exp_paravector(&p), d);
    m.insert("lemma_exp", Sample::plain(dist(&r.value, &expect)).at(None, Some(&p)));

    let inner = Contour::circle(e1, 0.0, 1.5, nodes)?;
    let x = SliceFunction::polynomial(&[0.0, 1.0]);
    let x_plus_e1 = SliceFunction::Left(vec![e1, one]);
    let x_e2 = SliceFunction::Left(vec![zero, e(2)?]);
    let pairs = [
        ("product_x_x", &x, &x),
        ("product_exp_x_plus_e1", &exp, &x_plus_e1),
        ("product_square_x_e2", &sq, &x_e2),
    ];
    for (key, f, g) in pairs {
        let (res, _) = product_rule_residual(f, g, &module, &inner)?;
        m.insert(key, Sample::plain(res));
    }
    Ok(())
}

fn riesz_identities(seed: u64, n: usize, d: usize, nodes: usize, m: &mut Measurements) -> Result<()> {
    let t = random::two_group_operator(seed, n, d);
    let module = t.module();
    let spec = s_spectrum(&t)?;
    let unit = ImaginaryUnit::generator(n, 1)?.to_multivector();
    let groups: [Vec<usize>; 2] = [
        (0..spec.spheres.len()).filter(|&i| spec.spheres[i].u > 0.0).collect(),
        (0..spec.spheres.len()).filter(|&i| spec.spheres[i].u <= 0.0).collect(),
    ];
    let rep = module.rep();
    let (mut idem, mut comm, mut part) = (0.0_f64, 0.0_f64, 0.0_f64);
    let mut sum = OperatorMatrix::zeros(rep.blocks(), d);
    for g in &groups {
        let pr = riesz_projector(&module, &spec, g, unit, nodes, RadiusPolicy::Cap(0.5))?;
        let p = &pr.p.value;
        idem = idem.max((&(p * p) - p).norm2());
        comm = comm.max((&(rep * p) - &(p * rep)).norm2());
        part = part.max((&pr.t_part.value - &(rep * p)).norm2());
        sum = &sum + p;
    }
    m.insert("riesz_idempotent", Sample::plain(idem));
    m.insert("riesz_commute", Sample::plain(comm));
    m.insert("riesz_sum", Sample::plain((&sum - &module.identity()).norm2()));
    m.insert("riesz_part", Sample::plain(part));
    Ok(())
}

fn quaternion_identities(seed: u64, m: &mut Measurements) -> Result<()> {
    let q = random::quaternion_operator(seed, 4, None);
    let module = q.module();
    let spec = s_spectrum_of(&module)?;
    let mut rng = stream(seed, 9);
    let pts = resolvent_points(&mut rng, &spec, &quaternion_point(spec.radius() + 1.0))?;
    resolvent_family(&module, &pts, "quaternion_", m)?;

    let mut rng = stream(seed, 10);
    let v = quaternion_point(1.0)(&mut rng);
    let s = Quaternion::new(2.0 * q.operator_norm_bound(), v.coeffs()[1], v.coeffs()[2], v.coeffs()[3]);
    laplace_family(
        &module,
        &s,
        "quaternion_laplace_left",
        "quaternion_laplace_right",
        m,
    )
}
