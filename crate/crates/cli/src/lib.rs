//! Run configuration and command implementations for the `sfcalc` binary.

use serde::{Deserialize, Serialize};
use sfcalc_core::calculus::{func_calc, laplace_resolvent, riesz_projector, LaplaceOptions};
use sfcalc_core::hypercomplex::{ImaginaryUnit, Multivector, Paravector};
use sfcalc_core::io::{matrix_rows, CalculusReport, OperatorJson};
use sfcalc_core::operator::{s_resolvent_with_cond, ParavectorOperator, Side};
use sfcalc_core::par::Execution;
use sfcalc_core::slicefun::FunctionSpec;
use sfcalc_core::spectrum::{build_contour, f_spectrum, s_spectrum, Contour, RadiusPolicy, SpectrumSource};
use sfcalc_core::verify::{run_suite, SuiteConfig, DEFAULT_NODES};
use sfcalc_core::Error;
use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;

pub const EXIT_OK: u8 = 0;
pub const EXIT_VERIFICATION: u8 = 1;
pub const EXIT_INPUT: u8 = 2;
pub const EXIT_NUMERICAL: u8 = 3;
pub const EXIT_GEOMETRY: u8 = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    #[default]
    Verify,
    Spectrum,
    Resolvent,
    Funcalc,
    Riesz,
    Contour,
    Laplace,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Csv,
}

/// Everything a run depends on besides the input files.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub command: Command,
    /// Operator JSON file.
    pub input: Option<PathBuf>,
    /// Named function (`exp`), inline function JSON, or a path to one.
    pub function: Option<String>,
    pub seed: u64,
    pub instances: usize,
    pub tol: Option<f64>,
    pub tol_overrides: BTreeMap<String, f64>,
    pub nodes: usize,
    /// `e1`, `e2`, ... or a comma-separated direction.
    pub slice_unit: String,
    /// Contour radius for funcalc, radius cap for riesz/contour.
    pub radius: Option<f64>,
    pub side: Side,
    pub source: SpectrumSource,
    pub subset: Vec<usize>,
    /// Paravector coefficients of s for resolvent/laplace.
    pub s: Vec<f64>,
    pub format: Format,
    pub output: Option<PathBuf>,
    pub verbosity: u8,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            command: Command::Verify,
            input: None,
            function: None,
            seed: 1,
            instances: 20,
            tol: None,
            tol_overrides: BTreeMap::new(),
            nodes: DEFAULT_NODES,
            slice_unit: "e1".into(),
            radius: None,
            side: Side::Left,
            source: SpectrumSource::S,
            subset: Vec::new(),
            s: Vec::new(),
            format: Format::Json,
            output: None,
            verbosity: 0,
        }
    }
}

#[derive(Debug)]
pub enum CliError {
    Input(String),
    Core(Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Input(_) => EXIT_INPUT,
            CliError::Core(e) => match e {
                Error::SingularScalar(_) | Error::OnSpectrum { .. } | Error::Numerical(_) => EXIT_NUMERICAL,
                Error::NonSeparable(_) | Error::UnsafeContour(_) => EXIT_GEOMETRY,
                _ => EXIT_INPUT,
            },
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Input(m) => write!(f, "input error: {m}"),
            CliError::Core(e) => write!(f, "{e}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

/// The report to write plus lines for stderr.
#[derive(Debug)]
pub struct Outcome {
    pub code: u8,
    pub report: String,
    pub messages: Vec<String>,
}

fn input(msg: impl fmt::Display) -> CliError {
    CliError::Input(msg.to_string())
}

fn to_json<T: Serialize>(v: &T) -> Result<String, CliError> {
    serde_json::to_string_pretty(v).map(|s| s + "\n").map_err(input)
}

fn read_operator(cfg: &RunConfig) -> Result<ParavectorOperator, CliError> {
    let path = cfg.input.as_ref().ok_or_else(|| input("--input is required"))?;
    let text = std::fs::read_to_string(path).map_err(|e| input(format!("{}: {e}", path.display())))?;
    let json: OperatorJson =
        serde_json::from_str(&text).map_err(|e| input(format!("{}: {e}", path.display())))?;
    json.to_operator().map_err(|e| input(format!("{}: {e}", path.display())))
}

fn read_function(cfg: &RunConfig, n: usize) -> Result<sfcalc_core::slicefun::SliceFunction<Multivector>, CliError> {
    let raw = cfg.function.as_deref().ok_or_else(|| input("--function is required"))?;
    let spec: FunctionSpec = if raw.trim_start().starts_with('{') {
        serde_json::from_str(raw).map_err(input)?
    } else if std::path::Path::new(raw).is_file() {
        let text = std::fs::read_to_string(raw).map_err(input)?;
        serde_json::from_str(&text).map_err(|e| input(format!("{raw}: {e}")))?
    } else {
        FunctionSpec::named(raw)
    };
    spec.build(n).map_err(|e| input(format!("function: {e}")))
}

/// `e<i>` or a comma-separated direction in span{e1..en}, normalized.
pub fn parse_unit(text: &str, n: usize) -> Result<Multivector, CliError> {
    let t = text.trim();
    let unit = if let Some(i) = t.strip_prefix('e').and_then(|i| i.parse::<usize>().ok()) {
        ImaginaryUnit::generator(n, i)
    } else {
        let dir = t
            .split(',')
            .map(|c| c.trim().parse::<f64>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| input(format!("slice unit {text:?}: {e}")))?;
        if dir.len() != n {
            return Err(input(format!("slice unit {text:?} needs {n} components")));
        }
        ImaginaryUnit::normalized(&dir)
    };
    unit.map(|u| u.to_multivector())
        .map_err(|e| input(format!("slice unit {text:?}: {e}")))
}

fn parse_s(cfg: &RunConfig, n: usize) -> Result<Multivector, CliError> {
    if cfg.s.len() != n + 1 {
        return Err(input(format!("--s needs {} paravector coefficients", n + 1)));
    }
    Ok(Paravector::new(&cfg.s)?.to_multivector())
}

fn policy(cfg: &RunConfig) -> RadiusPolicy {
    cfg.radius.map_or(RadiusPolicy::Default, RadiusPolicy::Cap)
}

fn matrix_csv(rows: &[Vec<f64>]) -> String {
    rows.iter()
        .map(|r| r.iter().map(|x| format!("{x:e}")).collect::<Vec<_>>().join(","))
        .collect::<Vec<_>>()
        .join("\n")
        + "\n"
}

pub fn run(cfg: &RunConfig) -> Result<Outcome, CliError> {
    if cfg.nodes < 4 || !cfg.nodes.is_multiple_of(2) {
        return Err(input("--nodes must be even and at least 4"));
    }
    match cfg.command {
        Command::Verify => cmd_verify(cfg),
        Command::Spectrum => cmd_spectrum(cfg),
        Command::Resolvent => cmd_resolvent(cfg),
        Command::Funcalc => cmd_funcalc(cfg),
        Command::Riesz => cmd_riesz(cfg),
        Command::Contour => cmd_contour(cfg),
        Command::Laplace => cmd_laplace(cfg),
    }
}

fn done(report: String, messages: Vec<String>) -> Result<Outcome, CliError> {
    Ok(Outcome {
        code: EXIT_OK,
        report,
        messages,
    })
}

pub fn cmd_verify(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let suite = SuiteConfig {
        seed: cfg.seed,
        instances: cfg.instances,
        nodes: cfg.nodes,
        tol: cfg.tol,
        tol_overrides: cfg.tol_overrides.clone(),
    };
    if let Some(bad) = suite
        .tol_overrides
        .keys()
        .find(|k| sfcalc_core::verify::identity(k).is_none())
    {
        return Err(input(format!("unknown identity in tolerance overrides: {bad}")));
    }
    let report = run_suite(&suite, Execution::Auto)?;
    let text = match cfg.format {
        Format::Json => report.to_json()? + "\n",
        Format::Csv => report.to_csv()?,
    };
    const LISTED: usize = 20;
    let mut messages: Vec<String> = report
        .failed()
        .take(LISTED)
        .map(|r| format!("FAIL {} seed {}: residual {:e} > tol {:e}", r.identity, r.seed, r.residual, r.tol))
        .collect();
    if report.failures > LISTED {
        messages.push(format!("... and {} more failures", report.failures - LISTED));
    }
    messages.push(format!(
        "{} records, {} failures",
        report.records.len(),
        report.failures
    ));
    Ok(Outcome {
        code: if report.passed() { EXIT_OK } else { EXIT_VERIFICATION },
        report: text,
        messages,
    })
}

pub fn cmd_spectrum(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let t = read_operator(cfg)?;
    let spec = match cfg.source {
        SpectrumSource::S => s_spectrum(&t)?,
        SpectrumSource::F => f_spectrum(&t)?,
    };
    let bound = t.operator_norm_bound();
    let radius = spec.radius();
    let ok = radius <= bound + 1e-9;
    let text = match cfg.format {
        Format::Json => to_json(&spec)?,
        Format::Csv => {
            let mut s = String::from("u,v,mult\n");
            for sp in &spec.spheres {
                s.push_str(&format!("{:e},{:e},{}\n", sp.u, sp.v, sp.multiplicity));
            }
            s
        }
    };
    let msg = format!(
        "norm bound: max sphere modulus {radius:.6e} <= {bound:.6e}: {}",
        if ok { "ok" } else { "VIOLATED" }
    );
    Ok(Outcome {
        code: if ok { EXIT_OK } else { EXIT_VERIFICATION },
        report: text,
        messages: vec![msg],
    })
}

#[derive(Serialize)]
struct ResolventReport {
    side: Side,
    s: Vec<f64>,
    value: Vec<Vec<f64>>,
    cond: f64,
}

pub fn cmd_resolvent(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let t = read_operator(cfg)?;
    let s = parse_s(cfg, t.n())?;
    let (r, cond) = s_resolvent_with_cond(&t.module(), &s, cfg.side)?;
    let rows = matrix_rows(r.matrix());
    let text = match cfg.format {
        Format::Json => to_json(&ResolventReport {
            side: cfg.side,
            s: cfg.s.clone(),
            value: rows,
            cond,
        })?,
        Format::Csv => matrix_csv(&rows),
    };
    done(text, vec![format!("cond(Q_s) = {cond:e}")])
}

pub fn cmd_funcalc(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let t = read_operator(cfg)?;
    let f = read_function(cfg, t.n())?;
    let unit = parse_unit(&cfg.slice_unit, t.n())?;
    let spec = s_spectrum(&t)?;
    let radius = cfg.radius.unwrap_or(1.25 * spec.radius() + 0.5);
    let contour = Contour::circle(unit, 0.0, radius, cfg.nodes)?;
    let r = func_calc(&f, &t.module(), &contour, cfg.side)?;
    let report = CalculusReport::new(&r);
    let text = match cfg.format {
        Format::Json => to_json(&report)?,
        Format::Csv => matrix_csv(&report.value),
    };
    done(
        text,
        vec![format!(
            "contour radius {radius}, {} nodes, error estimate {:e}",
            r.nodes, r.err_estimate
        )],
    )
}

#[derive(Serialize)]
struct RieszReport {
    subset: Vec<usize>,
    p: CalculusReport,
    t_part: CalculusReport,
    idempotent: f64,
    commutator: f64,
}

pub fn cmd_riesz(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let t = read_operator(cfg)?;
    let unit = parse_unit(&cfg.slice_unit, t.n())?;
    let spec = s_spectrum(&t)?;
    let m = t.module();
    let pr = riesz_projector(&m, &spec, &cfg.subset, unit, cfg.nodes, policy(cfg))?;
    let p = &pr.p.value;
    let idempotent = (&(p * p) - p).norm2();
    let commutator = (&(m.rep() * p) - &(p * m.rep())).norm2();
    let text = match cfg.format {
        Format::Json => to_json(&RieszReport {
            subset: cfg.subset.clone(),
            p: CalculusReport::new(&pr.p),
            t_part: CalculusReport::new(&pr.t_part),
            idempotent,
            commutator,
        })?,
        Format::Csv => {
            let subset = cfg.subset.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(" ");
            format!("subset,idempotent,commutator\n{subset},{idempotent:e},{commutator:e}\n")
        }
    };
    done(text, vec![format!("{} circles", pr.contour.circles().len())])
}

pub fn cmd_contour(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let t = read_operator(cfg)?;
    let unit = parse_unit(&cfg.slice_unit, t.n())?;
    let spec = s_spectrum(&t)?;
    let subset = if cfg.subset.is_empty() {
        (0..spec.spheres.len()).collect()
    } else {
        cfg.subset.clone()
    };
    let c = build_contour(&spec, &subset, unit, cfg.nodes, policy(cfg))?;
    let text = match cfg.format {
        Format::Csv => c.to_csv()?,
        Format::Json => to_json(&c.circles())?,
    };
    done(text, vec![])
}

#[derive(Serialize)]
struct LaplaceReport {
    side: Side,
    s: Vec<f64>,
    value: Vec<Vec<f64>>,
    closed_form_distance: f64,
}

pub fn cmd_laplace(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let t = read_operator(cfg)?;
    let s = parse_s(cfg, t.n())?;
    let m = t.module();
    let l = laplace_resolvent(&m, &s, cfg.side, &LaplaceOptions::default())?;
    let (closed, _) = s_resolvent_with_cond(&m, &s, cfg.side)?;
    let dist = (&l - &closed).norm2();
    let rows = matrix_rows(l.matrix());
    let text = match cfg.format {
        Format::Json => to_json(&LaplaceReport {
            side: cfg.side,
            s: cfg.s.clone(),
            value: rows,
            closed_form_distance: dist,
        })?,
        Format::Csv => matrix_csv(&rows),
    };
    done(text, vec![format!("distance to closed form {dist:e}")])
}

#[cfg(test)]
mod tests {
    use super::*;
    use sfcalc_core::hypercomplex::Scalar;

    #[test]
    fn defaults_fill_unset_fields() {
        let cfg: RunConfig = serde_json::from_str(r#"{"command": "spectrum"}"#).unwrap();
        assert_eq!(
            cfg,
            RunConfig {
                command: Command::Spectrum,
                ..RunConfig::default()
            }
        );
        assert!(serde_json::from_str::<RunConfig>(r#"{"command": "spectrum", "bogus": 1}"#).is_err());
    }

    #[test]
    fn units() {
        let e2 = parse_unit("e2", 3).unwrap();
        assert_eq!(e2.coeffs()[2], 1.0);
        let u = parse_unit("3, 4", 2).unwrap();
        assert!((u.coeffs()[1] - 0.6).abs() < 1e-15);
        assert!(parse_unit("e4", 3).is_err());
        assert!(parse_unit("0,0", 2).is_err());
        assert!(parse_unit("1,2,3", 2).is_err());
    }

    #[test]
    fn exit_codes() {
        assert_eq!(CliError::Core(Error::UnsafeContour("x".into())).exit_code(), EXIT_GEOMETRY);
        assert_eq!(CliError::Core(Error::Numerical("x".into())).exit_code(), EXIT_NUMERICAL);
        assert_eq!(CliError::Core(Error::Precondition("x".into())).exit_code(), EXIT_INPUT);
        assert_eq!(CliError::Input("x".into()).exit_code(), EXIT_INPUT);
    }
}
