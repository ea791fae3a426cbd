use clap::{Args, Parser, Subcommand, ValueEnum};
use sfcalc_cli::{run, Command, Format, RunConfig, EXIT_INPUT};
use sfcalc_core::operator::Side;
use sfcalc_core::spectrum::SpectrumSource;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser, Debug)]
#[command(
    name = "sfcalc",
    version,
    about = "S-spectra, S-resolvents and the S-functional calculus"
)]
struct Cli {
    /// Run a saved RunConfig (JSON) instead of a subcommand.
    #[arg(long)]
    config: Option<PathBuf>,

    /// Print the resolved RunConfig as JSON and exit.
    #[arg(long)]
    print_config: bool,

    #[command(subcommand)]
    command: Option<Cmd>,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Residual suite over seeded random instances.
    Verify {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 20)]
        instances: usize,
        /// Replace every base tolerance.
        #[arg(long)]
        tol: Option<f64>,
        /// Per-identity base tolerance, NAME=VALUE; repeatable.
        #[arg(long = "tol-override", value_parser = parse_override)]
        tol_override: Vec<(String, f64)>,
    },
    /// S-spectrum (or F-spectrum) of an operator file.
    Spectrum {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value_t = SourceArg::S)]
        source: SourceArg,
    },
    /// Closed-form S-resolvent at s.
    Resolvent {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        at: PointArgs,
    },
    /// f(T) by contour quadrature.
    Funcalc {
        #[command(flatten)]
        common: Common,
        /// Named function (exp, sin, cos, one, identity), inline JSON or a JSON file.
        #[arg(long)]
        function: String,
        #[arg(long, value_enum, default_value_t = SideArg::Left)]
        side: SideArg,
    },
    /// Riesz projector for a subset of spectral spheres.
    Riesz {
        #[command(flatten)]
        common: Common,
        /// Sphere indices, comma-separated.
        #[arg(long, value_delimiter = ',', required = true)]
        subset: Vec<usize>,
    },
    /// Contour nodes around a subset of spheres (all when omitted).
    Contour {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_delimiter = ',')]
        subset: Vec<usize>,
    },
    /// S-resolvent through its Laplace-transform representation.
    Laplace {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        at: PointArgs,
    },
}

#[derive(Args, Debug)]
struct Common {
    /// Operator JSON file.
    #[arg(long)]
    input: Option<PathBuf>,
    #[arg(long, default_value_t = 512)]
    nodes: usize,
    /// e1, e2, ... or a comma-separated direction.
    #[arg(long, default_value = "e1")]
    slice_unit: String,
    #[arg(long)]
    radius: Option<f64>,
    #[arg(long, value_enum, default_value_t = FormatArg::Json)]
    format: FormatArg,
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(short, long, action = clap::ArgAction::Count)]
    verbose: u8,
}

#[derive(Args, Debug)]
struct PointArgs {
    /// Paravector coefficients s0,s1,...,sn.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
    s: Vec<f64>,
    #[arg(long, value_enum, default_value_t = SideArg::Left)]
    side: SideArg,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum SideArg {
    Left,
    Right,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum SourceArg {
    S,
    F,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum FormatArg {
    Json,
    Csv,
}

fn parse_override(s: &str) -> Result<(String, f64), String> {
    let (name, value) = s.split_once('=').ok_or("expected NAME=VALUE")?;
    let v = value.parse::<f64>().map_err(|e| e.to_string())?;
    Ok((name.to_string(), v))
}

fn apply_common(cfg: &mut RunConfig, c: Common) {
    cfg.input = c.input;
    cfg.nodes = c.nodes;
    cfg.slice_unit = c.slice_unit;
    cfg.radius = c.radius;
    cfg.format = match c.format {
        FormatArg::Json => Format::Json,
        FormatArg::Csv => Format::Csv,
    };
    cfg.output = c.output;
    cfg.verbosity = c.verbose;
}

fn side(s: SideArg) -> Side {
    match s {
        SideArg::Left => Side::Left,
        SideArg::Right => Side::Right,
    }
}

fn config_from(cmd: Cmd) -> RunConfig {
    let mut cfg = RunConfig::default();
    match cmd {
        Cmd::Verify {
            common,
            seed,
            instances,
            tol,
            tol_override,
        } => {
            apply_common(&mut cfg, common);
            cfg.command = Command::Verify;
            cfg.seed = seed;
            cfg.instances = instances;
            cfg.tol = tol;
            cfg.tol_overrides = tol_override.into_iter().collect();
        }
        Cmd::Spectrum { common, source } => {
            apply_common(&mut cfg, common);
            cfg.command = Command::Spectrum;
            cfg.source = match source {
                SourceArg::S => SpectrumSource::S,
                SourceArg::F => SpectrumSource::F,
            };
        }
        Cmd::Resolvent { common, at } => {
            apply_common(&mut cfg, common);
            cfg.command = Command::Resolvent;
            cfg.s = at.s;
            cfg.side = side(at.side);
        }
        Cmd::Laplace { common, at } => {
            apply_common(&mut cfg, common);
            cfg.command = Command::Laplace;
            cfg.s = at.s;
            cfg.side = side(at.side);
        }
        Cmd::Funcalc {
            common,
            function,
            side: sd,
        } => {
            apply_common(&mut cfg, common);
            cfg.command = Command::Funcalc;
            cfg.function = Some(function);
            cfg.side = side(sd);
        }
        Cmd::Riesz { common, subset } => {
            apply_common(&mut cfg, common);
            cfg.command = Command::Riesz;
            cfg.subset = subset;
        }
        Cmd::Contour { common, subset } => {
            apply_common(&mut cfg, common);
            cfg.command = Command::Contour;
            cfg.subset = subset;
        }
    }
    cfg
}

fn load_config(path: &PathBuf) -> Result<RunConfig, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    serde_json::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))
}

fn emit(cfg: &RunConfig, text: &str) -> std::io::Result<()> {
    match &cfg.output {
        Some(path) => std::fs::write(path, text),
        None => std::io::stdout().write_all(text.as_bytes()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cfg = match (cli.config, cli.command) {
        (Some(_), Some(_)) => {
            eprintln!("input error: --config cannot be combined with a subcommand");
            return ExitCode::from(EXIT_INPUT);
        }
        (Some(path), None) => match load_config(&path) {
            Ok(c) => c,
            Err(e) => {
                eprintln!("input error: {e}");
                return ExitCode::from(EXIT_INPUT);
            }
        },
        (None, Some(cmd)) => config_from(cmd),
        (None, None) => {
            eprintln!("input error: a subcommand or --config is required");
            return ExitCode::from(EXIT_INPUT);
        }
    };
    if cli.print_config {
        println!("{}", serde_json::to_string_pretty(&cfg).expect("config serializes"));
        return ExitCode::SUCCESS;
    }
    match run(&cfg) {
        Ok(out) => {
            if let Err(e) = emit(&cfg, &out.report) {
                eprintln!("input error: cannot write output: {e}");
                return ExitCode::from(EXIT_INPUT);
            }
            if cfg.verbosity > 0 || out.code != 0 {
                for m in &out.messages {
                    eprintln!("{m}");
                }
            } else if let Some(last) = out.messages.last() {
                eprintln!("{last}");
            }
            ExitCode::from(out.code)
        }
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(e.exit_code())
        }
    }
}
