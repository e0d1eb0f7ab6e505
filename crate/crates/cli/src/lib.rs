//! Argument parsing and command dispatch for the `coniccurv` binary.

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::error::ErrorKind;
use clap::{Args, CommandFactory, Parser, Subcommand, ValueEnum};
use thiserror::Error;

use coniccurv::bench::{bench_curve, run_order_experiment, run_table2};
use coniccurv::energy::{energy, ExactParametric, FourPoint, MAX_LEVELS, MIN_LEVELS};
use coniccurv::estimator::{curvature_profile_with_inflections, piecewise_tangent_field};
use coniccurv::io::{self, Format};
use coniccurv::{curvature_profile, find_corner, split_convex, CornerOptions, PlanePoint, ProfileOptions, SmallPiecePolicy};

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Usage(#[from] clap::Error),
    #[error("{0}")]
    Data(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(e) if !e.use_stderr() => 0,
            CliError::Usage(_) => 1,
            CliError::Data(_) => 2,
        }
    }
}

fn data(e: impl std::fmt::Display) -> CliError {
    CliError::Data(e.to_string())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Csv,
    Json,
}

impl From<OutputFormat> for Format {
    fn from(f: OutputFormat) -> Format {
        match f {
            OutputFormat::Csv => Format::Csv,
            OutputFormat::Json => Format::Json,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SchemeKind {
    /// Evaluate a named curve at parameter midpoints.
    Exact,
    /// Classic interpolatory 4-point rule.
    FourPoint,
}

#[derive(Debug, Parser)]
#[command(name = "coniccurv", version, about = "Curvature estimation for ordered planar samples")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Debug, Args)]
struct Common {
    /// Output format.
    #[arg(long, value_enum, default_value_t = OutputFormat::Csv)]
    format: OutputFormat,
    /// Write to this file instead of standard output.
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct PointsInput {
    /// Points CSV (`x,y` per line, optional header).
    input: PathBuf,
    /// The polyline is closed.
    #[arg(long)]
    closed: bool,
}

#[derive(Debug, Args)]
struct ProfileFlags {
    /// Treat the whole input as one convex piece.
    #[arg(long)]
    assume_convex: bool,
    /// Leave points of pieces shorter than 5 samples unestimated.
    #[arg(long)]
    strict: bool,
}

#[derive(Debug, Subcommand)]
enum Cmd {
    /// Curvature at every sample.
    Curvature {
        #[command(flatten)]
        points: PointsInput,
        #[command(flatten)]
        profile: ProfileFlags,
        /// Insert a midpoint with a bisector tangent on each inflection edge.
        #[arg(long)]
        insert_inflections: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Tangent line at every sample.
    Tangents {
        #[command(flatten)]
        points: PointsInput,
        #[command(flatten)]
        profile: ProfileFlags,
        #[command(flatten)]
        common: Common,
    },
    /// Split into convex pieces.
    Split {
        #[command(flatten)]
        points: PointsInput,
        #[command(flatten)]
        common: Common,
    },
    /// Corner of an L-curve (`alpha,residual_norm,solution_norm`).
    Corner {
        input: PathBuf,
        /// Split the log-log curve into convex pieces first.
        #[arg(long)]
        no_assume_convex: bool,
        /// Flag every local curvature maximum, not only the corner.
        #[arg(long)]
        all_maxima: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Relative errors of the four estimators on the benchmark curves.
    BenchAccuracy {
        #[command(flatten)]
        common: Common,
    },
    /// Convergence-order experiment for Conic and ConicCurv.
    BenchOrder {
        #[command(flatten)]
        common: Common,
    },
    /// Stretching and bending energy estimates from a 3-point control polygon.
    Energy {
        /// Control polygon CSV with exactly 3 points.
        input: Option<PathBuf>,
        /// Refinement levels j*.
        #[arg(long, default_value_t = 4, value_parser = clap::value_parser!(u64).range(MIN_LEVELS as u64..=MAX_LEVELS as u64))]
        levels: u64,
        /// Subdivision scheme; `exact` needs `--curve`.
        #[arg(long, value_enum)]
        scheme: Option<SchemeKind>,
        /// Named benchmark curve to sample instead of a control file.
        #[arg(long, conflicts_with = "input")]
        curve: Option<String>,
        #[arg(long, default_value_t = 1.0, allow_negative_numbers = true, requires = "curve")]
        t0: f64,
        #[arg(long, default_value_t = 2.0, allow_negative_numbers = true, requires = "curve")]
        t1: f64,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Curvature,
    Tangents,
    Split,
    Corner,
    BenchAccuracy,
    BenchOrder,
    Energy,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Curvature => "curvature",
            Command::Tangents => "tangents",
            Command::Split => "split",
            Command::Corner => "corner",
            Command::BenchAccuracy => "bench-accuracy",
            Command::BenchOrder => "bench-order",
            Command::Energy => "energy",
        }
    }
}

/// Validated command line.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub input_path: Option<PathBuf>,
    pub closed: bool,
    pub assume_convex: bool,
    pub strict: bool,
    pub insert_inflections: bool,
    pub all_maxima: bool,
    pub levels: usize,
    pub scheme: SchemeKind,
    pub curve: Option<String>,
    pub t_range: (f64, f64),
    pub format: Format,
    pub output: Option<PathBuf>,
}

impl RunConfig {
    fn new(command: Command, common: Common) -> Self {
        RunConfig {
            command,
            input_path: None,
            closed: false,
            assume_convex: false,
            strict: false,
            insert_inflections: false,
            all_maxima: false,
            levels: 4,
            scheme: SchemeKind::FourPoint,
            curve: None,
            t_range: (1.0, 2.0),
            format: common.format.into(),
            output: common.output,
        }
    }
}

fn usage(kind: ErrorKind, msg: impl std::fmt::Display) -> clap::Error {
    Cli::command().error(kind, msg)
}

pub fn parse_args<I, T>(argv: I) -> Result<RunConfig, clap::Error>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = Cli::try_parse_from(argv)?;
    let cfg = match cli.command {
        Cmd::Curvature { points, profile, insert_inflections, common } => RunConfig {
            input_path: Some(points.input),
            closed: points.closed,
            assume_convex: profile.assume_convex,
            strict: profile.strict,
            insert_inflections,
            ..RunConfig::new(Command::Curvature, common)
        },
        Cmd::Tangents { points, profile, common } => RunConfig {
            input_path: Some(points.input),
            closed: points.closed,
            assume_convex: profile.assume_convex,
            strict: profile.strict,
            ..RunConfig::new(Command::Tangents, common)
        },
        Cmd::Split { points, common } => RunConfig {
            input_path: Some(points.input),
            closed: points.closed,
            ..RunConfig::new(Command::Split, common)
        },
        Cmd::Corner { input, no_assume_convex, all_maxima, common } => RunConfig {
            input_path: Some(input),
            assume_convex: !no_assume_convex,
            all_maxima,
            ..RunConfig::new(Command::Corner, common)
        },
        Cmd::BenchAccuracy { common } => RunConfig::new(Command::BenchAccuracy, common),
        Cmd::BenchOrder { common } => RunConfig::new(Command::BenchOrder, common),
        Cmd::Energy { input, levels, scheme, curve, t0, t1, common } => {
            if input.is_none() && curve.is_none() {
                return Err(usage(ErrorKind::MissingRequiredArgument, "energy needs a control CSV or --curve NAME"));
            }
            let scheme = scheme.unwrap_or(if curve.is_some() { SchemeKind::Exact } else { SchemeKind::FourPoint });
            if scheme == SchemeKind::Exact && curve.is_none() {
                return Err(usage(ErrorKind::ArgumentConflict, "--scheme exact needs --curve NAME"));
            }
            if let Some(name) = &curve {
                if bench_curve(name).is_none() {
                    return Err(usage(ErrorKind::InvalidValue, format!("unknown curve `{name}`")));
                }
            }
            if !(t0.is_finite() && t1.is_finite() && t0 < t1) {
                return Err(usage(ErrorKind::InvalidValue, "--t0 must be finite and below --t1"));
            }
            RunConfig {
                input_path: input,
                levels: levels as usize,
                scheme,
                curve,
                t_range: (t0, t1),
                ..RunConfig::new(Command::Energy, common)
            }
        }
    };
    Ok(cfg)
}

fn input(cfg: &RunConfig) -> &Path {
    cfg.input_path.as_deref().expect("parser requires an input for this command")
}

fn profile_options(cfg: &RunConfig) -> ProfileOptions {
    ProfileOptions {
        assume_convex: cfg.assume_convex,
        small_pieces: if cfg.strict { SmallPiecePolicy::Strict } else { SmallPiecePolicy::Reduced },
    }
}

/// Runs the command and returns the rendered output.
pub fn execute(cfg: &RunConfig) -> Result<String, CliError> {
    let fmt = cfg.format;
    let out = match cfg.command {
        Command::Curvature => {
            let pl = io::read_points_csv(input(cfg), cfg.closed).map_err(data)?;
            let opts = profile_options(cfg);
            if cfg.insert_inflections {
                io::curvature_table(&curvature_profile_with_inflections(&pl, opts).records, fmt)
            } else {
                io::curvature_table(&curvature_profile(&pl, opts), fmt)
            }
        }
        Command::Tangents => {
            let pl = io::read_points_csv(input(cfg), cfg.closed).map_err(data)?;
            io::tangent_table(&piecewise_tangent_field(&pl, profile_options(cfg)), fmt)
        }
        Command::Split => {
            let pl = io::read_points_csv(input(cfg), cfg.closed).map_err(data)?;
            io::split_table(&split_convex(&pl).map_err(data)?, fmt)
        }
        Command::Corner => {
            let samples = io::read_lcurve_csv(input(cfg)).map_err(data)?;
            let opts = CornerOptions { assume_convex: cfg.assume_convex, all_maxima: cfg.all_maxima };
            let report = find_corner(&samples, opts).map_err(data)?;
            io::corner_table(&samples, &report, fmt)
        }
        Command::BenchAccuracy => io::table2_table(&run_table2(), fmt),
        Command::BenchOrder => {
            let (conic, cc) = run_order_experiment();
            io::order_table(&conic, &cc, fmt)
        }
        Command::Energy => {
            let report = match (&cfg.curve, &cfg.input_path) {
                (Some(name), _) => {
                    let curve = bench_curve(name).expect("validated by the parser");
                    let (t0, t1) = cfg.t_range;
                    let exact = ExactParametric::new(|t| curve.position(t), vec![t0, 0.5 * (t0 + t1), t1]);
                    let c = exact.control_points();
                    let control = [c[0], c[1], c[2]];
                    match cfg.scheme {
                        SchemeKind::Exact => energy(&control, &exact, cfg.levels),
                        SchemeKind::FourPoint => energy(&control, &FourPoint, cfg.levels),
                    }
                }
                (None, Some(path)) => {
                    let text = std::fs::read_to_string(path).map_err(|e| data(format!("{}: {e}", path.display())))?;
                    let pts: Vec<PlanePoint> = io::parse_points_csv(&text).map_err(data)?;
                    let control: [PlanePoint; 3] = pts
                        .try_into()
                        .map_err(|v: Vec<PlanePoint>| data(format!("control polygon needs exactly 3 points, got {}", v.len())))?;
                    energy(&control, &FourPoint, cfg.levels)
                }
                (None, None) => unreachable!("parser requires an input or a curve"),
            };
            io::energy_table(&report.map_err(data)?, fmt)
        }
    };
    Ok(out)
}

/// Parses, runs and writes the output; returns the process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let result = parse_args(argv).map_err(CliError::from).and_then(|cfg| {
        let text = execute(&cfg)?;
        match &cfg.output {
            Some(path) => std::fs::write(path, text).map_err(|e| data(format!("{}: {e}", path.display()))),
            None => {
                print!("{text}");
                Ok(())
            }
        }
    });
    match result {
        Ok(()) => 0,
        Err(e) => {
            let code = e.exit_code();
            match &e {
                CliError::Usage(err) => {
                    let _ = err.print();
                }
                CliError::Data(msg) => eprintln!("error: {msg}"),
            }
            code
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn curvature_closed_json() {
        let cfg = parse_args(["coniccurv", "curvature", "pts.csv", "--closed", "--format", "json"]).unwrap();
        assert_eq!(cfg.command, Command::Curvature);
        assert!(cfg.closed);
        assert_eq!(cfg.format, Format::Json);
        assert_eq!(cfg.input_path.as_deref(), Some(Path::new("pts.csv")));
    }

    #[test]
    fn energy_four_point() {
        let cfg = parse_args(["coniccurv", "energy", "arc.csv", "--levels", "4", "--scheme", "four-point"]).unwrap();
        assert_eq!(cfg.command, Command::Energy);
        assert_eq!(cfg.levels, 4);
        assert_eq!(cfg.scheme, SchemeKind::FourPoint);
    }

    #[test]
    fn energy_curve_defaults_to_exact() {
        let cfg = parse_args(["coniccurv", "energy", "--curve", "ellipse", "--t0", "-0.5", "--t1", "1"]).unwrap();
        assert_eq!(cfg.scheme, SchemeKind::Exact);
        assert_eq!(cfg.t_range, (-0.5, 1.0));
    }

    #[test]
    fn usage_errors() {
        for argv in [
            vec!["coniccurv", "bench-order", "stray"],
            vec!["coniccurv", "energy", "arc.csv", "--levels", "13"],
            vec!["coniccurv", "energy", "arc.csv", "--levels", "1"],
            vec!["coniccurv", "energy", "arc.csv", "--scheme", "exact"],
            vec!["coniccurv", "energy"],
            vec!["coniccurv", "energy", "--curve", "nosuch"],
            vec!["coniccurv", "curvature"],
            vec!["coniccurv", "curvature", "a.csv", "--format", "xml"],
            vec!["coniccurv"],
        ] {
            let err = parse_args(&argv).unwrap_err();
            assert_eq!(CliError::from(err).exit_code(), 1, "{argv:?}");
        }
    }

    #[test]
    fn corner_defaults() {
        let cfg = parse_args(["coniccurv", "corner", "l.csv"]).unwrap();
        assert!(cfg.assume_convex && !cfg.all_maxima);
        let cfg = parse_args(["coniccurv", "corner", "l.csv", "--no-assume-convex", "--all-maxima"]).unwrap();
        assert!(!cfg.assume_convex && cfg.all_maxima);
    }
}
