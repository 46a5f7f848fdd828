//! Command-line front end of the `shocksens` binary.
//!
//! Exit codes: 0 success, 1 failed validation or unwritable output,
//! 2 invalid configuration, 3 widespread nonconvergence, 4 query not
//! supported by the system.

mod commands;
mod config;
mod output;
pub mod validate;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

pub use commands::{MaxwellReport, Outcome};
pub use config::{
    parse_params, resolve_params, Format, OutputSpec, RunConfig, Sweep, SystemKind, Tolerances,
    DEFAULT_STEPS, DEFAULT_WAVES,
};
pub use output::{
    num, to_csv, CsvRow, DiagramFile, Header, MaxwellMeta, Note, PhaseRow, ProfileRow, VERSION,
};

use crate::error::Error;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl CliError {
    pub fn new(code: u8, message: impl Into<String>) -> Self {
        Self {
            code,
            message: message.into(),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::InvalidParameter(_) | Error::LoadOutOfDomain { .. } => 2,
            Error::NoMaxwell { .. } | Error::NoHomoclinic { .. } | Error::BranchAbsent { .. } => 4,
            _ => 3,
        };
        CliError::new(code, e.to_string())
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "shocksens",
    version,
    about = "Energy barriers, fold and Maxwell loads of long elastic structures"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Localized and N-wave periodic energy barriers over a load sweep.
    Barrier(SweepArgs),
    /// Fixed-point branches and the localized turning point over a load sweep.
    Bifurcation(SweepArgs),
    /// Fold load, Maxwell load, collision deflection and E*.
    Maxwell(MaxwellArgs),
    /// Level sets of the oscillator energy at one load.
    Phase(PhaseArgs),
    /// The localized state at one load.
    Profile(ProfileArgs),
    /// Runs the built-in closed-form checks.
    Validate(ValidateArgs),
}

#[derive(Debug, Clone, Args)]
pub struct CommonArgs {
    #[arg(long, value_enum)]
    pub system: SystemKind,
    /// Inline JSON object or path to a JSON file of numeric parameters.
    #[arg(long, value_name = "JSON|PATH")]
    pub params: Option<String>,
    /// Output file; standard output when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Relative quadrature tolerance.
    #[arg(long, allow_negative_numbers = true)]
    pub tol_quad: Option<f64>,
    /// Absolute root tolerance in q and p.
    #[arg(long, allow_negative_numbers = true)]
    pub tol_root: Option<f64>,
}

#[derive(Debug, Clone, Args)]
pub struct RangeArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub p_min: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub p_max: Option<f64>,
}

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    #[command(flatten)]
    pub range: RangeArgs,
    /// Number of loads, both ends included.
    #[arg(long, default_value_t = DEFAULT_STEPS)]
    pub steps: usize,
    /// Number of periodic waves N in e_alpha_n.
    #[arg(long, default_value_t = DEFAULT_WAVES)]
    pub waves: u32,
}

#[derive(Debug, Clone, Args)]
pub struct MaxwellArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Load bracket to search; a system default when omitted.
    #[command(flatten)]
    pub range: RangeArgs,
}

#[derive(Debug, Clone, Args)]
pub struct PhaseArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    #[arg(long, allow_negative_numbers = true)]
    pub load: Option<f64>,
    /// Comma-separated energy levels; the separatrix level 0 is always added.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub levels: Vec<f64>,
    /// Samples in q per contour branch.
    #[arg(long, default_value_t = 400)]
    pub resolution: usize,
}

#[derive(Debug, Clone, Args)]
pub struct ProfileArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    #[arg(long, allow_negative_numbers = true)]
    pub load: Option<f64>,
    /// Arc-length spacing of oscillator profiles.
    #[arg(long, default_value_t = 0.01)]
    pub ds: f64,
}

#[derive(Debug, Clone, Args)]
pub struct ValidateArgs {
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// `csv` prints one PASS/FAIL line per check; `json` a check array.
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

fn build_config(
    common: &CommonArgs,
    range: Option<&RangeArgs>,
    steps: usize,
    n_waves: u32,
    default_format: Format,
) -> Result<RunConfig, CliError> {
    let parameters = resolve_params(common.system, parse_params(common.params.as_deref())?)?;
    let (lo, hi) = RunConfig::default_range(common.system, &parameters);
    let range = range.cloned().unwrap_or(RangeArgs {
        p_min: None,
        p_max: None,
    });
    let defaults = Tolerances::default();
    let cfg = RunConfig {
        system: common.system,
        parameters,
        sweep: Sweep {
            p_min: range.p_min.unwrap_or(lo),
            p_max: range.p_max.unwrap_or(hi),
            steps,
        },
        n_waves,
        tolerances: Tolerances {
            quadrature_rel: common.tol_quad.unwrap_or(defaults.quadrature_rel),
            root_abs: common.tol_root.unwrap_or(defaults.root_abs),
        },
        output: OutputSpec {
            path: common.out.clone(),
            format: common.format.unwrap_or(default_format),
        },
    };
    cfg.validate()?;
    Ok(cfg)
}

/// Load for `phase`/`profile`: `--load`, else the rod's `m` parameter.
fn point_load(cfg: &RunConfig, load: Option<f64>) -> Result<f64, CliError> {
    load.or_else(|| cfg.parameters.get("m").copied())
        .ok_or_else(|| CliError::new(2, "--load is required"))
}

/// Runs a parsed command. The result is not yet written anywhere.
pub fn execute(cli: &Cli) -> Result<(Outcome, Option<PathBuf>), CliError> {
    match &cli.command {
        Command::Barrier(a) | Command::Bifurcation(a) => {
            let cfg = build_config(&a.common, Some(&a.range), a.steps, a.waves, Format::Csv)?;
            let out = if matches!(cli.command, Command::Barrier(_)) {
                commands::barrier(&cfg)?
            } else {
                commands::bifurcation(&cfg)?
            };
            Ok((out, cfg.output.path))
        }
        Command::Maxwell(a) => {
            let cfg = build_config(&a.common, None, 2, DEFAULT_WAVES, Format::Json)?;
            let bracket = match (a.range.p_min, a.range.p_max) {
                (Some(lo), Some(hi)) => Some((lo, hi)),
                (None, None) => None,
                _ => {
                    return Err(CliError::new(
                        2,
                        "give both --p-min and --p-max, or neither",
                    ))
                }
            };
            Ok((commands::maxwell(&cfg, bracket)?, cfg.output.path))
        }
        Command::Phase(a) => {
            let cfg = build_config(&a.common, None, 2, DEFAULT_WAVES, Format::Csv)?;
            let load = point_load(&cfg, a.load)?;
            Ok((
                commands::phase(&cfg, load, &a.levels, a.resolution)?,
                cfg.output.path,
            ))
        }
        Command::Profile(a) => {
            let cfg = build_config(&a.common, None, 2, DEFAULT_WAVES, Format::Csv)?;
            let load = point_load(&cfg, a.load)?;
            Ok((commands::profile(&cfg, load, a.ds)?, cfg.output.path))
        }
        Command::Validate(a) => Ok((
            commands::validate(a.format.unwrap_or(Format::Csv)),
            a.out.clone(),
        )),
    }
}

/// Parses `args` (program name first), runs the command and writes its
/// output once. Returns the process exit code.
pub fn run<I, T>(args: I) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            let _ = e.print();
            return u8::try_from(code).unwrap_or(2);
        }
    };
    match execute(&cli) {
        Ok((outcome, path)) => {
            match path {
                Some(p) => {
                    if let Err(e) = std::fs::write(&p, &outcome.text) {
                        eprintln!("error: cannot write {}: {e}", p.display());
                        return 1;
                    }
                }
                None => {
                    use std::io::Write;
                    let mut out = std::io::stdout().lock();
                    match out.write_all(outcome.text.as_bytes()).and_then(|_| out.flush()) {
                        Ok(()) => {}
                        Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => {}
                        Err(e) => {
                            eprintln!("error: cannot write output: {e}");
                            return 1;
                        }
                    }
                }
            }
            outcome.code
        }
        Err(e) => {
            eprintln!("error: {}", e.message);
            e.code
        }
    }
}
