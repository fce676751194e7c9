//! Command-line front-end: dispersion tables, evolution snapshots,
//! asymptotic coefficient tables and the verification report, all as CSV.

pub mod commands;
pub mod config;

use std::ffi::OsString;
use std::io::{self, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

pub use commands::{cmd_dispersion, cmd_evolve, cmd_tables, cmd_verify, VerifyOutcome, TABLES_CSV_HEADER};
pub use config::{IcKind, RunConfig};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Validation(String),
    #[error(transparent)]
    Numerical(peridyn::Error),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: io::Error },
    #[error("{0} verification check(s) failed")]
    ChecksFailed(usize),
}

impl From<peridyn::Error> for CliError {
    fn from(e: peridyn::Error) -> Self {
        match e {
            peridyn::Error::InvalidArgument(msg) => CliError::Validation(msg),
            other => CliError::Numerical(other),
        }
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation(_) => 1,
            CliError::Numerical(_) | CliError::ChecksFailed(_) => 2,
            CliError::Io { .. } => 3,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "peridyn", version, about = "Peridynamic dispersion and wave propagation")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Tabulate ω(ξ) and the group velocity over ξδ ∈ [1e-3, 1e4].
    Dispersion(Overrides),
    /// Evolve Gaussian or dipole initial data and sample the field.
    Evolve(Overrides),
    /// Low/high-frequency coefficients and large-scale group velocities.
    Tables(Overrides),
    /// Run the direct-space verification matrix.
    Verify {
        #[command(flatten)]
        overrides: Overrides,
        /// Multiplies every check tolerance.
        #[arg(long, hide = true, default_value_t = 1.0)]
        tolerance_scale: f64,
    },
}

/// Flags shared by all subcommands; they take precedence over `--config`.
#[derive(Debug, Clone, Default, Args)]
pub struct Overrides {
    /// `key = value` configuration file.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub dim: Option<usize>,
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub delta: Option<f64>,
    #[arg(long)]
    pub kappa: Option<f64>,
    #[arg(long)]
    pub rho: Option<f64>,
    #[arg(long)]
    pub sigma: Option<f64>,
    /// Comma-separated, e.g. `0,1,2`; an empty string means no times.
    #[arg(long, allow_hyphen_values = true)]
    pub times: Option<String>,
    /// `gaussian-radial` or `dipole`.
    #[arg(long)]
    pub ic: Option<String>,
    #[arg(long)]
    pub lmax: Option<usize>,
    #[arg(long)]
    pub grid_n: Option<usize>,
    #[arg(long)]
    pub grid_rmax: Option<f64>,
    #[arg(long)]
    pub grid_ntheta: Option<usize>,
    #[arg(long)]
    pub grid_nphi: Option<usize>,
    #[arg(long)]
    pub xi_points: Option<usize>,
    /// Dimensions for `tables`, comma-separated.
    #[arg(long)]
    pub dims: Option<String>,
    /// Exponents for `tables`, comma-separated.
    #[arg(long)]
    pub alphas: Option<String>,
    /// Output file; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

impl Overrides {
    /// Defaults, then the configuration file, then flags.
    pub fn resolve(&self) -> Result<RunConfig, CliError> {
        let mut cfg = RunConfig::default();
        if let Some(path) = &self.config {
            cfg.apply_file(path)?;
        }
        let numeric: [(&str, Option<String>); 13] = [
            ("dim", self.dim.map(|v| v.to_string())),
            ("alpha", self.alpha.map(|v| v.to_string())),
            ("delta", self.delta.map(|v| v.to_string())),
            ("kappa", self.kappa.map(|v| v.to_string())),
            ("rho", self.rho.map(|v| v.to_string())),
            ("sigma", self.sigma.map(|v| v.to_string())),
            ("lmax", self.lmax.map(|v| v.to_string())),
            ("grid_n", self.grid_n.map(|v| v.to_string())),
            ("grid_rmax", self.grid_rmax.map(|v| v.to_string())),
            ("grid_ntheta", self.grid_ntheta.map(|v| v.to_string())),
            ("grid_nphi", self.grid_nphi.map(|v| v.to_string())),
            ("xi_points", self.xi_points.map(|v| v.to_string())),
            ("ic", self.ic.clone()),
        ];
        for (key, value) in numeric {
            if let Some(v) = value {
                cfg.set(key, &v)?;
            }
        }
        for (key, value) in [("times", &self.times), ("dims", &self.dims), ("alphas", &self.alphas)] {
            if let Some(v) = value {
                cfg.set(key, v)?;
            }
        }
        if let Some(out) = &self.out {
            cfg.out = Some(out.clone());
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

fn emit(cfg: &RunConfig, text: &str, stdout: &mut dyn Write) -> Result<(), CliError> {
    match &cfg.out {
        Some(path) => std::fs::write(path, text).map_err(|source| CliError::Io {
            path: path.clone(),
            source,
        }),
        None => stdout.write_all(text.as_bytes()).map_err(|source| CliError::Io {
            path: PathBuf::from("<stdout>"),
            source,
        }),
    }
}

/// Executes a parsed command line.
pub fn execute(cli: &Cli, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<(), CliError> {
    match &cli.command {
        Command::Dispersion(o) => {
            let cfg = o.resolve()?;
            emit(&cfg, &cmd_dispersion(&cfg)?, stdout)
        }
        Command::Evolve(o) => {
            let cfg = o.resolve()?;
            emit(&cfg, &cmd_evolve(&cfg)?, stdout)
        }
        Command::Tables(o) => {
            let cfg = o.resolve()?;
            emit(&cfg, &cmd_tables(&cfg)?, stdout)
        }
        Command::Verify {
            overrides,
            tolerance_scale,
        } => {
            let cfg = overrides.resolve()?;
            if !(*tolerance_scale > 0.0 && tolerance_scale.is_finite()) {
                return Err(CliError::Validation("tolerance scale must be positive".into()));
            }
            let outcome = cmd_verify(&cfg, *tolerance_scale)?;
            emit(&cfg, &outcome.csv, stdout)?;
            if outcome.failures.is_empty() {
                Ok(())
            } else {
                for line in &outcome.failures {
                    let _ = writeln!(stderr, "FAILED {line}");
                }
                Err(CliError::ChecksFailed(outcome.failures.len()))
            }
        }
    }
}

/// Parses `args` and runs the command; returns the process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            if e.use_stderr() {
                let _ = write!(stderr, "{}", e.render());
                return 1;
            }
            let _ = write!(stdout, "{}", e.render());
            return 0;
        }
    };
    match execute(&cli, stdout, stderr) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}
