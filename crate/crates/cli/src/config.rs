//! Command-line arguments and the optional TOML config file.
//!
//! Flags override config-file values, which override the defaults.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, ValueEnum};
use h2ror::RunConfig;
use serde::Deserialize;

use crate::error::{CliError, Result};
use crate::model::{ModelSource, RomSource};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Command {
    /// Classical IRKA.
    Irka,
    /// IRKA with a stability- and Cauchy-index-preserving line search.
    Irka2,
    /// H2 norm of the model.
    Norm,
    /// First-order optimality residual of a reduced model (given by --rom0).
    Verify,
    /// Order, dimensions, poles and stability of the model.
    Info,
}

impl Command {
    pub fn as_str(self) -> &'static str {
        match self {
            Command::Irka => "irka",
            Command::Irka2 => "irka2",
            Command::Norm => "norm",
            Command::Verify => "verify",
            Command::Info => "info",
        }
    }
}

#[derive(Debug, Clone, Parser)]
#[command(name = "h2ror", version, about = "H2-optimal model reduction with IRKA and IRKA2", allow_negative_numbers = true)]
pub struct Args {
    #[arg(value_enum)]
    pub command: Command,
    /// builtin:example1, builtin:random:<n>:<m>:<p>, or a directory with E.mtx A.mtx B.mtx C.mtx
    #[arg(long)]
    pub model: String,
    /// default:<r>, diag:<p1>,<p2>,..., a built-in model or a directory of matrices
    #[arg(long, alias = "rom")]
    pub rom0: Option<String>,
    /// Reduced order, used when --rom0 is absent
    #[arg(long)]
    pub r: Option<usize>,
    #[arg(long)]
    pub maxit: Option<usize>,
    #[arg(long)]
    pub alpha_min: Option<f64>,
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long)]
    pub cond_threshold: Option<f64>,
    /// Disable the reduced realization rescues of IRKA2
    #[arg(long)]
    pub no_rescue: bool,
    /// Output directory
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Seed for builtin:random models
    #[arg(long)]
    pub seed: Option<u64>,
    /// TOML file with defaults for the options above
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Record wall-clock timings in the report (makes it non-reproducible)
    #[arg(long)]
    pub timings: bool,
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub maxit: Option<usize>,
    pub alpha_min: Option<f64>,
    pub tol: Option<f64>,
    pub cond_threshold: Option<f64>,
    pub ehat_identity_rescue: Option<bool>,
    pub r: Option<usize>,
    pub seed: Option<u64>,
    pub rom0: Option<String>,
}

impl FileConfig {
    pub fn parse(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Self::parse(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
    }
}

/// Everything a run needs, after merging flags, config file and defaults.
#[derive(Debug, Clone, PartialEq)]
pub struct Settings {
    pub command: Command,
    pub model: ModelSource,
    pub rom0: Option<RomSource>,
    pub run: RunConfig,
    pub seed: u64,
    pub out: Option<PathBuf>,
    pub timings: bool,
}

impl Settings {
    pub fn resolve(args: &Args) -> Result<Self> {
        let file = match &args.config {
            Some(path) => FileConfig::read(path)?,
            None => FileConfig::default(),
        };
        Self::merge(args, &file)
    }

    pub fn merge(args: &Args, file: &FileConfig) -> Result<Self> {
        let defaults = RunConfig::default();
        let run = RunConfig {
            maxit: args.maxit.or(file.maxit).unwrap_or(defaults.maxit),
            alpha_min: args.alpha_min.or(file.alpha_min).unwrap_or(defaults.alpha_min),
            tol: args.tol.or(file.tol).unwrap_or(defaults.tol),
            cond_threshold: args.cond_threshold.or(file.cond_threshold).unwrap_or(defaults.cond_threshold),
            ehat_identity_rescue: if args.no_rescue {
                false
            } else {
                file.ehat_identity_rescue.unwrap_or(defaults.ehat_identity_rescue)
            },
        };
        run.validate()?;
        let seed = args.seed.or(file.seed).unwrap_or(0);
        let model = ModelSource::parse(&args.model, seed)?;
        let rom0 = match (args.rom0.as_deref().or(file.rom0.as_deref()), args.r.or(file.r)) {
            (Some(spec), _) => Some(RomSource::parse(spec, seed)?),
            (None, Some(r)) if r > 0 => Some(RomSource::Default(r)),
            (None, Some(_)) => return Err(CliError::Usage("--r must be positive".into())),
            (None, None) => None,
        };
        let needs_rom = matches!(args.command, Command::Irka | Command::Irka2 | Command::Verify);
        if needs_rom && rom0.is_none() {
            return Err(CliError::Usage(format!("{} needs --rom0 or --r", args.command.as_str())));
        }
        let needs_out = matches!(args.command, Command::Irka | Command::Irka2);
        if needs_out && args.out.is_none() {
            return Err(CliError::Usage(format!("{} needs --out", args.command.as_str())));
        }
        Ok(Settings { command: args.command, model, rom0, run, seed, out: args.out.clone(), timings: args.timings })
    }
}
