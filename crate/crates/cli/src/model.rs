//! Model sources: built-in examples and Matrix Market directories.

use std::fmt;
use std::path::{Path, PathBuf};

use h2ror::{models, Mat, StateSpace};

use crate::error::{CliError, Result};
use crate::mtx;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ModelSource {
    Example1,
    /// Stable random standard system of order `n` with `m` inputs and `p` outputs.
    Random { seed: u64, n: usize, m: usize, p: usize },
    /// Directory holding `A.mtx`, `B.mtx`, `C.mtx` and optionally `E.mtx`
    /// (identity when absent), or the same with a `rom_` prefix.
    Files(PathBuf),
}

impl ModelSource {
    /// `builtin:example1`, `builtin:random:<n>:<m>:<p>` (with `seed`) or a directory.
    pub fn parse(spec: &str, seed: u64) -> Result<Self> {
        match spec.strip_prefix("builtin:") {
            Some("example1") => Ok(ModelSource::Example1),
            Some(rest) => {
                let dims: Vec<&str> = rest.strip_prefix("random:").unwrap_or("").split(':').collect();
                let parsed: Vec<usize> = dims.iter().filter_map(|d| d.parse().ok()).collect();
                match parsed[..] {
                    [n, m, p] if dims.len() == 3 && n > 0 && m > 0 && p > 0 => Ok(ModelSource::Random { seed, n, m, p }),
                    _ => Err(CliError::Usage(format!(
                        "unknown built-in model '{spec}' (expected builtin:example1 or builtin:random:<n>:<m>:<p>)"
                    ))),
                }
            }
            None => Ok(ModelSource::Files(PathBuf::from(spec))),
        }
    }
}

impl fmt::Display for ModelSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModelSource::Example1 => write!(f, "builtin:example1"),
            ModelSource::Random { seed, n, m, p } => write!(f, "builtin:random:{n}:{m}:{p} (seed {seed})"),
            ModelSource::Files(dir) => write!(f, "{}", dir.display()),
        }
    }
}

pub fn load_dir(dir: &Path) -> Result<StateSpace> {
    if !dir.is_dir() {
        return Err(CliError::Usage(format!("model directory '{}' does not exist", dir.display())));
    }
    // reduced models written by this tool carry a `rom_` prefix
    let prefix = if !dir.join("A.mtx").exists() && dir.join("rom_A.mtx").exists() { "rom_" } else { "" };
    let file = |name: &str| dir.join(format!("{prefix}{name}.mtx"));
    let a = mtx::read_matrix(&file("A"))?;
    let b = mtx::read_matrix(&file("B"))?;
    let c = mtx::read_matrix(&file("C"))?;
    let e_path = file("E");
    let e = if e_path.exists() { mtx::read_matrix(&e_path)? } else { Mat::identity(a.nrows(), a.ncols()) };
    Ok(StateSpace::new(e, a, b, c)?)
}

pub fn load_model(src: &ModelSource) -> Result<StateSpace> {
    match src {
        ModelSource::Example1 => Ok(models::example1()),
        ModelSource::Random { seed, n, m, p } => Ok(models::random_stable(*seed, *n, *m, *p)?),
        ModelSource::Files(dir) => load_dir(dir),
    }
}

pub fn save_dir(dir: &Path, prefix: &str, sys: &StateSpace) -> Result<()> {
    for (name, m) in [("E", sys.e()), ("A", sys.a()), ("B", sys.b()), ("C", sys.c())] {
        mtx::write_matrix(&dir.join(format!("{prefix}{name}.mtx")), m)?;
    }
    Ok(())
}

/// Initial (or, for `verify`, candidate) reduced model.
#[derive(Debug, Clone, PartialEq)]
pub enum RomSource {
    /// `E = I`, `A = diag(-1, ..., -r)`, unit `B` and `C`.
    Default(usize),
    /// `E = I`, `A = diag(poles)`, unit `B` and `C`.
    Diagonal(Vec<f64>),
    Model(ModelSource),
}

impl RomSource {
    /// `default:<r>`, `diag:<p1>,<p2>,...`, or anything [`ModelSource::parse`] accepts.
    pub fn parse(spec: &str, seed: u64) -> Result<Self> {
        if let Some(r) = spec.strip_prefix("default:") {
            let r: usize = r.parse().map_err(|_| CliError::Usage(format!("bad reduced order in '{spec}'")))?;
            if r == 0 {
                return Err(CliError::Usage("reduced order must be positive".into()));
            }
            return Ok(RomSource::Default(r));
        }
        if let Some(list) = spec.strip_prefix("diag:") {
            let poles = list
                .split(',')
                .map(|x| x.trim().parse::<f64>())
                .collect::<std::result::Result<Vec<_>, _>>()
                .map_err(|_| CliError::Usage(format!("bad pole list in '{spec}'")))?;
            if poles.is_empty() || poles.iter().any(|p| !p.is_finite()) {
                return Err(CliError::Usage(format!("bad pole list in '{spec}'")));
            }
            return Ok(RomSource::Diagonal(poles));
        }
        Ok(RomSource::Model(ModelSource::parse(spec, seed)?))
    }

    pub fn load(&self, inputs: usize, outputs: usize) -> Result<StateSpace> {
        match self {
            RomSource::Default(r) => Ok(models::default_rom0(*r, inputs, outputs)),
            RomSource::Diagonal(poles) => Ok(models::diagonal_rom(poles, inputs, outputs)),
            RomSource::Model(src) => load_model(src),
        }
    }
}

impl fmt::Display for RomSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RomSource::Default(r) => write!(f, "default:{r}"),
            RomSource::Diagonal(poles) => {
                let list: Vec<String> = poles.iter().map(|p| p.to_string()).collect();
                write!(f, "diag:{}", list.join(","))
            }
            RomSource::Model(src) => write!(f, "{src}"),
        }
    }
}
