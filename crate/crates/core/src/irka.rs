//! Classical IRKA and the run bookkeeping shared with IRKA2.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::hardy::{self, H2Cache};
use crate::interp;
use crate::lti::StateSpace;
use crate::rgd::Rejection;

/// Iteration controls.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunConfig {
    pub maxit: usize,
    pub alpha_min: f64,
    pub tol: f64,
    /// IRKA2 replaces `Ehat` by the identity when its condition number exceeds this.
    pub cond_threshold: f64,
    pub ehat_identity_rescue: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self { maxit: 100, alpha_min: 1e-20, tol: 1e-4, cond_threshold: 1e4, ehat_identity_rescue: true }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        if self.maxit < 1 {
            return Err(Error::InvalidArgument("maxit must be at least 1".into()));
        }
        if !(self.alpha_min > 0.0 && self.alpha_min <= 1.0) {
            return Err(Error::InvalidArgument(format!("alpha_min must lie in (0, 1], got {}", self.alpha_min)));
        }
        if !(self.tol > 0.0 && self.tol.is_finite()) {
            return Err(Error::InvalidArgument(format!("tol must be positive, got {}", self.tol)));
        }
        if !(self.cond_threshold >= 1.0) {
            return Err(Error::InvalidArgument(format!(
                "cond_threshold must be at least 1, got {}",
                self.cond_threshold
            )));
        }
        Ok(())
    }
}

/// Diagnostics for one iterate. Record `k = 0` holds the initial model and has
/// `alpha = 0`.
#[derive(Debug, Clone)]
pub struct IterationRecord {
    pub k: usize,
    pub alpha: f64,
    pub rom: StateSpace,
    pub stable: bool,
    /// Absolute H2 error, `None` for unstable iterates.
    pub h2_error: Option<f64>,
    /// SISO models with simple poles only.
    pub cauchy_index: Option<i32>,
    pub poles: Vec<Complex64>,
    /// `||H_{k-1} - H_k|| / ||H_k||`, `None` unless both iterates are stable.
    pub criterion: Option<f64>,
    /// Step sizes tried and rejected before `alpha` was accepted.
    pub rejections: Vec<Rejection>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Termination {
    Converged,
    MaxIterations,
    LineSearchExhausted,
}

impl Termination {
    pub fn as_str(self) -> &'static str {
        match self {
            Termination::Converged => "converged",
            Termination::MaxIterations => "max-iterations",
            Termination::LineSearchExhausted => "line-search-exhausted",
        }
    }
}

#[derive(Debug, Clone)]
pub struct RunResult {
    pub final_rom: StateSpace,
    pub history: Vec<IterationRecord>,
    pub termination: Termination,
    /// `||H||_H2` of the full model.
    pub fom_norm: f64,
    /// Number of Gramian sets computed (IRKA2 only).
    pub gramian_computations: usize,
    /// Number of times `Ehat` was replaced by the identity (IRKA2 only).
    pub identity_rescues: usize,
    /// Number of times the reduced realization was rebalanced (IRKA2 only).
    pub realization_rescues: usize,
}

impl RunResult {
    /// Final H2 error divided by `||H||_H2`, when the final model is stable.
    pub fn relative_error(&self) -> Option<f64> {
        let last = self.history.last()?;
        last.h2_error.map(|e| e / self.fom_norm)
    }
}

pub(crate) fn record(h: &StateSpace, cache: &H2Cache, k: usize, alpha: f64, rom: StateSpace) -> Result<IterationRecord> {
    let poles = rom.poles()?;
    let stable = poles.iter().all(|z| z.re < 0.0);
    let h2_error = if stable { Some(hardy::h2_error(cache, h, &rom)?) } else { None };
    let cauchy_index = if rom.is_siso() {
        rom.pole_residue().ok().and_then(|pr| pr.cauchy_index().ok()).map(|c| c.value())
    } else {
        None
    };
    Ok(IterationRecord { k, alpha, rom, stable, h2_error, cauchy_index, poles, criterion: None, rejections: Vec::new() })
}

/// `||prev - next|| / ||next||`.
pub(crate) fn relative_change(prev: &StateSpace, next: &StateSpace) -> Result<f64> {
    let delta = hardy::h2_norm(&prev.difference(next)?)?;
    Ok(delta / hardy::h2_norm(next)?)
}

pub(crate) fn check_start(h: &StateSpace, rom0: &StateSpace, cfg: &RunConfig) -> Result<()> {
    cfg.validate()?;
    if h.inputs() != rom0.inputs() || h.outputs() != rom0.outputs() {
        return Err(Error::DimensionMismatch(format!(
            "model is {}x{}, initial reduced model is {}x{}",
            h.outputs(),
            h.inputs(),
            rom0.outputs(),
            rom0.inputs()
        )));
    }
    if rom0.order() >= h.order() {
        return Err(Error::InvalidArgument(format!(
            "reduced order {} must be below the model order {}",
            rom0.order(),
            h.order()
        )));
    }
    let (stable, abscissa) = rom0.is_stable()?;
    if !stable {
        return Err(Error::Unstable(abscissa));
    }
    rom0.pole_residue()?;
    Ok(())
}

/// Classical IRKA: `H_{k+1}` interpolates `H` at the reflected poles of `H_k`
/// in its residue directions. Unstable iterates are recorded and the
/// iteration carries on from them.
pub fn irka(h: &StateSpace, rom0: &StateSpace, cfg: &RunConfig) -> Result<RunResult> {
    check_start(h, rom0, cfg)?;
    let cache = H2Cache::new(h)?;
    let mut history = vec![record(h, &cache, 0, 0.0, rom0.clone())?];
    let mut termination = Termination::MaxIterations;
    for k in 1..=cfg.maxit {
        let current = &history.last().expect("history is never empty").rom;
        let wrap = |e| Error::IterateUndefined { k, source: Box::new(e) };
        let next = interp::hermite_interpolant(h, current).map_err(wrap)?;
        let mut rec = record(h, &cache, k, 1.0, next).map_err(wrap)?;
        let prev_stable = history[k - 1].stable;
        if prev_stable && rec.stable {
            rec.criterion = Some(relative_change(&history[k - 1].rom, &rec.rom).map_err(wrap)?);
        }
        log::debug!("irka k={k} stable={} err={:?} crit={:?}", rec.stable, rec.h2_error, rec.criterion);
        let done = rec.criterion.is_some_and(|c| c <= cfg.tol);
        history.push(rec);
        if done {
            termination = Termination::Converged;
            break;
        }
    }
    Ok(RunResult {
        final_rom: history.last().expect("history is never empty").rom.clone(),
        history,
        termination,
        fom_norm: cache.norm(),
        gramian_computations: 0,
        identity_rescues: 0,
        realization_rescues: 0,
    })
}
