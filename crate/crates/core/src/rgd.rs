//! IRKA2: Riemannian gradient descent on reduced models with a backtracking
//! line search that keeps iterates stable, keeps the Cauchy index fixed and
//! decreases the H2 error strictly.
//!
//! One step of size `alpha` from `Hk` is the Petrov-Galerkin projection of
//! `alpha H + (1 - alpha) Hk` onto the Krylov spaces of `Hk`, which reduces to
//! the closed form in [`rgd_step`]. The four Gramians do not depend on
//! `alpha`, so the line search computes them once.

use std::fmt;

use crate::error::{Error, Result};
use crate::hardy::{self, H2Cache};
use crate::irka::{self, IterationRecord, RunConfig, RunResult, Termination};
use crate::linalg::{self, Mat};
use crate::lti::StateSpace;

/// Reduced Gramians above which a step counts as degenerate.
const GRAMIAN_COND_MAX: f64 = 1e14;

/// Solutions of
/// `A Pt Ek^T + E Pt Ak^T + B Bk^T = 0`,
/// `Ak Ph Ek^T + Ek Ph Ak^T + Bk Bk^T = 0`,
/// `A^T Qt Ek + E^T Qt Ak + C^T Ck = 0`,
/// `Ak^T Qh Ek + Ek^T Qh Ak + Ck^T Ck = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct GramianSet {
    pub p_tilde: Mat,
    pub p_hat: Mat,
    pub q_tilde: Mat,
    pub q_hat: Mat,
}

fn symmetrized(x: Mat) -> Mat {
    (&x + x.transpose()) * 0.5
}

pub fn compute_gramians(h: &StateSpace, hk: &StateSpace) -> Result<GramianSet> {
    if h.inputs() != hk.inputs() || h.outputs() != hk.outputs() {
        return Err(Error::DimensionMismatch("compute_gramians: input/output sizes differ".into()));
    }
    let (a, e) = (h.a(), h.e());
    let (ak, ek) = (hk.a(), hk.e());
    let (at, et, akt, ekt) = (a.transpose(), e.transpose(), ak.transpose(), ek.transpose());
    let p_tilde = linalg::solve_sylvester(a, e, ak, ek, &(h.b() * hk.b().transpose()))?;
    let p_hat = linalg::solve_sylvester(ak, ek, ak, ek, &(hk.b() * hk.b().transpose()))?;
    let q_tilde = linalg::solve_sylvester(&at, &et, &akt, &ekt, &(h.c().transpose() * hk.c()))?;
    let q_hat = linalg::solve_sylvester(&akt, &ekt, &akt, &ekt, &(hk.c().transpose() * hk.c()))?;
    Ok(GramianSet { p_tilde, p_hat: symmetrized(p_hat), q_tilde, q_hat: symmetrized(q_hat) })
}

/// The step of size `alpha` from `hk`:
/// `Ek - alpha (Ek - Qh^{-1} Qt^T E Pt Ph^{-1})`, likewise for `A`,
/// `Bk - alpha (Bk - Qh^{-1} Qt^T B)` and `Ck - alpha (Ck - C Pt Ph^{-1})`.
pub fn rgd_step(h: &StateSpace, hk: &StateSpace, g: &GramianSet, alpha: f64) -> Result<StateSpace> {
    if !(alpha >= 0.0 && alpha.is_finite()) {
        return Err(Error::InvalidArgument(format!("step size must be nonnegative, got {alpha}")));
    }
    let r = hk.order();
    if g.p_hat.shape() != (r, r) || g.p_tilde.shape() != (h.order(), r) {
        return Err(Error::DimensionMismatch("rgd_step: Gramians do not match the models".into()));
    }
    for m in [&g.p_hat, &g.q_hat] {
        let cond = linalg::condition_number(m);
        if !(cond <= GRAMIAN_COND_MAX) {
            return Err(Error::IllConditionedGramian(cond));
        }
    }
    let id = Mat::identity(r, r);
    let ph_inv = linalg::solve_linear(&g.p_hat, &id)?;
    let qh_inv = linalg::solve_linear(&g.q_hat, &id)?;
    let right = &g.p_tilde * ph_inv;
    let left = qh_inv * g.q_tilde.transpose();
    let step = |current: &Mat, target: Mat| current - (current - target) * alpha;
    StateSpace::new(
        step(hk.e(), &left * h.e() * &right),
        step(hk.a(), &left * h.a() * &right),
        step(hk.b(), &left * h.b()),
        step(hk.c(), h.c() * &right),
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RejectionReason {
    Unstable,
    CauchyChanged,
    ErrorIncreased,
    Degenerate,
}

impl RejectionReason {
    pub fn as_str(self) -> &'static str {
        match self {
            RejectionReason::Unstable => "unstable",
            RejectionReason::CauchyChanged => "cauchy-changed",
            RejectionReason::ErrorIncreased => "error-increased",
            RejectionReason::Degenerate => "degenerate",
        }
    }
}

impl fmt::Display for RejectionReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rejection {
    pub alpha: f64,
    pub reason: RejectionReason,
}

#[derive(Debug, Clone)]
pub struct LineSearchOutcome {
    pub alpha: f64,
    pub rom: StateSpace,
    pub rejections: Vec<Rejection>,
    /// H2 error of `rom`, strictly below the previous error.
    pub accepted_error: f64,
}

fn judge(
    h: &StateSpace,
    candidate: &StateSpace,
    prev_error: f64,
    ref_cauchy: Option<i32>,
    cache: &H2Cache,
) -> std::result::Result<f64, RejectionReason> {
    let (stable, _) = candidate.is_stable().map_err(|_| RejectionReason::Degenerate)?;
    if !stable {
        return Err(RejectionReason::Unstable);
    }
    if let (Some(reference), true) = (ref_cauchy, candidate.is_siso()) {
        let ci = candidate
            .pole_residue()
            .and_then(|pr| pr.cauchy_index())
            .map_err(|_| RejectionReason::Degenerate)?;
        if ci.value() != reference {
            return Err(RejectionReason::CauchyChanged);
        }
    }
    let err = hardy::h2_error(cache, h, candidate).map_err(|_| RejectionReason::Degenerate)?;
    if err >= prev_error {
        return Err(RejectionReason::ErrorIncreased);
    }
    Ok(err)
}

/// Backtracking over `alpha = 1, 1/2, 1/4, ...`; returns the rejections and the
/// first accepted candidate, if any step at or above `alpha_min` passes.
fn search(
    h: &StateSpace,
    hk: &StateSpace,
    g: &GramianSet,
    prev_error: f64,
    ref_cauchy: Option<i32>,
    cfg: &RunConfig,
    cache: &H2Cache,
) -> (Option<LineSearchOutcome>, Vec<Rejection>) {
    let mut rejections = Vec::new();
    let mut alpha = 1.0;
    while alpha >= cfg.alpha_min {
        let verdict = rgd_step(h, hk, g, alpha)
            .map_err(|_| RejectionReason::Degenerate)
            .and_then(|rom| judge(h, &rom, prev_error, ref_cauchy, cache).map(|err| (rom, err)));
        match verdict {
            Ok((rom, accepted_error)) => {
                let outcome = LineSearchOutcome { alpha, rom, rejections: std::mem::take(&mut rejections), accepted_error };
                return (Some(outcome), Vec::new());
            }
            Err(reason) => {
                log::debug!("alpha = {alpha:e} rejected: {reason}");
                rejections.push(Rejection { alpha, reason });
            }
        }
        alpha *= 0.5;
    }
    (None, rejections)
}

fn psd_factor(x: &Mat) -> Option<Mat> {
    let eig = x.clone().symmetric_eigen();
    let top = eig.eigenvalues.max();
    if !(top > 0.0) || eig.eigenvalues.iter().any(|&l| l <= f64::EPSILON * top) {
        return None;
    }
    Some(&eig.eigenvectors * Mat::from_diagonal(&eig.eigenvalues.map(f64::sqrt)))
}

/// Balanced realization of `hk` when its reduced Gramians are worse
/// conditioned than `threshold`; `None` when no change is needed or the
/// Gramians are too degenerate to factor. The transfer function is unchanged.
pub fn rebalanced(hk: &StateSpace, threshold: f64) -> Result<Option<StateSpace>> {
    let (ak, ek) = (hk.a(), hk.e());
    let (akt, ekt) = (ak.transpose(), ek.transpose());
    let p = symmetrized(linalg::solve_sylvester(ak, ek, ak, ek, &(hk.b() * hk.b().transpose()))?);
    let q = symmetrized(linalg::solve_sylvester(&akt, &ekt, &akt, &ekt, &(hk.c().transpose() * hk.c()))?);
    if linalg::condition_number(&p) <= threshold && linalg::condition_number(&q) <= threshold {
        return Ok(None);
    }
    let (Some(lp), Some(lq)) = (psd_factor(&p), psd_factor(&q)) else {
        return Ok(None);
    };
    let svd = (lq.transpose() * ek * &lp).svd(true, true);
    let sigma = &svd.singular_values;
    if !(sigma.min() > 0.0) {
        return Ok(None);
    }
    let scale = Mat::from_diagonal(&sigma.map(|x| x.sqrt().recip()));
    let right = lp * svd.v_t.expect("requested").transpose() * &scale;
    let left = scale * svd.u.expect("requested").transpose() * lq.transpose();
    hk.transformed(&left, &right).map(Some)
}

/// Finds the largest `alpha = 2^-j >= alpha_min` whose step is stable, keeps
/// the Cauchy index `ref_cauchy` (SISO only) and has H2 error strictly below
/// `prev_error`.
pub fn line_search(
    h: &StateSpace,
    hk: &StateSpace,
    g: &GramianSet,
    prev_error: f64,
    ref_cauchy: Option<i32>,
    cfg: &RunConfig,
    cache: &H2Cache,
) -> Result<LineSearchOutcome> {
    match search(h, hk, g, prev_error, ref_cauchy, cfg, cache) {
        (Some(outcome), _) => Ok(outcome),
        (None, rejections) => Err(Error::LineSearchExhausted { trials: rejections.len() }),
    }
}

/// IRKA2. Every recorded iterate is stable, the H2 error decreases strictly
/// and, for SISO models, the Cauchy index of the initial model is kept.
pub fn irka2(h: &StateSpace, rom0: &StateSpace, cfg: &RunConfig) -> Result<RunResult> {
    irka::check_start(h, rom0, cfg)?;
    let cache = H2Cache::new(h)?;
    let first = irka::record(h, &cache, 0, 0.0, rom0.clone())?;
    let ref_cauchy = first.cauchy_index;
    let mut prev_error = first.h2_error.expect("initial model is stable");
    let mut current = rom0.clone();
    let mut history: Vec<IterationRecord> = vec![first];
    let mut termination = Termination::MaxIterations;
    let mut gramian_computations = 0;
    let mut identity_rescues = 0;
    let mut realization_rescues = 0;
    for k in 1..=cfg.maxit {
        let wrap = |e| Error::IterateUndefined { k, source: Box::new(e) };
        if cfg.ehat_identity_rescue && linalg::condition_number(current.e()) > cfg.cond_threshold {
            log::info!("k={k}: reduced E is ill conditioned, switching to identity E");
            current = current.to_identity_e().map_err(wrap)?;
            identity_rescues += 1;
        }
        if cfg.ehat_identity_rescue {
            if let Some(balanced) = rebalanced(&current, cfg.cond_threshold).map_err(wrap)? {
                log::debug!("k={k}: rebalanced the reduced realization");
                current = balanced;
                realization_rescues += 1;
            }
        }
        let g = compute_gramians(h, &current).map_err(wrap)?;
        gramian_computations += 1;
        let (found, rejections) = search(h, &current, &g, prev_error, ref_cauchy, cfg, &cache);
        let Some(step) = found else {
            log::warn!("k={k}: line search exhausted after {} trials", rejections.len());
            termination = Termination::LineSearchExhausted;
            break;
        };
        let mut rec = irka::record(h, &cache, k, step.alpha, step.rom.clone()).map_err(wrap)?;
        rec.h2_error = Some(step.accepted_error);
        rec.rejections = step.rejections;
        let change = irka::relative_change(&current, &step.rom).map_err(wrap)?;
        rec.criterion = Some(change);
        log::debug!("irka2 k={k} alpha={:e} err={:e} crit={change:e}", step.alpha, step.accepted_error);
        history.push(rec);
        prev_error = step.accepted_error;
        current = step.rom;
        if change <= cfg.tol * step.alpha {
            termination = Termination::Converged;
            break;
        }
    }
    Ok(RunResult {
        final_rom: current,
        history,
        termination,
        fom_norm: cache.norm(),
        gramian_computations,
        identity_rescues,
        realization_rescues,
    })
}
