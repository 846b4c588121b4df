//! Run report (JSON) and plot data (CSV).

use std::fs;
use std::path::Path;

use h2ror::{Complex64, IterationRecord, Mat, OptimalityResidual, RunConfig, RunResult, StateSpace};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConfigEcho {
    pub maxit: usize,
    pub alpha_min: f64,
    pub tol: f64,
    pub cond_threshold: f64,
    pub ehat_identity_rescue: bool,
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rom0: Option<String>,
}

impl ConfigEcho {
    pub fn new(cfg: &RunConfig, seed: u64, rom0: Option<String>) -> Self {
        Self {
            maxit: cfg.maxit,
            alpha_min: cfg.alpha_min,
            tol: cfg.tol,
            cond_threshold: cfg.cond_threshold,
            ehat_identity_rescue: cfg.ehat_identity_rescue,
            seed,
            rom0,
        }
    }
}

/// Dense matrices as row lists.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Realization {
    pub e: Vec<Vec<f64>>,
    pub a: Vec<Vec<f64>>,
    pub b: Vec<Vec<f64>>,
    pub c: Vec<Vec<f64>>,
}

fn rows(m: &Mat) -> Vec<Vec<f64>> {
    (0..m.nrows()).map(|i| m.row(i).iter().copied().collect()).collect()
}

fn matrix(rows: &[Vec<f64>], cols_if_empty: usize) -> Result<Mat> {
    let cols = rows.first().map_or(cols_if_empty, Vec::len);
    if rows.iter().any(|r| r.len() != cols) {
        return Err(CliError::Report("ragged matrix".into()));
    }
    Ok(Mat::from_fn(rows.len(), cols, |i, j| rows[i][j]))
}

impl Realization {
    pub fn of(sys: &StateSpace) -> Self {
        Self { e: rows(sys.e()), a: rows(sys.a()), b: rows(sys.b()), c: rows(sys.c()) }
    }

    pub fn to_state_space(&self) -> Result<StateSpace> {
        let n = self.a.len();
        Ok(StateSpace::new(matrix(&self.e, n)?, matrix(&self.a, n)?, matrix(&self.b, 0)?, matrix(&self.c, n)?)?)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelSummary {
    pub order: usize,
    pub inputs: usize,
    pub outputs: usize,
    pub stable: bool,
    pub spectral_abscissa: f64,
    /// `[re, im]` pairs.
    pub poles: Vec<[f64; 2]>,
    pub h2_norm: Option<f64>,
}

pub fn pole_pairs(poles: &[Complex64]) -> Vec<[f64; 2]> {
    poles.iter().map(|z| [z.re, z.im]).collect()
}

impl ModelSummary {
    pub fn of(sys: &StateSpace) -> Result<Self> {
        let poles = sys.poles()?;
        let (stable, spectral_abscissa) = sys.is_stable()?;
        let h2_norm = if stable { Some(h2ror::hardy::h2_norm(sys)?) } else { None };
        Ok(Self {
            order: sys.order(),
            inputs: sys.inputs(),
            outputs: sys.outputs(),
            stable,
            spectral_abscissa,
            poles: pole_pairs(&poles),
            h2_norm,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RejectionEntry {
    pub alpha: f64,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RecordEntry {
    pub k: usize,
    pub alpha: f64,
    pub stable: bool,
    pub h2_error: Option<f64>,
    pub relative_h2_error: Option<f64>,
    pub cauchy_index: Option<i32>,
    pub criterion: Option<f64>,
    pub poles: Vec<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub rejections: Vec<RejectionEntry>,
}

impl RecordEntry {
    pub fn of(rec: &IterationRecord, fom_norm: f64) -> Self {
        Self {
            k: rec.k,
            alpha: rec.alpha,
            stable: rec.stable,
            h2_error: rec.h2_error,
            relative_h2_error: rec.h2_error.map(|e| e / fom_norm),
            cauchy_index: rec.cauchy_index,
            criterion: rec.criterion,
            poles: pole_pairs(&rec.poles),
            rejections: rec
                .rejections
                .iter()
                .map(|r| RejectionEntry { alpha: r.alpha, reason: r.reason.as_str().to_string() })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResidualEntry {
    pub aggregate: f64,
    pub right: Vec<f64>,
    pub left: Vec<f64>,
    pub hermite: Vec<f64>,
}

impl From<&OptimalityResidual> for ResidualEntry {
    fn from(r: &OptimalityResidual) -> Self {
        Self { aggregate: r.aggregate, right: r.right_res.clone(), left: r.left_res.clone(), hermite: r.hermite_res.clone() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunSection {
    pub algorithm: String,
    pub termination: String,
    /// Set when the line search ran out of step sizes.
    pub warning: Option<String>,
    pub iterations: usize,
    pub history: Vec<RecordEntry>,
    pub final_rom: Realization,
    pub final_relative_h2_error: Option<f64>,
    pub gramian_computations: usize,
    pub identity_rescues: usize,
    pub realization_rescues: usize,
}

impl RunSection {
    pub fn of(algorithm: &str, res: &RunResult) -> Self {
        let warning = match res.termination {
            h2ror::Termination::LineSearchExhausted => Some("line-search-exhausted".to_string()),
            _ => None,
        };
        Self {
            algorithm: algorithm.to_string(),
            termination: res.termination.as_str().to_string(),
            warning,
            iterations: res.history.len().saturating_sub(1),
            history: res.history.iter().map(|r| RecordEntry::of(r, res.fom_norm)).collect(),
            final_rom: Realization::of(&res.final_rom),
            final_relative_h2_error: res.relative_error(),
            gramian_computations: res.gramian_computations,
            identity_rescues: res.identity_rescues,
            realization_rescues: res.realization_rescues,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhaseTiming {
    pub phase: String,
    pub seconds: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub command: String,
    pub model: String,
    pub config: ConfigEcho,
    pub fom: ModelSummary,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rom: Option<ModelSummary>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub run: Option<RunSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub optimality: Option<ResidualEntry>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub timings: Vec<PhaseTiming>,
}

impl RunReport {
    pub fn to_json(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(self).map_err(|e| CliError::Report(e.to_string()))?;
        s.push('\n');
        Ok(s)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| CliError::Report(e.to_string()))
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        fs::write(path, self.to_json()?).map_err(|e| CliError::io(path, e))
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Self::from_json(&text)
    }
}

fn fmt_opt<T: ToString>(x: Option<T>) -> String {
    x.map(|v| v.to_string()).unwrap_or_default()
}

/// CSV with `k, alpha, stable, h2_error, cauchy_index, pole_real_i, pole_imag_i`.
/// Undefined values are empty cells; the pole columns run to the largest order
/// in the history.
pub fn plot_data(history: &[RecordEntry]) -> String {
    let width = history.iter().map(|r| r.poles.len()).max().unwrap_or(0);
    let mut header = vec!["k".to_string(), "alpha".into(), "stable".into(), "h2_error".into(), "cauchy_index".into()];
    for i in 1..=width {
        header.push(format!("pole_real_{i}"));
        header.push(format!("pole_imag_{i}"));
    }
    let mut out = header.join(",");
    out.push('\n');
    for r in history {
        let mut cells = vec![
            r.k.to_string(),
            r.alpha.to_string(),
            r.stable.to_string(),
            fmt_opt(r.h2_error),
            fmt_opt(r.cauchy_index),
        ];
        for i in 0..width {
            match r.poles.get(i) {
                Some([re, im]) => cells.extend([re.to_string(), im.to_string()]),
                None => cells.extend([String::new(), String::new()]),
            }
        }
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

pub fn emit_plot_data(report: &RunReport, path: &Path) -> Result<()> {
    let history = report.run.as_ref().map(|r| r.history.as_slice()).unwrap_or(&[]);
    fs::write(path, plot_data(history)).map_err(|e| CliError::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn entry(k: usize, err: Option<f64>) -> RecordEntry {
        RecordEntry {
            k,
            alpha: 0.5,
            stable: err.is_some(),
            h2_error: err,
            relative_h2_error: err,
            cauchy_index: Some(1),
            criterion: None,
            poles: vec![[-1.0, 2.0], [-1.0, -2.0]],
            rejections: vec![RejectionEntry { alpha: 1.0, reason: "unstable".into() }],
        }
    }

    #[test]
    fn empty_history_is_header_only() {
        assert_eq!(plot_data(&[]), "k,alpha,stable,h2_error,cauchy_index\n");
    }

    #[test]
    fn undefined_error_is_empty_cell() {
        let csv = plot_data(&[entry(0, Some(0.25)), entry(1, None)]);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "k,alpha,stable,h2_error,cauchy_index,pole_real_1,pole_imag_1,pole_real_2,pole_imag_2");
        assert_eq!(lines[1], "0,0.5,true,0.25,1,-1,2,-1,-2");
        assert_eq!(lines[2], "1,0.5,false,,1,-1,2,-1,-2");
    }

    #[test]
    fn realization_round_trip() {
        let h = h2ror::models::example1();
        assert_eq!(Realization::of(&h).to_state_space().unwrap(), h);
    }

    fn report_with(values: Vec<f64>) -> RunReport {
        let h = h2ror::models::example1();
        let mut fom = ModelSummary::of(&h).unwrap();
        fom.spectral_abscissa = values[0];
        RunReport {
            command: "irka2".into(),
            model: "builtin:example1".into(),
            config: ConfigEcho::new(&RunConfig::default(), 7, Some("default:2".into())),
            fom,
            rom: None,
            run: Some(RunSection {
                algorithm: "irka2".into(),
                termination: "converged".into(),
                warning: None,
                iterations: 1,
                history: values.iter().enumerate().map(|(k, &v)| entry(k, Some(v))).collect(),
                final_rom: Realization::of(&h),
                final_relative_h2_error: Some(values[values.len() - 1]),
                gramian_computations: 1,
                identity_rescues: 0,
                realization_rescues: 0,
            }),
            optimality: Some(ResidualEntry { aggregate: values[0], right: values.clone(), left: values.clone(), hermite: values }),
            timings: vec![PhaseTiming { phase: "run".into(), seconds: 0.1 }],
        }
    }

    proptest! {
        #[test]
        fn json_round_trip(values in prop::collection::vec(prop::num::f64::NORMAL | prop::num::f64::SUBNORMAL | prop::num::f64::ZERO, 1..6)) {
            let report = report_with(values);
            let text = report.to_json().unwrap();
            prop_assert_eq!(RunReport::from_json(&text).unwrap(), report);
        }
    }
}
