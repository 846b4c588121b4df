use std::fs;
use std::time::Instant;

use h2ror::{hardy, irka, rgd, RunResult, StateSpace};

use crate::config::{Command, Settings};
use crate::error::{CliError, Result};
use crate::model::{self, load_model};
use crate::report::{self, ConfigEcho, ModelSummary, PhaseTiming, ResidualEntry, RunReport, RunSection};

struct Clock {
    enabled: bool,
    phases: Vec<PhaseTiming>,
}

impl Clock {
    fn time<T>(&mut self, phase: &str, f: impl FnOnce() -> T) -> T {
        let start = Instant::now();
        let out = f();
        if self.enabled {
            self.phases.push(PhaseTiming { phase: phase.to_string(), seconds: start.elapsed().as_secs_f64() });
        }
        out
    }
}

fn optimality(h: &StateSpace, rom: &StateSpace, norm_h: f64) -> Option<ResidualEntry> {
    match hardy::optimality_residual_scaled(h, rom, norm_h) {
        Ok(res) => Some(ResidualEntry::from(&res)),
        Err(e) => {
            log::info!("optimality residual unavailable: {e}");
            None
        }
    }
}

/// Executes the command and, when an output directory is set, writes
/// `report.json`, `history.csv` and `rom_{E,A,B,C}.mtx` into it.
pub fn run(settings: &Settings) -> Result<RunReport> {
    let mut clock = Clock { enabled: settings.timings, phases: Vec::new() };
    let h = clock.time("load", || load_model(&settings.model))?;
    let fom = clock.time("fom-summary", || match settings.command {
        // the norm of an unstable model is an error for `norm`, a blank elsewhere
        Command::Norm => hardy::h2_norm(&h).map_err(CliError::from).and_then(|_| ModelSummary::of(&h)),
        _ => ModelSummary::of(&h),
    })?;
    let rom0 = match &settings.rom0 {
        Some(src) => Some(clock.time("load-rom", || src.load(h.inputs(), h.outputs()))?),
        None => None,
    };
    let mut report = RunReport {
        command: settings.command.as_str().to_string(),
        model: settings.model.to_string(),
        config: ConfigEcho::new(&settings.run, settings.seed, settings.rom0.as_ref().map(|r| r.to_string())),
        fom,
        rom: None,
        run: None,
        optimality: None,
        timings: Vec::new(),
    };
    let mut final_rom = None;
    match settings.command {
        Command::Info | Command::Norm => {}
        Command::Verify => {
            let rom = rom0.expect("checked when resolving settings");
            let norm_h = report.fom.h2_norm.ok_or(CliError::Core(h2ror::Error::Unstable(report.fom.spectral_abscissa)))?;
            report.rom = Some(ModelSummary::of(&rom)?);
            let res = clock.time("verify", || hardy::optimality_residual_scaled(&h, &rom, norm_h))?;
            report.optimality = Some(ResidualEntry::from(&res));
        }
        Command::Irka | Command::Irka2 => {
            let rom0 = rom0.expect("checked when resolving settings");
            let result: RunResult = clock.time("iterate", || match settings.command {
                Command::Irka => irka::irka(&h, &rom0, &settings.run),
                _ => rgd::irka2(&h, &rom0, &settings.run),
            })?;
            report.rom = Some(ModelSummary::of(&result.final_rom)?);
            report.optimality = clock.time("optimality", || optimality(&h, &result.final_rom, result.fom_norm));
            report.run = Some(RunSection::of(settings.command.as_str(), &result));
            final_rom = Some(result.final_rom);
        }
    }
    report.timings = clock.phases;
    if let Some(dir) = &settings.out {
        fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
        report.write(&dir.join("report.json"))?;
        if report.run.is_some() {
            report::emit_plot_data(&report, &dir.join("history.csv"))?;
        }
        if let Some(rom) = &final_rom {
            model::save_dir(dir, "rom_", rom)?;
        }
    }
    Ok(report)
}

/// One-screen summary for stdout.
pub fn summary(report: &RunReport) -> String {
    let mut out = Vec::new();
    let fom = &report.fom;
    match report.command.as_str() {
        "norm" => out.push(format!("{:e}", fom.h2_norm.unwrap_or(f64::NAN))),
        "info" => {
            out.push(format!("order {}, inputs {}, outputs {}", fom.order, fom.inputs, fom.outputs));
            out.push(format!("stable {} (spectral abscissa {:e})", fom.stable, fom.spectral_abscissa));
            if let Some(n) = fom.h2_norm {
                out.push(format!("H2 norm {n:e}"));
            }
            for [re, im] in &fom.poles {
                out.push(format!("pole {re:e} {im:+e}i"));
            }
        }
        _ => {
            if let Some(run) = &report.run {
                out.push(format!("{}: {} after {} iterations", run.algorithm, run.termination, run.iterations));
                if let Some(e) = run.final_relative_h2_error {
                    out.push(format!("relative H2 error {e:e}"));
                }
                if let Some(w) = &run.warning {
                    out.push(format!("warning: {w}"));
                }
            }
            if let Some(rom) = &report.rom {
                for [re, im] in &rom.poles {
                    out.push(format!("pole {re:e} {im:+e}i"));
                }
            }
            if let Some(opt) = &report.optimality {
                out.push(format!("optimality residual {:e}", opt.aggregate));
            }
        }
    }
    out.join("\n")
}
