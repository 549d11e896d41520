//! Command implementations behind the `tgi` binary.

pub mod config;
pub mod presets;
pub mod report;

use std::fs;
use std::path::{Path, PathBuf};

use tgi_core::{run_scenario_with, run_sweep_with, SimError, SweepSpec};
use thiserror::Error;

pub use config::{parse_config, parse_config_in, Config, ConfigError};
pub use report::{csv_bytes, PointOutcome};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("calibration failed: {0}")]
    Calibration(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Calibration(_) => 3,
            CliError::Io(_) => 4,
        }
    }
}

impl From<ConfigError> for CliError {
    fn from(e: ConfigError) -> Self {
        CliError::Config(e.to_string())
    }
}

fn sim_failure(e: &SimError) -> CliError {
    match e {
        SimError::DegenerateCalibration { .. } => CliError::Calibration(e.to_string()),
        other => CliError::Config(other.to_string()),
    }
}

/// Options shared by the run and figures commands.
#[derive(Debug, Clone)]
pub struct RunOptions {
    pub workers: usize,
    pub force: bool,
    /// Fill the `wall_s` column.
    pub timing: bool,
    /// Suppress per-point summary lines.
    pub quiet: bool,
}

impl Default for RunOptions {
    fn default() -> Self {
        Self {
            workers: default_workers(),
            force: false,
            timing: false,
            quiet: false,
        }
    }
}

pub fn default_workers() -> usize {
    std::thread::available_parallelism()
        .map(|n| n.get())
        .unwrap_or(1)
}

/// Runs every point of `config`.
pub fn execute(config: &Config, workers: usize) -> Vec<PointOutcome> {
    match config {
        Config::Scenario(s) => vec![PointOutcome {
            index: 0,
            scenario: s.clone(),
            result: run_scenario_with::<f64>(s, workers),
        }],
        Config::Sweep(spec) => execute_sweep(spec, workers),
    }
}

pub fn execute_sweep(spec: &SweepSpec, workers: usize) -> Vec<PointOutcome> {
    run_sweep_with::<f64>(spec, workers)
        .into_iter()
        .enumerate()
        .map(|(index, result)| PointOutcome {
            index,
            scenario: spec.scenario_at(index).expect("validated sweep"),
            result,
        })
        .collect()
}

fn write_output(path: &Path, bytes: &[u8], force: bool) -> Result<(), CliError> {
    if path.exists() && !force {
        return Err(CliError::Io(format!(
            "{} exists (pass --force to overwrite)",
            path.display()
        )));
    }
    fs::write(path, bytes).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

/// `tgi run`: executes a configuration file and writes its CSV report.
///
/// A failed calibration maps to exit code 3 after the report (with error
/// rows) has been written.
pub fn cmd_run(
    config_path: &Path,
    out: &Path,
    seed: Option<u64>,
    opts: &RunOptions,
) -> Result<(), CliError> {
    let text = fs::read_to_string(config_path)
        .map_err(|e| CliError::Io(format!("{}: {e}", config_path.display())))?;
    let base = config_path.parent().unwrap_or(Path::new("."));
    let mut config = parse_config_in(&text, base)?;
    if let Some(seed) = seed {
        config.set_seed(seed);
    }
    if out.exists() && !opts.force {
        return Err(CliError::Io(format!(
            "{} exists (pass --force to overwrite)",
            out.display()
        )));
    }
    let points = execute(&config, opts.workers);
    if !opts.quiet {
        points
            .iter()
            .for_each(|p| println!("{}", report::summary_line(p)));
    }
    write_output(out, &csv_bytes(&points, opts.timing), opts.force)?;
    first_failure(&points)
}

fn first_failure(points: &[PointOutcome]) -> Result<(), CliError> {
    let errors: Vec<&SimError> = points
        .iter()
        .filter_map(|p| p.result.as_ref().err())
        .collect();
    match errors
        .iter()
        .find(|e| matches!(e, SimError::DegenerateCalibration { .. }))
        .or(errors.first())
    {
        Some(e) => Err(sim_failure(e)),
        None => Ok(()),
    }
}

/// `tgi figures`: runs a preset bundle, one CSV per panel in `out_dir`.
/// Returns the written paths.
pub fn cmd_figures(id: &str, out_dir: &Path, opts: &RunOptions) -> Result<Vec<PathBuf>, CliError> {
    let panels = presets::preset(id).ok_or_else(|| {
        CliError::Config(format!(
            "unknown figure `{id}` (expected one of {})",
            presets::FIGURES.join(", ")
        ))
    })?;
    fs::create_dir_all(out_dir).map_err(|e| CliError::Io(format!("{}: {e}", out_dir.display())))?;
    let paths: Vec<PathBuf> = panels
        .iter()
        .map(|p| out_dir.join(format!("{}.csv", p.name)))
        .collect();
    if !opts.force {
        if let Some(taken) = paths.iter().find(|p| p.exists()) {
            return Err(CliError::Io(format!(
                "{} exists (pass --force to overwrite)",
                taken.display()
            )));
        }
    }
    let mut failures = Vec::new();
    for (panel, path) in panels.iter().zip(&paths) {
        let points = execute_sweep(&panel.spec, opts.workers);
        if !opts.quiet {
            println!("{}:", panel.name);
            points
                .iter()
                .for_each(|p| println!("  {}", report::summary_line(p)));
        }
        write_output(path, &csv_bytes(&points, opts.timing), true)?;
        failures.extend(points.into_iter().filter(|p| p.result.is_err()));
    }
    first_failure(&failures)?;
    Ok(paths)
}
