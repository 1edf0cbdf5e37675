use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::json;

use crate::error::{Error, Result};
use crate::harness::config::{ExperimentConfig, OutputFormat};
use crate::harness::run::{RunSummary, SweepPoint};

/// Fails early if `path` cannot be created, before any episode is run.
pub(crate) fn check_writable(path: &str) -> Result<()> {
    let p = Path::new(path);
    let dir = match p.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    if !dir.is_dir() {
        return Err(Error::Io(io::Error::new(
            io::ErrorKind::NotFound,
            format!("output directory {} does not exist", dir.display()),
        )));
    }
    if p.is_dir() {
        return Err(Error::Io(io::Error::new(
            io::ErrorKind::IsADirectory,
            format!("output path {path} is a directory"),
        )));
    }
    Ok(())
}

/// `results/run.csv` -> `results/run.summary.json`.
pub fn summary_path(path: &str) -> PathBuf {
    Path::new(path).with_extension("summary.json")
}

#[derive(Serialize)]
struct EpisodeRow {
    seed: u64,
    discounted_return: f64,
    steps: usize,
    success: bool,
}

pub fn write_run(
    path: &str,
    format: OutputFormat,
    config: &ExperimentConfig,
    summary: &RunSummary,
) -> Result<()> {
    match format {
        OutputFormat::Csv => {
            let mut writer = csv::Writer::from_path(path)?;
            for e in &summary.episodes {
                writer.serialize(EpisodeRow {
                    seed: e.seed,
                    discounted_return: e.discounted_return,
                    steps: e.steps,
                    success: e.reached_success,
                })?;
            }
            writer.flush()?;
            let doc = json!({
                "config": config,
                "planner": summary.planner,
                "aggregate": summary.aggregate,
                "wall_time_secs": summary.wall_time_secs,
            });
            fs::write(summary_path(path), serde_json::to_string_pretty(&doc)?)?;
        }
        OutputFormat::Json => {
            let doc = json!({ "config": config, "summary": summary });
            fs::write(path, serde_json::to_string_pretty(&doc)?)?;
        }
    }
    Ok(())
}

#[derive(Serialize)]
struct SweepRow {
    parameter: &'static str,
    value: f64,
    planner: &'static str,
    num_seeds: usize,
    mean_return: f64,
    standard_error: f64,
    success_rate: f64,
    wall_time_secs: f64,
}

fn sweep_rows(points: &[SweepPoint]) -> Vec<SweepRow> {
    points
        .iter()
        .map(|p| SweepRow {
            parameter: p.parameter.name(),
            value: p.value,
            planner: p.summary.planner.name(),
            num_seeds: p.summary.aggregate.num_seeds,
            mean_return: p.summary.aggregate.mean_return,
            standard_error: p.summary.aggregate.standard_error,
            success_rate: p.summary.aggregate.success_rate,
            wall_time_secs: p.summary.wall_time_secs,
        })
        .collect()
}

pub fn write_sweep(path: &str, format: OutputFormat, points: &[SweepPoint]) -> Result<()> {
    let rows = sweep_rows(points);
    match format {
        OutputFormat::Csv => {
            let mut writer = csv::WriterBuilder::new()
                .has_headers(false)
                .from_path(path)?;
            writer.write_record([
                "parameter",
                "value",
                "planner",
                "num_seeds",
                "mean_return",
                "standard_error",
                "success_rate",
                "wall_time_secs",
            ])?;
            for row in &rows {
                writer.serialize(row)?;
            }
            writer.flush()?;
        }
        OutputFormat::Json => fs::write(path, serde_json::to_string_pretty(&rows)?)?,
    }
    Ok(())
}

/// Plain-text table for terminals.
pub fn format_sweep_table(points: &[SweepPoint]) -> String {
    let mut out = format!(
        "{:<12} {:>10} {:<18} {:>12} {:>10} {:>9}\n",
        "parameter", "value", "planner", "mean", "stderr", "success"
    );
    for r in sweep_rows(points) {
        out.push_str(&format!(
            "{:<12} {:>10} {:<18} {:>12.5} {:>10.5} {:>9.3}\n",
            r.parameter, r.value, r.planner, r.mean_return, r.standard_error, r.success_rate
        ));
    }
    out
}
