//! Experiment runner: configs, multi-seed runs, sweeps and result files.

pub mod cli;
pub mod config;
pub mod output;
pub mod run;

pub use config::{
    EnvironmentKind, ExperimentConfig, OutputFormat, PlannerKind, SweepParameter, TabularConfig,
};
pub use run::{run_experiment, sweep, Aggregate, RunSummary, SweepPoint};
