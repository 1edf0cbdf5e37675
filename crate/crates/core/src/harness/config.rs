use std::fmt;
use std::path::Path;

use clap::ValueEnum;
use serde::{Deserialize, Serialize};

use crate::envs::{CartPoleConfig, FrozenLakeConfig};
use crate::error::{Error, Result};
use crate::model::{BackupMode, PlannerConfig};
use crate::oracle::TabularMDP;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum EnvironmentKind {
    Frozenlake,
    Cartpole,
    TabularFile,
}

/// Which planner drives the agent.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum PlannerKind {
    /// Sparse sampling on the misspecified model.
    Ss,
    /// Robust sparse sampling with one radius everywhere.
    Rss,
    /// Robust backups only where the model reports uncertainty.
    RssVariable,
    /// Sparse sampling with access to the true dynamics (reference row).
    SsTrueDynamics,
}

impl PlannerKind {
    pub fn backup_mode(self) -> BackupMode {
        match self {
            PlannerKind::Ss | PlannerKind::SsTrueDynamics => BackupMode::Nominal,
            PlannerKind::Rss => BackupMode::Robust,
            PlannerKind::RssVariable => BackupMode::PerStateRobust,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            PlannerKind::Ss => "ss",
            PlannerKind::Rss => "rss",
            PlannerKind::RssVariable => "rss-variable",
            PlannerKind::SsTrueDynamics => "ss-true-dynamics",
        }
    }
}

impl fmt::Display for PlannerKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum, Default)]
#[serde(rename_all = "kebab-case")]
pub enum OutputFormat {
    /// Per-seed CSV plus a `.summary.json` next to it.
    #[default]
    Csv,
    /// One JSON document with config, aggregates and per-seed rows.
    Json,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TabularConfig {
    /// Matrix file of the model the agent plans with.
    pub file: Option<String>,
    /// Matrix file of the real dynamics; the planning file when absent.
    pub true_file: Option<String>,
    pub initial_state: usize,
    pub max_steps: usize,
}

impl Default for TabularConfig {
    fn default() -> Self {
        TabularConfig {
            file: None,
            true_file: None,
            initial_state: 0,
            max_steps: 100,
        }
    }
}

/// Everything needed to reproduce one experiment.
///
/// Seeds are `base_seed, base_seed + 1, ..., base_seed + num_seeds - 1`; each
/// seeds both the environment and the planner.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub environment: EnvironmentKind,
    pub planner: PlannerKind,
    pub sample_width: usize,
    pub horizon: usize,
    pub gamma: f64,
    /// Radius for `rss`; derived from the environment when absent.
    pub default_rho: Option<f64>,
    pub frozenlake: FrozenLakeConfig,
    pub cartpole: CartPoleConfig,
    pub tabular: TabularConfig,
    pub num_seeds: usize,
    pub base_seed: u64,
    /// Worker threads; `RSS_WORKERS` or the machine's parallelism when absent.
    pub worker_count: Option<usize>,
    pub output: Option<String>,
    pub format: OutputFormat,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            environment: EnvironmentKind::Frozenlake,
            planner: PlannerKind::RssVariable,
            sample_width: 50,
            horizon: 3,
            gamma: 0.99,
            default_rho: None,
            frozenlake: FrozenLakeConfig::default(),
            cartpole: CartPoleConfig::default(),
            tabular: TabularConfig::default(),
            num_seeds: 1000,
            base_seed: 0,
            worker_count: None,
            output: None,
            format: OutputFormat::Csv,
        }
    }
}

pub const WORKERS_ENV: &str = "RSS_WORKERS";

impl ExperimentConfig {
    /// FrozenLake defaults: `H = 3`, `C = 50`, `gamma = 0.99`, 150 steps.
    pub fn frozenlake() -> Self {
        ExperimentConfig::default()
    }

    /// CartPole defaults: `H = 5`, `C = 10`, `gamma = 0.999`, 200 steps, 500 seeds.
    pub fn cartpole() -> Self {
        ExperimentConfig {
            environment: EnvironmentKind::Cartpole,
            sample_width: 10,
            horizon: 5,
            gamma: 0.999,
            num_seeds: 500,
            ..ExperimentConfig::default()
        }
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)?;
        serde_json::from_str(&text).map_err(|e| Error::config(format!("{}: {e}", path.display())))
    }

    pub fn seeds(&self) -> impl Iterator<Item = u64> + '_ {
        (0..self.num_seeds as u64).map(move |i| self.base_seed.wrapping_add(i))
    }

    pub fn max_steps(&self) -> usize {
        match self.environment {
            EnvironmentKind::Frozenlake => self.frozenlake.max_steps,
            EnvironmentKind::Cartpole => self.cartpole.max_steps,
            EnvironmentKind::TabularFile => self.tabular.max_steps,
        }
    }

    pub fn resolved_workers(&self) -> Result<usize> {
        if let Some(n) = self.worker_count {
            return Ok(n);
        }
        match std::env::var(WORKERS_ENV) {
            Ok(v) => v.trim().parse().map_err(|_| {
                Error::config(format!(
                    "{WORKERS_ENV} must be a positive integer, got `{v}`"
                ))
            }),
            Err(_) => Ok(std::thread::available_parallelism()
                .map(|n| n.get())
                .unwrap_or(1)),
        }
    }

    /// Radius used by the constant-radius planner.
    pub fn resolved_rho(&self) -> Result<f64> {
        if let Some(rho) = self.default_rho {
            return Ok(rho);
        }
        match self.environment {
            EnvironmentKind::Frozenlake => Ok(self.frozenlake.rho),
            EnvironmentKind::Cartpole => self.cartpole.band_rho(),
            EnvironmentKind::TabularFile => {
                let mdp = self.load_tabular_planning()?;
                let mut rho: f64 = 0.0;
                for s in 0..mdp.num_states() {
                    for a in 0..mdp.num_actions() {
                        rho = rho.max(mdp.rho(s, a));
                    }
                }
                Ok(rho)
            }
        }
    }

    pub fn planner_config(&self) -> Result<PlannerConfig> {
        let mode = self.planner.backup_mode();
        let default_rho = match mode {
            BackupMode::Nominal => 0.0,
            _ => self.resolved_rho()?,
        };
        let config = PlannerConfig {
            sample_width: self.sample_width,
            horizon: self.horizon,
            gamma: self.gamma,
            default_rho,
            backup_mode: mode,
        };
        config
            .validate()
            .map_err(|e| Error::config(e.to_string()))?;
        Ok(config)
    }

    pub(crate) fn load_tabular_planning(&self) -> Result<TabularMDP> {
        let file = self
            .tabular
            .file
            .as_ref()
            .ok_or_else(|| Error::config("tabular-file environment needs tabular.file"))?;
        TabularMDP::load(file)?.with_gamma(self.gamma)
    }

    pub(crate) fn load_tabular_true(&self) -> Result<TabularMDP> {
        match &self.tabular.true_file {
            Some(file) => TabularMDP::load(file)?.with_gamma(self.gamma),
            None => self.load_tabular_planning(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.num_seeds == 0 {
            return Err(Error::config("num_seeds must be at least 1"));
        }
        if self.worker_count == Some(0) {
            return Err(Error::config("worker_count must be at least 1"));
        }
        self.planner_config()?;
        match self.environment {
            EnvironmentKind::Frozenlake => self.frozenlake.validate(),
            EnvironmentKind::Cartpole => self.cartpole.validate(),
            EnvironmentKind::TabularFile => self.load_tabular_planning().map(|_| ()),
        }
        .map_err(|e| match e {
            Error::InvalidParameter(m) | Error::InvalidInput(m) => Error::config(m),
            other => other,
        })
    }
}

/// Field a sweep varies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "snake_case")]
#[value(rename_all = "snake_case")]
pub enum SweepParameter {
    /// FrozenLake model shift and the planner's default radius together.
    Rho,
    SigmaHigh,
    /// Sample width `C`.
    #[value(alias = "C")]
    SampleWidth,
    /// Horizon `H`.
    #[value(alias = "H")]
    Horizon,
}

impl SweepParameter {
    pub fn name(self) -> &'static str {
        match self {
            SweepParameter::Rho => "rho",
            SweepParameter::SigmaHigh => "sigma_high",
            SweepParameter::SampleWidth => "sample_width",
            SweepParameter::Horizon => "horizon",
        }
    }

    pub fn apply(self, config: &mut ExperimentConfig, value: f64) -> Result<()> {
        let as_count = |v: f64| -> Result<usize> {
            if v >= 1.0 && v.fract() == 0.0 {
                Ok(v as usize)
            } else {
                Err(Error::config(format!(
                    "{} needs a positive integer, got {v}",
                    self.name()
                )))
            }
        };
        match self {
            SweepParameter::Rho => {
                config.frozenlake.rho = value;
                config.default_rho = Some(value);
            }
            SweepParameter::SigmaHigh => config.cartpole.sigma_high = value,
            SweepParameter::SampleWidth => config.sample_width = as_count(value)?,
            SweepParameter::Horizon => config.horizon = as_count(value)?,
        }
        Ok(())
    }
}

impl std::str::FromStr for SweepParameter {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        <SweepParameter as ValueEnum>::from_str(s, true)
            .map_err(|_| Error::config(format!("unknown sweep parameter `{s}`")))
    }
}
