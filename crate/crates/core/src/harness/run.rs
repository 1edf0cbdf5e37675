use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::envs::{
    cartpole_planning_model, cartpole_true_model, frozenlake_planning_model, frozenlake_true_model,
    TabularModel,
};
use crate::error::{Error, Result};
use crate::harness::config::{EnvironmentKind, ExperimentConfig, PlannerKind, SweepParameter};
use crate::harness::output;
use crate::model::{GenerativeModel, PlannerConfig};
use crate::planner::{run_episode, EpisodeResult};

/// Mean, standard error and success rate over a set of episodes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Aggregate {
    pub num_seeds: usize,
    pub mean_return: f64,
    /// Sample standard deviation (`n - 1`) over `sqrt(n)`; 0 for one seed.
    pub standard_error: f64,
    /// False when there was a single seed and the error is undefined.
    pub standard_error_defined: bool,
    pub success_rate: f64,
}

impl Aggregate {
    pub fn from_episodes(episodes: &[EpisodeResult]) -> Self {
        let n = episodes.len();
        let returns: Vec<f64> = episodes.iter().map(|e| e.discounted_return).collect();
        let mean = if n == 0 {
            0.0
        } else {
            returns.iter().sum::<f64>() / n as f64
        };
        let standard_error = if n < 2 {
            0.0
        } else {
            let var = returns.iter().map(|r| (r - mean) * (r - mean)).sum::<f64>() / (n - 1) as f64;
            (var / n as f64).sqrt()
        };
        let successes = episodes.iter().filter(|e| e.reached_success).count();
        Aggregate {
            num_seeds: n,
            mean_return: mean,
            standard_error,
            standard_error_defined: n >= 2,
            success_rate: if n == 0 {
                0.0
            } else {
                successes as f64 / n as f64
            },
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct RunSummary {
    pub planner: PlannerKind,
    #[serde(flatten)]
    pub aggregate: Aggregate,
    pub wall_time_secs: f64,
    /// Per-seed results in seed order.
    pub episodes: Vec<EpisodeResult>,
}

impl RunSummary {
    pub fn mean_return(&self) -> f64 {
        self.aggregate.mean_return
    }

    pub fn standard_error(&self) -> f64 {
        self.aggregate.standard_error
    }

    pub fn success_rate(&self) -> f64 {
        self.aggregate.success_rate
    }
}

fn episodes_for<T, P>(
    truth: &T,
    planning: &P,
    config: &ExperimentConfig,
    planner: &PlannerConfig,
) -> Result<Vec<EpisodeResult>>
where
    T: GenerativeModel,
    P: GenerativeModel<State = T::State>,
{
    let max_steps = config.max_steps();
    let seeds: Vec<u64> = config.seeds().collect();
    seeds
        .par_iter()
        .map(|&seed| run_episode(truth, planning, planner, max_steps, seed))
        .collect()
}

fn pair_episodes<M: GenerativeModel>(
    truth: &M,
    planning: &M,
    config: &ExperimentConfig,
    planner: &PlannerConfig,
) -> Result<Vec<EpisodeResult>> {
    if config.planner == PlannerKind::SsTrueDynamics {
        episodes_for(truth, truth, config, planner)
    } else {
        episodes_for(truth, planning, config, planner)
    }
}

fn collect_episodes(
    config: &ExperimentConfig,
    planner: &PlannerConfig,
) -> Result<Vec<EpisodeResult>> {
    match config.environment {
        EnvironmentKind::Frozenlake => {
            let truth = frozenlake_true_model(&config.frozenlake)?;
            let planning = frozenlake_planning_model(&config.frozenlake)?;
            pair_episodes(&truth, &planning, config, planner)
        }
        EnvironmentKind::Cartpole => {
            let truth = cartpole_true_model(&config.cartpole)?;
            let planning = cartpole_planning_model(&config.cartpole)?;
            pair_episodes(&truth, &planning, config, planner)
        }
        EnvironmentKind::TabularFile => {
            let initial = config.tabular.initial_state;
            let truth = config.load_tabular_true()?;
            let planning = config.load_tabular_planning()?;
            if truth.num_states() != planning.num_states()
                || truth.num_actions() != planning.num_actions()
            {
                return Err(Error::config("tabular true_file and file differ in shape"));
            }
            if initial >= truth.num_states() {
                return Err(Error::config(format!(
                    "initial_state {initial} is out of range"
                )));
            }
            let truth = TabularModel::new(truth).with_initial_state(initial);
            let planning = TabularModel::new(planning).with_initial_state(initial);
            pair_episodes(&truth, &planning, config, planner)
        }
    }
}

fn compute(config: &ExperimentConfig) -> Result<RunSummary> {
    config.validate()?;
    let planner = config.planner_config()?;
    let workers = config.resolved_workers()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::config(format!("cannot start {workers} workers: {e}")))?;
    let start = Instant::now();
    let episodes = pool.install(|| collect_episodes(config, &planner))?;
    Ok(RunSummary {
        planner: config.planner,
        aggregate: Aggregate::from_episodes(&episodes),
        wall_time_secs: start.elapsed().as_secs_f64(),
        episodes,
    })
}

/// Runs every seed of `config` and writes results when `config.output` is set.
///
/// Results do not depend on the worker count.
pub fn run_experiment(config: &ExperimentConfig) -> Result<RunSummary> {
    if let Some(path) = &config.output {
        output::check_writable(path)?;
    }
    let summary = compute(config)?;
    if let Some(path) = &config.output {
        output::write_run(path, config.format, config, &summary)?;
    }
    Ok(summary)
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepPoint {
    pub parameter: SweepParameter,
    pub value: f64,
    pub summary: RunSummary,
}

/// Runs `template` once per `(value, planner)` pair and, when the template has
/// an output path, writes one combined table there.
pub fn sweep(
    template: &ExperimentConfig,
    parameter: SweepParameter,
    values: &[f64],
    planners: &[PlannerKind],
) -> Result<Vec<SweepPoint>> {
    if let Some(path) = &template.output {
        output::check_writable(path)?;
    }
    let mut points = Vec::with_capacity(values.len() * planners.len());
    for &value in values {
        for &planner in planners {
            let mut config = template.clone();
            config.output = None;
            config.planner = planner;
            parameter.apply(&mut config, value)?;
            points.push(SweepPoint {
                parameter,
                value,
                summary: compute(&config)?,
            });
        }
    }
    if let Some(path) = &template.output {
        output::write_sweep(path, template.format, &points)?;
    }
    Ok(points)
}
