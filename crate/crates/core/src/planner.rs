//! Lookahead-tree planners and the episode driver.
//!
//! All three planners grow the same tree: at every non-leaf node each action
//! is tried `C` times against the generative model, each sampled successor is
//! expanded one level shallower, and leaves are worth 0. They differ only in
//! how the `C` child values of an action are folded into `Q(s, a)`:
//!
//! * [`ss_plan`]: empirical mean (classical sparse sampling),
//! * [`rss_plan`]: TV-robust dual backup with a constant radius,
//! * [`rss_variable_rho_plan`]: robust backup only where `rho(s, a) > 0`.

use rayon::prelude::*;
use serde::Serialize;

use crate::dual::{nominal_unchecked, robust_unchecked};
use crate::error::{Error, Result};
use crate::model::{BackupMode, GenerativeModel, PlannerConfig, Stream};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PlanResult {
    pub best_action: usize,
    pub value: f64,
    pub per_action_values: Vec<f64>,
}

impl PlanResult {
    fn from_q(per_action_values: Vec<f64>) -> Self {
        let (best_action, value) = argmax(&per_action_values);
        PlanResult {
            best_action,
            value,
            per_action_values,
        }
    }

    fn leaf(num_actions: usize) -> Self {
        PlanResult {
            best_action: 0,
            value: 0.0,
            per_action_values: vec![0.0; num_actions],
        }
    }
}

/// Smallest index attaining the maximum.
pub fn argmax(values: &[f64]) -> (usize, f64) {
    let mut best = 0;
    let mut best_value = f64::NEG_INFINITY;
    for (i, &v) in values.iter().enumerate() {
        if v > best_value {
            best = i;
            best_value = v;
        }
    }
    (best, best_value)
}

#[derive(Debug, Clone, Copy)]
enum Backup {
    Nominal,
    Robust(f64),
    PerState,
}

impl Backup {
    fn from_config(config: &PlannerConfig) -> Self {
        match config.backup_mode {
            BackupMode::Nominal => Backup::Nominal,
            BackupMode::Robust => Backup::Robust(config.default_rho),
            BackupMode::PerStateRobust => Backup::PerState,
        }
    }
}

struct Tree<'a, M: GenerativeModel> {
    model: &'a M,
    width: usize,
    gamma: f64,
    backup: Backup,
}

impl<M: GenerativeModel> Tree<'_, M> {
    fn value(&self, state: &M::State, depth: usize, stream: Stream) -> f64 {
        if depth == 0 {
            return 0.0;
        }
        let mut best = f64::NEG_INFINITY;
        let mut children = vec![0.0; self.width];
        for action in 0..self.model.num_actions() {
            let q = self.action_value(state, action, depth, stream, &mut children);
            if q > best {
                best = q;
            }
        }
        best
    }

    fn action_value(
        &self,
        state: &M::State,
        action: usize,
        depth: usize,
        stream: Stream,
        children: &mut [f64],
    ) -> f64 {
        let mut reward = None;
        for (i, slot) in children.iter_mut().enumerate() {
            let (r, v) = self.sample_child(state, action, i, depth, stream);
            debug_assert!(
                reward.is_none_or(|prev: f64| prev.to_bits() == r.to_bits()),
                "reward of (s, a) must not depend on the sampled successor"
            );
            reward = Some(r);
            *slot = v;
        }
        self.backup(state, action, reward.unwrap_or(0.0), children)
    }

    fn sample_child(
        &self,
        state: &M::State,
        action: usize,
        i: usize,
        depth: usize,
        stream: Stream,
    ) -> (f64, f64) {
        let child = stream.child(action, i);
        let tr = self.model.sample(state, action, &mut child.rng());
        let v = if tr.terminal {
            0.0
        } else {
            self.value(&tr.next_state, depth - 1, child)
        };
        (tr.reward, v)
    }

    fn backup(&self, state: &M::State, action: usize, reward: f64, children: &mut [f64]) -> f64 {
        let rho = match self.backup {
            Backup::Nominal => 0.0,
            Backup::Robust(rho) => rho,
            Backup::PerState => self.model.rho(state, action),
        };
        if rho > 0.0 {
            robust_unchecked(reward, children, rho, self.gamma)
        } else {
            nominal_unchecked(reward, children, self.gamma)
        }
    }

    fn root(&self, state: &M::State, depth: usize, stream: Stream) -> PlanResult {
        if depth == 0 {
            return PlanResult::leaf(self.model.num_actions());
        }
        let mut children = vec![0.0; self.width];
        let q = (0..self.model.num_actions())
            .map(|a| self.action_value(state, a, depth, stream, &mut children))
            .collect();
        PlanResult::from_q(q)
    }

    fn root_parallel(&self, state: &M::State, depth: usize, stream: Stream) -> PlanResult {
        if depth == 0 {
            return PlanResult::leaf(self.model.num_actions());
        }
        let actions = self.model.num_actions();
        let samples: Vec<(f64, f64)> = (0..actions * self.width)
            .into_par_iter()
            .map(|k| self.sample_child(state, k / self.width, k % self.width, depth, stream))
            .collect();
        let q = samples
            .chunks(self.width)
            .enumerate()
            .map(|(a, chunk)| {
                let mut children: Vec<f64> = chunk.iter().map(|&(_, v)| v).collect();
                self.backup(state, a, chunk[0].0, &mut children)
            })
            .collect();
        PlanResult::from_q(q)
    }
}

fn check_mode(config: &PlannerConfig, expected: BackupMode) -> Result<()> {
    config.validate()?;
    if config.backup_mode != expected {
        return Err(Error::param(format!(
            "planner expects backup mode {expected:?}, config has {:?}",
            config.backup_mode
        )));
    }
    Ok(())
}

fn tree<'a, M: GenerativeModel>(model: &'a M, config: &PlannerConfig) -> Tree<'a, M> {
    Tree {
        model,
        width: config.sample_width,
        gamma: config.gamma,
        backup: Backup::from_config(config),
    }
}

/// Robust sparse sampling with the constant radius `config.default_rho`.
pub fn rss_plan<M: GenerativeModel>(
    model: &M,
    state: &M::State,
    depth: usize,
    config: &PlannerConfig,
    stream: Stream,
) -> Result<PlanResult> {
    check_mode(config, BackupMode::Robust)?;
    Ok(tree(model, config).root(state, depth, stream))
}

/// Classical sparse sampling.
pub fn ss_plan<M: GenerativeModel>(
    model: &M,
    state: &M::State,
    depth: usize,
    config: &PlannerConfig,
    stream: Stream,
) -> Result<PlanResult> {
    check_mode(config, BackupMode::Nominal)?;
    Ok(tree(model, config).root(state, depth, stream))
}

/// Robust sparse sampling with the radius reported by `model.rho(s, a)`;
/// pairs with zero radius get the nominal backup.
pub fn rss_variable_rho_plan<M: GenerativeModel>(
    model: &M,
    state: &M::State,
    depth: usize,
    config: &PlannerConfig,
    stream: Stream,
) -> Result<PlanResult> {
    check_mode(config, BackupMode::PerStateRobust)?;
    Ok(tree(model, config).root(state, depth, stream))
}

/// Dispatches on `config.backup_mode`.
pub fn plan<M: GenerativeModel>(
    model: &M,
    state: &M::State,
    depth: usize,
    config: &PlannerConfig,
    stream: Stream,
) -> Result<PlanResult> {
    config.validate()?;
    Ok(tree(model, config).root(state, depth, stream))
}

/// Same result as [`plan`], bit for bit, with the root's `|A| * C` subtrees
/// expanded on the rayon pool.
pub fn plan_parallel<M: GenerativeModel>(
    model: &M,
    state: &M::State,
    depth: usize,
    config: &PlannerConfig,
    stream: Stream,
) -> Result<PlanResult> {
    config.validate()?;
    Ok(tree(model, config).root_parallel(state, depth, stream))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EpisodeResult {
    pub seed: u64,
    pub discounted_return: f64,
    pub steps: usize,
    pub reached_success: bool,
}

const PLANNING_STREAM: u64 = 0x504c_414e;
const ENVIRONMENT_STREAM: u64 = 0x454e_5656;

/// Plays one episode: plan on `planning_model`, act in `true_env`.
///
/// Planning and environment randomness come from two independent streams
/// derived from `seed`; step `t` uses the `t`-th fork of each.
pub fn run_episode<T, P>(
    true_env: &T,
    planning_model: &P,
    config: &PlannerConfig,
    max_steps: usize,
    seed: u64,
) -> Result<EpisodeResult>
where
    T: GenerativeModel,
    P: GenerativeModel<State = T::State>,
{
    config.validate()?;
    if true_env.num_actions() != planning_model.num_actions() {
        return Err(Error::input(
            "true environment and planning model disagree on the action count",
        ));
    }
    let root = Stream::from_seed(seed);
    let plan_stream = root.fork(PLANNING_STREAM);
    let env_stream = root.fork(ENVIRONMENT_STREAM);
    let planner = tree(planning_model, config);

    let mut state = true_env.initial_state();
    let mut discounted_return = 0.0;
    let mut discount = 1.0;
    let mut terminated = false;
    let mut steps = 0;
    while steps < max_steps {
        let t = steps as u64;
        let decision = planner.root(&state, config.horizon, plan_stream.fork(t));
        let tr = true_env.sample(&state, decision.best_action, &mut env_stream.fork(t).rng());
        discounted_return += discount * tr.realized_reward;
        discount *= config.gamma;
        steps += 1;
        state = tr.next_state;
        if tr.terminal {
            terminated = true;
            break;
        }
    }
    Ok(EpisodeResult {
        seed,
        discounted_return,
        steps,
        reached_success: true_env.is_success(&state, terminated, steps, max_steps),
    })
}
