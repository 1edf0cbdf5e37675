//! Generative-model abstraction, planner configuration and the randomness
//! discipline shared by every planner.
//!
//! States are opaque to the planner: a [`GenerativeModel`] owns its state type
//! and the planner only hands states back to the model that produced them.

use std::fmt::Debug;

use rand::SeedableRng;
use rand_pcg::Pcg64Mcg;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Random number generator handed to [`GenerativeModel::sample`].
pub type SampleRng = Pcg64Mcg;

/// One sampled transition.
#[derive(Debug, Clone, PartialEq)]
pub struct Transition<S> {
    pub next_state: S,
    /// `r(s, a)` as seen by the planner's backups. Must depend on
    /// `(state, action)` only, so every sample drawn for a pair agrees.
    pub reward: f64,
    /// Reward actually collected by an agent executing this transition.
    /// Equal to `reward` unless the environment pays a stochastic arrival
    /// reward, in which case `reward` is its expectation.
    pub realized_reward: f64,
    pub terminal: bool,
}

impl<S> Transition<S> {
    pub fn new(next_state: S, reward: f64, terminal: bool) -> Self {
        Transition {
            next_state,
            reward,
            realized_reward: reward,
            terminal,
        }
    }
}

/// Sampling access to an MDP, plus the per-pair uncertainty radius.
///
/// `sample` must be a pure function of `(state, action, rng state)` and every
/// reward must lie in `[0, 1]`. Implementations are shared across worker
/// threads, each of which brings its own generator.
pub trait GenerativeModel: Sync {
    type State: Clone + Debug + Send + Sync;

    fn num_actions(&self) -> usize;

    fn initial_state(&self) -> Self::State;

    fn sample(
        &self,
        state: &Self::State,
        action: usize,
        rng: &mut SampleRng,
    ) -> Transition<Self::State>;

    /// Total-variation radius of the uncertainty set at `(state, action)`.
    fn rho(&self, _state: &Self::State, _action: usize) -> f64 {
        0.0
    }

    /// Whether an episode that stopped in `state` counts as a success.
    /// Default: survived to the step cap without termination.
    fn is_success(
        &self,
        _state: &Self::State,
        terminated: bool,
        steps: usize,
        max_steps: usize,
    ) -> bool {
        !terminated && steps >= max_steps
    }
}

impl<M: GenerativeModel + ?Sized> GenerativeModel for &M {
    type State = M::State;

    fn num_actions(&self) -> usize {
        (**self).num_actions()
    }

    fn initial_state(&self) -> Self::State {
        (**self).initial_state()
    }

    fn sample(
        &self,
        state: &Self::State,
        action: usize,
        rng: &mut SampleRng,
    ) -> Transition<Self::State> {
        (**self).sample(state, action, rng)
    }

    fn rho(&self, state: &Self::State, action: usize) -> f64 {
        (**self).rho(state, action)
    }

    fn is_success(
        &self,
        state: &Self::State,
        terminated: bool,
        steps: usize,
        max_steps: usize,
    ) -> bool {
        (**self).is_success(state, terminated, steps, max_steps)
    }
}

/// How action values are backed up inside the lookahead tree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BackupMode {
    /// Empirical mean of child values (classical sparse sampling).
    Nominal,
    /// TV-robust dual backup with the constant radius `default_rho`.
    Robust,
    /// Robust backup where the model reports `rho(s, a) > 0`, nominal elsewhere.
    PerStateRobust,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PlannerConfig {
    /// Successor samples drawn per action (`C`).
    pub sample_width: usize,
    /// Lookahead depth (`H`).
    pub horizon: usize,
    pub gamma: f64,
    pub default_rho: f64,
    pub backup_mode: BackupMode,
}

impl PlannerConfig {
    pub fn new(sample_width: usize, horizon: usize, gamma: f64) -> Self {
        PlannerConfig {
            sample_width,
            horizon,
            gamma,
            default_rho: 0.0,
            backup_mode: BackupMode::Nominal,
        }
    }

    pub fn nominal(mut self) -> Self {
        self.backup_mode = BackupMode::Nominal;
        self
    }

    pub fn robust(mut self, rho: f64) -> Self {
        self.backup_mode = BackupMode::Robust;
        self.default_rho = rho;
        self
    }

    pub fn per_state_robust(mut self) -> Self {
        self.backup_mode = BackupMode::PerStateRobust;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.sample_width == 0 {
            return Err(Error::param("sample width C must be at least 1"));
        }
        if self.horizon == 0 {
            return Err(Error::param("horizon H must be at least 1"));
        }
        if !(0.0..1.0).contains(&self.gamma) {
            return Err(Error::param(format!(
                "gamma must lie in [0, 1), got {}",
                self.gamma
            )));
        }
        if !(0.0..=1.0).contains(&self.default_rho) {
            return Err(Error::param(format!(
                "rho must lie in [0, 1], got {}",
                self.default_rho
            )));
        }
        if self.backup_mode == BackupMode::Robust && self.default_rho <= 0.0 {
            return Err(Error::param("robust backups need default_rho > 0"));
        }
        Ok(())
    }

    /// Largest value any node of the tree can take, `1 / (1 - gamma)`.
    pub fn value_bound(&self) -> f64 {
        1.0 / (1.0 - self.gamma)
    }
}

/// Deterministic, splittable randomness key.
///
/// Every tree node owns a stream; the stream of the `i`-th successor sampled
/// under action `a` is `parent.child(a, i)`. Sampled values therefore depend
/// only on a node's position in the tree, never on expansion order, and
/// sibling subtrees can be expanded on different threads.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Stream(u64);

const GOLDEN: u64 = 0x9e37_79b9_7f4a_7c15;

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(GOLDEN);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

impl Stream {
    pub fn from_seed(seed: u64) -> Self {
        Stream(splitmix(seed))
    }

    pub fn key(self) -> u64 {
        self.0
    }

    /// Stream of successor `sample` under `action`.
    pub fn child(self, action: usize, sample: usize) -> Self {
        let slot = ((action as u64) << 32) ^ (sample as u64);
        Stream(splitmix(
            self.0 ^ splitmix(slot.wrapping_mul(GOLDEN) ^ 0x6a09_e667_f3bc_c909),
        ))
    }

    /// Independent sub-stream identified by a tag (episode step, role, ...).
    pub fn fork(self, tag: u64) -> Self {
        Stream(splitmix(
            self.0.rotate_left(17) ^ splitmix(tag ^ 0xbb67_ae85_84ca_a73b),
        ))
    }

    pub fn rng(self) -> SampleRng {
        SampleRng::seed_from_u64(self.0)
    }
}
