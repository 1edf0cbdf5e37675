//! Sparse-sampling planners for MDPs whose transition model is only known up
//! to a total-variation ball.
//!
//! The planners only need a generative model: something that samples
//! `(next_state, reward)` for a state-action pair. Robust backups replace the
//! empirical mean of the sampled successor values with the worst expectation
//! over all distributions within TV distance `rho` of the empirical one,
//! computed through a one-dimensional convex dual.

pub mod dual;
pub mod envs;
pub mod error;
pub mod harness;
pub mod hyperparams;
pub mod model;
pub mod oracle;
pub mod planner;

pub use dual::{dual_minimize, nominal_backup, robust_backup, DualInstance, DualSolution};
pub use error::{Error, Result};
pub use hyperparams::{theorem1_hyperparameters, Hyperparameters};
pub use model::{BackupMode, GenerativeModel, PlannerConfig, SampleRng, Stream, Transition};
pub use oracle::{
    nominal_value_iteration, robust_value_iteration, tv_distance, tv_worst_case_distribution,
    BellmanOperator, TabularMDP,
};
pub use planner::{
    plan, plan_parallel, rss_plan, rss_variable_rho_plan, run_episode, ss_plan, EpisodeResult,
    PlanResult,
};
