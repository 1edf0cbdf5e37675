//! Benchmark environments, each available as true dynamics and as the
//! misspecified model an agent plans with.

pub mod cartpole;
pub mod frozenlake;
pub mod gaussian;
pub mod tabular;

pub use cartpole::{
    cartpole_planning_model, cartpole_true_model, CartPole, CartPoleConfig, CartPolePhysics,
    CartState,
};
pub use frozenlake::{
    frozenlake_planning_model, frozenlake_true_model, FrozenLake, FrozenLakeConfig, GridMap,
};
pub use gaussian::gaussian_tv;
pub use tabular::TabularModel;
