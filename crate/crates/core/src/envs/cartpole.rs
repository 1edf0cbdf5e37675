//! Cart-pole balancing with position-dependent noise on the pole angle.
//!
//! After the deterministic Euler step, Gaussian noise is added to the pole
//! angle. Its standard deviation is `sigma_high` while the cart is inside the
//! hazard band `x_a < |x| < x_b` and `sigma_low` elsewhere. The planning model
//! assumes `sigma_low` everywhere.

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::envs::gaussian::gaussian_tv;
use crate::error::{Error, Result};
use crate::model::{GenerativeModel, SampleRng, Transition};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CartPolePhysics {
    pub gravity: f64,
    pub cart_mass: f64,
    pub pole_mass: f64,
    /// Half the pole length.
    pub half_length: f64,
    pub force: f64,
    /// Euler integration step in seconds.
    pub tau: f64,
}

impl Default for CartPolePhysics {
    fn default() -> Self {
        CartPolePhysics {
            gravity: 9.8,
            cart_mass: 1.0,
            pole_mass: 0.1,
            half_length: 0.5,
            force: 10.0,
            tau: 0.02,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CartPoleConfig {
    /// Inner edge of the hazard band.
    pub x_a: f64,
    /// Outer edge of the hazard band.
    pub x_b: f64,
    pub sigma_low: f64,
    pub sigma_high: f64,
    pub max_steps: usize,
    pub theta_limit: f64,
    pub x_limit: f64,
    pub physics: CartPolePhysics,
}

impl Default for CartPoleConfig {
    fn default() -> Self {
        CartPoleConfig {
            x_a: 0.02,
            x_b: 0.03,
            sigma_low: 1e-3,
            sigma_high: 0.1,
            max_steps: 200,
            theta_limit: 0.2,
            x_limit: 2.4,
            physics: CartPolePhysics::default(),
        }
    }
}

impl CartPoleConfig {
    pub fn validate(&self) -> Result<()> {
        if !(0.0 < self.x_a && self.x_a < self.x_b) {
            return Err(Error::param(format!(
                "hazard band needs 0 < x_a < x_b, got [{}, {}]",
                self.x_a, self.x_b
            )));
        }
        if !(self.sigma_low > 0.0 && self.sigma_low < self.sigma_high) {
            return Err(Error::param(format!(
                "need 0 < sigma_low < sigma_high, got {} and {}",
                self.sigma_low, self.sigma_high
            )));
        }
        if !(self.theta_limit > 0.0 && self.x_limit > 0.0) {
            return Err(Error::param("termination limits must be positive"));
        }
        let p = &self.physics;
        if [
            p.gravity,
            p.cart_mass,
            p.pole_mass,
            p.half_length,
            p.force,
            p.tau,
        ]
        .iter()
        .any(|v| !v.is_finite() || *v <= 0.0)
        {
            return Err(Error::param("physics constants must be positive"));
        }
        Ok(())
    }

    /// Uncertainty radius inside the hazard band.
    pub fn band_rho(&self) -> Result<f64> {
        gaussian_tv(self.sigma_low, self.sigma_high)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct CartState {
    pub x: f64,
    pub x_dot: f64,
    pub theta: f64,
    pub theta_dot: f64,
}

#[derive(Debug, Clone)]
pub struct CartPole {
    config: CartPoleConfig,
    band_rho: f64,
    band_noise: bool,
}

pub fn cartpole_true_model(config: &CartPoleConfig) -> Result<CartPole> {
    CartPole::build(config, true)
}

pub fn cartpole_planning_model(config: &CartPoleConfig) -> Result<CartPole> {
    CartPole::build(config, false)
}

impl CartPole {
    fn build(config: &CartPoleConfig, band_noise: bool) -> Result<Self> {
        config.validate()?;
        Ok(CartPole {
            band_rho: config.band_rho()?,
            config: config.clone(),
            band_noise,
        })
    }

    pub fn config(&self) -> &CartPoleConfig {
        &self.config
    }

    pub fn in_hazard_band(&self, x: f64) -> bool {
        let ax = x.abs();
        self.config.x_a < ax && ax < self.config.x_b
    }

    pub fn is_terminal(&self, s: &CartState) -> bool {
        s.theta.abs() > self.config.theta_limit || s.x.abs() > self.config.x_limit
    }

    /// Reward collected when leaving `s`.
    pub fn reward(&self, s: &CartState) -> f64 {
        if self.is_terminal(s) {
            0.0
        } else {
            1.0 - 0.2 * s.theta.abs()
        }
    }

    /// Noise standard deviation this model applies when leaving `s`.
    pub fn noise_sigma(&self, s: &CartState) -> f64 {
        if self.band_noise && self.in_hazard_band(s.x) {
            self.config.sigma_high
        } else {
            self.config.sigma_low
        }
    }

    /// Noise-free Euler step; action 0 pushes left, 1 pushes right.
    pub fn dynamics(&self, s: &CartState, action: usize) -> CartState {
        let p = &self.config.physics;
        let force = if action == 1 { p.force } else { -p.force };
        let total_mass = p.cart_mass + p.pole_mass;
        let pole_mass_length = p.pole_mass * p.half_length;
        let (sin, cos) = s.theta.sin_cos();
        let temp = (force + pole_mass_length * s.theta_dot * s.theta_dot * sin) / total_mass;
        let theta_acc = (p.gravity * sin - cos * temp)
            / (p.half_length * (4.0 / 3.0 - p.pole_mass * cos * cos / total_mass));
        let x_acc = temp - pole_mass_length * theta_acc * cos / total_mass;
        CartState {
            x: s.x + p.tau * s.x_dot,
            x_dot: s.x_dot + p.tau * x_acc,
            theta: s.theta + p.tau * s.theta_dot,
            theta_dot: s.theta_dot + p.tau * theta_acc,
        }
    }
}

impl GenerativeModel for CartPole {
    type State = CartState;

    fn num_actions(&self) -> usize {
        2
    }

    fn initial_state(&self) -> CartState {
        CartState::default()
    }

    fn sample(
        &self,
        state: &CartState,
        action: usize,
        rng: &mut SampleRng,
    ) -> Transition<CartState> {
        if self.is_terminal(state) {
            return Transition::new(*state, 0.0, true);
        }
        let mut next = self.dynamics(state, action);
        let z: f64 = rng.sample(StandardNormal);
        next.theta += self.noise_sigma(state) * z;
        Transition::new(next, self.reward(state), self.is_terminal(&next))
    }

    fn rho(&self, state: &CartState, _action: usize) -> f64 {
        if self.in_hazard_band(state.x) {
            self.band_rho
        } else {
            0.0
        }
    }
}
