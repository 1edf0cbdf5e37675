//! Sample width and horizon that guarantee an `epsilon`-optimal robust policy.
//!
//! The resulting `C` is astronomically conservative for practical use (tens
//! of thousands at loose tolerances); experiments take `C` and `H` directly
//! and treat this as a calculator.

use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Hyperparameters {
    /// Per-node estimation accuracy, `epsilon / 3`.
    pub lambda: f64,
    /// Failure probability, `lambda * (1 - gamma)`.
    pub delta: f64,
    pub horizon: usize,
    pub sample_width: u64,
}

/// Computes `(lambda, delta, H, C)` for target accuracy `epsilon`.
///
/// `H` is the smallest integer with `gamma^H <= lambda`; `C` is the smallest
/// integer at or above the closed-form bound.
pub fn theorem1_hyperparameters(
    epsilon: f64,
    gamma: f64,
    rho: f64,
    num_actions: usize,
) -> Result<Hyperparameters> {
    if epsilon.is_nan() || epsilon <= 0.0 || !epsilon.is_finite() {
        return Err(Error::param(format!(
            "epsilon must be positive, got {epsilon}"
        )));
    }
    if !(gamma > 0.0 && gamma < 1.0) {
        return Err(Error::param(format!(
            "gamma must lie in (0, 1), got {gamma}"
        )));
    }
    if !(rho > 0.0 && rho <= 1.0) {
        return Err(Error::param(format!("rho must lie in (0, 1], got {rho}")));
    }
    if num_actions == 0 {
        return Err(Error::param("need at least one action"));
    }
    let lambda = epsilon / 3.0;
    if lambda >= 1.0 {
        return Err(Error::param(format!(
            "epsilon = {epsilon} gives lambda >= 1 and a degenerate horizon"
        )));
    }
    let delta = lambda * (1.0 - gamma);
    let horizon = horizon_for(lambda, gamma);

    let h = horizon as f64;
    let k = num_actions as f64;
    let scale = lambda * lambda * rho * rho * (1.0 - gamma) * (1.0 - gamma);
    let bound = (2.0 / scale)
        * (2.0 * h * (2.0 * k * h / scale).ln()
            + (2.0 * (8.0 - 4.0 * rho) / (delta * lambda * (1.0 - gamma) * rho)).ln());
    if !bound.is_finite() || bound >= u64::MAX as f64 {
        return Err(Error::param(
            "sample width overflows; epsilon or rho too small",
        ));
    }
    Ok(Hyperparameters {
        lambda,
        delta,
        horizon,
        sample_width: (bound.ceil() as u64).max(1),
    })
}

/// Smallest `H >= 1` with `gamma^H <= lambda`, for `0 < lambda < 1`.
fn horizon_for(lambda: f64, gamma: f64) -> usize {
    let mut h = (lambda.ln() / gamma.ln()).ceil().max(1.0) as usize;
    // The log ratio can land a hair off an integer; settle on the exact bracket.
    while h > 1 && gamma.powi(h as i32 - 1) <= lambda {
        h -= 1;
    }
    while gamma.powi(h as i32) > lambda {
        h += 1;
    }
    h
}
