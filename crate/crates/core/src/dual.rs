//! Exact minimization of the sample-average dual objective of a
//! total-variation robust backup.
//!
//! For child values `V_i` with weights `w_i`, radius `rho` and discount
//! `gamma`, the robust backup needs
//!
//! ```text
//! min_{eta in [0, 2 / (rho (1 - gamma))]}  F(eta) = sum_i w_i (eta - V_i)_+ - eta (1 - rho)
//! ```
//!
//! `F` is convex and piecewise linear with kinks at the `V_i`, so its minimum
//! sits at `0`, at a kink inside the interval, or at the upper end. Sorting
//! the kinks and sweeping once finds it in `O(C log C)`.
//!
//! The fail-state convention (`inf V = 0`) is baked into the objective; all
//! values must be nonnegative.

use serde::Serialize;

use crate::error::{Error, Result};

/// Data of one dual minimization.
#[derive(Debug, Clone, PartialEq)]
pub struct DualInstance {
    pub values: Vec<f64>,
    /// Probability weights; `None` means uniform `1 / C`.
    pub weights: Option<Vec<f64>>,
    pub rho: f64,
    pub gamma: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DualSolution {
    /// Smallest evaluated point attaining the minimum.
    pub eta_star: f64,
    pub f_star: f64,
}

const WEIGHT_SUM_TOL: f64 = 1e-12;

impl DualInstance {
    pub fn new(values: Vec<f64>, rho: f64, gamma: f64) -> Self {
        DualInstance {
            values,
            weights: None,
            rho,
            gamma,
        }
    }

    pub fn weighted(values: Vec<f64>, weights: Vec<f64>, rho: f64, gamma: f64) -> Self {
        DualInstance {
            values,
            weights: Some(weights),
            rho,
            gamma,
        }
    }

    /// Right end of the dual interval, `2 / (rho (1 - gamma))`.
    pub fn upper_bound(&self) -> f64 {
        2.0 / (self.rho * (1.0 - self.gamma))
    }

    /// Direct `O(C)` evaluation of the objective at `eta`.
    pub fn objective(&self, eta: f64) -> f64 {
        let n = self.values.len() as f64;
        let hinge: f64 = match &self.weights {
            Some(w) => self
                .values
                .iter()
                .zip(w)
                .map(|(v, w)| w * (eta - v).max(0.0))
                .sum(),
            None => self.values.iter().map(|v| (eta - v).max(0.0)).sum::<f64>() / n,
        };
        hinge - eta * (1.0 - self.rho)
    }

    /// Weighted mean of the values.
    pub fn mean(&self) -> f64 {
        match &self.weights {
            Some(w) => self.values.iter().zip(w).map(|(v, w)| v * w).sum(),
            None => self.values.iter().sum::<f64>() / self.values.len() as f64,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.values.is_empty() {
            return Err(Error::input("dual instance needs at least one value"));
        }
        if let Some(v) = self.values.iter().find(|v| !v.is_finite() || **v < 0.0) {
            return Err(Error::input(format!(
                "leaf values must be finite and >= 0, got {v}"
            )));
        }
        if !(self.rho > 0.0 && self.rho <= 1.0) {
            return Err(Error::param(format!(
                "rho must lie in (0, 1] for a robust backup, got {} (route rho = 0 to the nominal backup)",
                self.rho
            )));
        }
        if !(0.0..1.0).contains(&self.gamma) {
            return Err(Error::param(format!(
                "gamma must lie in [0, 1), got {}",
                self.gamma
            )));
        }
        if let Some(w) = &self.weights {
            if w.len() != self.values.len() {
                return Err(Error::input(format!(
                    "{} weights for {} values",
                    w.len(),
                    self.values.len()
                )));
            }
            if w.iter().any(|w| !w.is_finite() || *w < 0.0) {
                return Err(Error::input("weights must be finite and nonnegative"));
            }
            let total: f64 = w.iter().sum();
            if (total - 1.0).abs() > WEIGHT_SUM_TOL {
                return Err(Error::input(format!("weights sum to {total}, not 1")));
            }
        }
        Ok(())
    }
}

/// Minimizes the dual objective exactly.
pub fn dual_minimize(instance: &DualInstance) -> Result<DualSolution> {
    instance.validate()?;
    let upper = instance.upper_bound();
    let solution = match &instance.weights {
        None => {
            let mut sorted = instance.values.clone();
            sort_values(&mut sorted);
            minimize_sorted_uniform(&sorted, instance.rho, upper)
        }
        Some(weights) => {
            let mut pairs: Vec<(f64, f64)> = instance
                .values
                .iter()
                .copied()
                .zip(weights.iter().copied())
                .collect();
            pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
            minimize_sorted_weighted(&pairs, instance.rho, upper)
        }
    };
    Ok(solution)
}

/// `reward - gamma * min F`.
///
/// Lies in `[reward, reward + gamma * mean(values)]`.
pub fn robust_backup(reward: f64, instance: &DualInstance) -> Result<f64> {
    let solution = dual_minimize(instance)?;
    Ok(reward - instance.gamma * solution.f_star)
}

/// `reward + gamma * mean(values)`.
pub fn nominal_backup(reward: f64, values: &[f64], gamma: f64) -> Result<f64> {
    if values.is_empty() {
        return Err(Error::input("nominal backup needs at least one value"));
    }
    Ok(nominal_unchecked(reward, values, gamma))
}

pub(crate) fn nominal_unchecked(reward: f64, values: &[f64], gamma: f64) -> f64 {
    reward + gamma * (values.iter().sum::<f64>() / values.len() as f64)
}

/// Robust backup on planner-produced values (nonnegative, finite, nonempty)
/// with `0 < rho <= 1`. Sorts `values` in place.
pub(crate) fn robust_unchecked(reward: f64, values: &mut [f64], rho: f64, gamma: f64) -> f64 {
    sort_values(values);
    let upper = 2.0 / (rho * (1.0 - gamma));
    reward - gamma * minimize_sorted_uniform(values, rho, upper).f_star
}

fn sort_values(values: &mut [f64]) {
    values.sort_by(|a, b| a.total_cmp(b));
}

/// Tracks the running minimum over candidates visited in increasing `eta`.
struct Scan {
    eta_star: f64,
    f_star: f64,
}

impl Scan {
    fn start() -> Self {
        // eta = 0: every hinge is inactive because values are >= 0.
        Scan {
            eta_star: 0.0,
            f_star: 0.0,
        }
    }

    fn offer(&mut self, eta: f64, f: f64) {
        // Points that only tie up to rounding keep the earlier (smaller) eta.
        let slack = 1e-12 * (1.0 + self.f_star.abs());
        if f < self.f_star - slack {
            self.eta_star = eta;
            self.f_star = f;
        } else if f < self.f_star {
            self.f_star = f;
        }
    }

    fn finish(self) -> DualSolution {
        DualSolution {
            eta_star: self.eta_star,
            f_star: self.f_star,
        }
    }
}

fn minimize_sorted_uniform(sorted: &[f64], rho: f64, upper: f64) -> DualSolution {
    let n = sorted.len() as f64;
    let slope_penalty = 1.0 - rho;
    let mut scan = Scan::start();
    // hinge = (1/C) sum_{j < k} (v_k - v_j), updated as eta moves right.
    let mut hinge_total = 0.0;
    let mut prev = 0.0;
    let mut active = 0usize;
    for &v in sorted {
        if v > upper {
            break;
        }
        hinge_total += active as f64 * (v - prev);
        prev = v;
        scan.offer(v, hinge_total / n - v * slope_penalty);
        active += 1;
    }
    hinge_total += active as f64 * (upper - prev);
    scan.offer(upper, hinge_total / n - upper * slope_penalty);
    scan.finish()
}

fn minimize_sorted_weighted(sorted: &[(f64, f64)], rho: f64, upper: f64) -> DualSolution {
    let slope_penalty = 1.0 - rho;
    let mut scan = Scan::start();
    let mut hinge = 0.0;
    let mut prev = 0.0;
    let mut active_weight = 0.0;
    for &(v, w) in sorted {
        if v > upper {
            break;
        }
        hinge += active_weight * (v - prev);
        prev = v;
        scan.offer(v, hinge - v * slope_penalty);
        active_weight += w;
    }
    hinge += active_weight * (upper - prev);
    scan.offer(upper, hinge - upper * slope_penalty);
    scan.finish()
}
