//! Exact solvers for small finite MDPs, used as ground truth for the planners.
//!
//! # Matrix file format
//!
//! Whitespace-separated numbers; `#` starts a comment that runs to the end of
//! the line. In order:
//!
//! 1. header: `S A gamma fail_state`
//! 2. rewards: `S` rows of `A` numbers, `r(s, a)`
//! 3. transitions: `S * A` rows of `S` numbers, row `s * A + a` is `P(. | s, a)`
//! 4. radii: `S` rows of `A` numbers, `rho(s, a)`
//!
//! Terminal states are the fail state plus every state that is absorbing with
//! zero reward under all actions.

use std::fmt::Write as _;
use std::path::Path;

use crate::dual::{dual_minimize, DualInstance};
use crate::error::{Error, Result};

const ROW_SUM_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct TabularMDP {
    num_states: usize,
    num_actions: usize,
    /// Row-major `[s][a][s']`.
    transitions: Vec<f64>,
    rewards: Vec<f64>,
    rho: Vec<f64>,
    fail_state: usize,
    terminal: Vec<bool>,
    gamma: f64,
}

impl TabularMDP {
    /// `transitions[s][a]` is the nominal next-state law, `rewards[s][a]` and
    /// `rho[s][a]` the reward and uncertainty radius.
    pub fn new(
        transitions: Vec<Vec<Vec<f64>>>,
        rewards: Vec<Vec<f64>>,
        rho: Vec<Vec<f64>>,
        fail_state: usize,
        gamma: f64,
    ) -> Result<Self> {
        let num_states = transitions.len();
        if num_states == 0 {
            return Err(Error::input("MDP needs at least one state"));
        }
        let num_actions = transitions[0].len();
        if num_actions == 0 {
            return Err(Error::input("MDP needs at least one action"));
        }
        let shape_ok = transitions.iter().all(|per_a| {
            per_a.len() == num_actions && per_a.iter().all(|row| row.len() == num_states)
        }) && rewards.len() == num_states
            && rewards.iter().all(|r| r.len() == num_actions)
            && rho.len() == num_states
            && rho.iter().all(|r| r.len() == num_actions);
        if !shape_ok {
            return Err(Error::input(
                "transition, reward and rho tables have inconsistent shapes",
            ));
        }
        let mdp = TabularMDP {
            num_states,
            num_actions,
            transitions: transitions.into_iter().flatten().flatten().collect(),
            rewards: rewards.into_iter().flatten().collect(),
            rho: rho.into_iter().flatten().collect(),
            fail_state,
            terminal: vec![false; num_states],
            gamma,
        };
        mdp.finish()
    }

    fn finish(mut self) -> Result<Self> {
        if !(0.0..1.0).contains(&self.gamma) {
            return Err(Error::param(format!(
                "gamma must lie in [0, 1), got {}",
                self.gamma
            )));
        }
        if self.fail_state >= self.num_states {
            return Err(Error::input(format!(
                "fail state {} out of range",
                self.fail_state
            )));
        }
        for s in 0..self.num_states {
            for a in 0..self.num_actions {
                let row = self.row(s, a);
                if row.iter().any(|p| !p.is_finite() || *p < 0.0) {
                    return Err(Error::input(format!(
                        "P(. | {s}, {a}) has a negative or non-finite entry"
                    )));
                }
                let total: f64 = row.iter().sum();
                if (total - 1.0).abs() > ROW_SUM_TOL {
                    return Err(Error::input(format!(
                        "P(. | {s}, {a}) sums to {total}, not 1"
                    )));
                }
                let r = self.reward(s, a);
                if !(0.0..=1.0).contains(&r) {
                    return Err(Error::input(format!("r({s}, {a}) = {r} is outside [0, 1]")));
                }
                let rho = self.rho(s, a);
                if !(0.0..=1.0).contains(&rho) {
                    return Err(Error::input(format!(
                        "rho({s}, {a}) = {rho} is outside [0, 1]"
                    )));
                }
            }
        }
        for s in 0..self.num_states {
            self.terminal[s] =
                (0..self.num_actions).all(|a| self.row(s, a)[s] == 1.0 && self.reward(s, a) == 0.0);
        }
        if !self.terminal[self.fail_state] {
            return Err(Error::input(
                "fail state must be absorbing with zero reward under every action",
            ));
        }
        Ok(self)
    }

    pub fn num_states(&self) -> usize {
        self.num_states
    }

    pub fn num_actions(&self) -> usize {
        self.num_actions
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn fail_state(&self) -> usize {
        self.fail_state
    }

    pub fn is_terminal(&self, s: usize) -> bool {
        self.terminal[s]
    }

    pub fn row(&self, s: usize, a: usize) -> &[f64] {
        let start = (s * self.num_actions + a) * self.num_states;
        &self.transitions[start..start + self.num_states]
    }

    pub fn reward(&self, s: usize, a: usize) -> f64 {
        self.rewards[s * self.num_actions + a]
    }

    pub fn rho(&self, s: usize, a: usize) -> f64 {
        self.rho[s * self.num_actions + a]
    }

    /// Copy with `rho(s, a)` replaced by `rho` everywhere.
    pub fn with_uniform_rho(&self, rho: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&rho) {
            return Err(Error::param(format!("rho must lie in [0, 1], got {rho}")));
        }
        let mut out = self.clone();
        out.rho.iter_mut().for_each(|r| *r = rho);
        Ok(out)
    }

    pub fn with_gamma(&self, gamma: f64) -> Result<Self> {
        let mut out = self.clone();
        out.gamma = gamma;
        out.finish()
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)?;
        Self::parse(&text).map_err(|e| match e {
            Error::Parse { location, message } => Error::Parse {
                location: format!("{}: {location}", path.display()),
                message,
            },
            other => other,
        })
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut tokens = text
            .lines()
            .enumerate()
            .flat_map(|(i, line)| {
                let content = line.split('#').next().unwrap_or("");
                content.split_whitespace().map(move |t| (i + 1, t))
            })
            .peekable();
        let mut next = |what: &str| -> Result<(usize, f64)> {
            let (line, tok) = tokens.next().ok_or_else(|| Error::Parse {
                location: "end of input".into(),
                message: format!("expected {what}"),
            })?;
            let v = tok.parse::<f64>().map_err(|_| Error::Parse {
                location: format!("line {line}"),
                message: format!("expected {what}, found `{tok}`"),
            })?;
            Ok((line, v))
        };
        let count = |(line, v): (usize, f64), what: &str| -> Result<usize> {
            if v < 0.0 || v.fract() != 0.0 {
                return Err(Error::Parse {
                    location: format!("line {line}"),
                    message: format!("{what} must be a nonnegative integer, found {v}"),
                });
            }
            Ok(v as usize)
        };
        let s = count(next("state count")?, "state count")?;
        let a = count(next("action count")?, "action count")?;
        let gamma = next("gamma")?.1;
        let fail = count(next("fail state")?, "fail state")?;

        let mut rewards = vec![vec![0.0; a]; s];
        for row in rewards.iter_mut() {
            for r in row.iter_mut() {
                *r = next("reward")?.1;
            }
        }
        let mut transitions = vec![vec![vec![0.0; s]; a]; s];
        for per_a in transitions.iter_mut() {
            for row in per_a.iter_mut() {
                for p in row.iter_mut() {
                    *p = next("transition probability")?.1;
                }
            }
        }
        let mut rho = vec![vec![0.0; a]; s];
        for row in rho.iter_mut() {
            for r in row.iter_mut() {
                *r = next("rho")?.1;
            }
        }
        if let Ok((line, _)) = next("end of input") {
            return Err(Error::Parse {
                location: format!("line {line}"),
                message: "trailing data after the rho table".into(),
            });
        }
        Self::new(transitions, rewards, rho, fail, gamma)
    }

    /// Serializes in the matrix file format; `parse(to_text())` round-trips.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "# S A gamma fail_state");
        let _ = writeln!(
            out,
            "{} {} {} {}",
            self.num_states, self.num_actions, self.gamma, self.fail_state
        );
        let _ = writeln!(out, "# rewards r(s, a)");
        for s in 0..self.num_states {
            let row: Vec<String> = (0..self.num_actions)
                .map(|a| self.reward(s, a).to_string())
                .collect();
            let _ = writeln!(out, "{}", row.join(" "));
        }
        let _ = writeln!(out, "# transitions P(s' | s, a), row s * A + a");
        for s in 0..self.num_states {
            for a in 0..self.num_actions {
                let row: Vec<String> = self.row(s, a).iter().map(|p| p.to_string()).collect();
                let _ = writeln!(out, "{}", row.join(" "));
            }
        }
        let _ = writeln!(out, "# rho(s, a)");
        for s in 0..self.num_states {
            let row: Vec<String> = (0..self.num_actions)
                .map(|a| self.rho(s, a).to_string())
                .collect();
            let _ = writeln!(out, "{}", row.join(" "));
        }
        out
    }
}

/// One application of a Bellman operator over a tabular MDP.
#[derive(Debug, Clone, Copy)]
pub struct BellmanOperator<'a> {
    mdp: &'a TabularMDP,
    robust: bool,
}

impl<'a> BellmanOperator<'a> {
    /// TV-robust operator; pairs with `rho(s, a) = 0` use the nominal expectation.
    pub fn robust(mdp: &'a TabularMDP) -> Self {
        BellmanOperator { mdp, robust: true }
    }

    pub fn nominal(mdp: &'a TabularMDP) -> Self {
        BellmanOperator { mdp, robust: false }
    }

    pub fn q_value(&self, values: &[f64], s: usize, a: usize) -> f64 {
        let mdp = self.mdp;
        let reward = mdp.reward(s, a);
        let row = mdp.row(s, a);
        let rho = if self.robust { mdp.rho(s, a) } else { 0.0 };
        if rho > 0.0 {
            let (vals, weights): (Vec<f64>, Vec<f64>) = row
                .iter()
                .zip(values)
                .filter(|(p, _)| **p > 0.0)
                .map(|(p, v)| (*v, *p))
                .unzip();
            let instance = DualInstance::weighted(vals, weights, rho, mdp.gamma);
            let sol = dual_minimize(&instance)
                .expect("value-iteration iterates are valid dual instances");
            reward - mdp.gamma * sol.f_star
        } else {
            reward + mdp.gamma * row.iter().zip(values).map(|(p, v)| p * v).sum::<f64>()
        }
    }

    pub fn apply(&self, values: &[f64]) -> Vec<f64> {
        (0..self.mdp.num_states)
            .map(|s| {
                (0..self.mdp.num_actions)
                    .map(|a| self.q_value(values, s, a))
                    .fold(f64::NEG_INFINITY, f64::max)
            })
            .collect()
    }

    /// Iterates from `V = 0` until the sup-norm change drops below
    /// `tolerance * (1 - gamma) / (2 gamma)`, which bounds the distance to the
    /// fixed point by `tolerance / 2`.
    pub fn solve(&self, tolerance: f64) -> Result<Vec<f64>> {
        if tolerance.is_nan() || tolerance <= 0.0 {
            return Err(Error::param("tolerance must be positive"));
        }
        let gamma = self.mdp.gamma;
        let threshold = if gamma == 0.0 {
            f64::INFINITY
        } else {
            tolerance * (1.0 - gamma) / (2.0 * gamma)
        };
        let mut values = vec![0.0; self.mdp.num_states];
        loop {
            let next = self.apply(&values);
            let change = sup_distance(&next, &values);
            values = next;
            if change < threshold || change == 0.0 {
                return Ok(values);
            }
        }
    }

    /// Finite-horizon values: `depth` applications starting from `V = 0`.
    pub fn truncated(&self, depth: usize) -> Vec<f64> {
        let mut values = vec![0.0; self.mdp.num_states];
        for _ in 0..depth {
            values = self.apply(&values);
        }
        values
    }
}

pub fn sup_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

pub fn robust_value_iteration(mdp: &TabularMDP, tolerance: f64) -> Result<Vec<f64>> {
    BellmanOperator::robust(mdp).solve(tolerance)
}

pub fn nominal_value_iteration(mdp: &TabularMDP, tolerance: f64) -> Result<Vec<f64>> {
    BellmanOperator::nominal(mdp).solve(tolerance)
}

/// Distribution in the TV ball of radius `rho` around `nominal_row` that
/// minimizes the expectation of `values`.
///
/// Up to `rho` of probability mass is peeled off the highest-value states and
/// placed on the lowest-value state (the fail state when values are pinned
/// there at 0).
pub fn tv_worst_case_distribution(nominal_row: &[f64], values: &[f64], rho: f64) -> Vec<f64> {
    assert_eq!(nominal_row.len(), values.len(), "row and values must align");
    let mut q = nominal_row.to_vec();
    if q.is_empty() {
        return q;
    }
    let sink = values
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .map(|(i, _)| i)
        .unwrap_or(0);
    let mut order: Vec<usize> = (0..q.len()).filter(|&i| i != sink).collect();
    order.sort_by(|&i, &j| values[j].total_cmp(&values[i]).then(i.cmp(&j)));
    let mut budget = rho.max(0.0);
    let mut moved = 0.0;
    for i in order {
        if budget <= 0.0 {
            break;
        }
        let take = q[i].min(budget);
        q[i] -= take;
        budget -= take;
        moved += take;
    }
    q[sink] += moved;
    q
}

/// `1/2 * ||p - q||_1`.
pub fn tv_distance(p: &[f64], q: &[f64]) -> f64 {
    0.5 * p.iter().zip(q).map(|(a, b)| (a - b).abs()).sum::<f64>()
}
