use rand::Rng;

use crate::model::{GenerativeModel, SampleRng, Transition};
use crate::oracle::TabularMDP;

/// Samples transitions of a [`TabularMDP`] by inverse CDF over `P(. | s, a)`.
#[derive(Debug, Clone)]
pub struct TabularModel {
    mdp: TabularMDP,
    initial: usize,
}

impl TabularModel {
    pub fn new(mdp: TabularMDP) -> Self {
        TabularModel { mdp, initial: 0 }
    }

    pub fn with_initial_state(mut self, state: usize) -> Self {
        assert!(state < self.mdp.num_states(), "initial state out of range");
        self.initial = state;
        self
    }

    pub fn mdp(&self) -> &TabularMDP {
        &self.mdp
    }
}

impl GenerativeModel for TabularModel {
    type State = usize;

    fn num_actions(&self) -> usize {
        self.mdp.num_actions()
    }

    fn initial_state(&self) -> usize {
        self.initial
    }

    fn sample(&self, state: &usize, action: usize, rng: &mut SampleRng) -> Transition<usize> {
        let s = *state;
        let row = self.mdp.row(s, action);
        let u: f64 = rng.random();
        let mut acc = 0.0;
        // Fall back to the last state with positive mass if rounding leaves u uncovered.
        let mut next = row.iter().rposition(|&p| p > 0.0).unwrap_or(s);
        for (j, &p) in row.iter().enumerate() {
            acc += p;
            if u < acc && p > 0.0 {
                next = j;
                break;
            }
        }
        Transition::new(next, self.mdp.reward(s, action), self.mdp.is_terminal(next))
    }

    fn rho(&self, state: &usize, action: usize) -> f64 {
        self.mdp.rho(*state, action)
    }

    fn is_success(&self, _state: &usize, terminated: bool, steps: usize, max_steps: usize) -> bool {
        !terminated && steps >= max_steps
    }
}
