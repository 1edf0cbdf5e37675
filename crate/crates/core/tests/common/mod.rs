#![allow(dead_code)]

use std::sync::atomic::{AtomicUsize, Ordering};

use proptest::test_runner::Config;
use rand::{Rng, SeedableRng};
use rss_core::{GenerativeModel, SampleRng, TabularMDP, Transition};

/// Property-test settings without on-disk failure persistence.
pub fn cases(n: u32) -> Config {
    Config {
        cases: n,
        failure_persistence: None,
        ..Config::default()
    }
}

/// Random MDP whose last state is the absorbing zero-reward fail state.
///
/// Every non-fail row puts some mass on the fail state so robust and nominal
/// values differ.
pub fn random_mdp(
    rng: &mut SampleRng,
    states: usize,
    actions: usize,
    gamma: f64,
    rho: f64,
) -> TabularMDP {
    let fail = states - 1;
    let mut transitions = vec![vec![vec![0.0; states]; actions]; states];
    let mut rewards = vec![vec![0.0; actions]; states];
    for s in 0..states {
        for a in 0..actions {
            if s == fail {
                transitions[s][a][fail] = 1.0;
                continue;
            }
            let mut row: Vec<f64> = (0..states).map(|_| rng.random::<f64>()).collect();
            // sparsify a little, keeping the fail entry
            for (j, p) in row.iter_mut().enumerate() {
                if j != fail && rng.random::<f64>() < 0.2 {
                    *p = 0.0;
                }
            }
            row[fail] = row[fail].max(0.05);
            let total: f64 = row.iter().sum();
            row.iter_mut().for_each(|p| *p /= total);
            let drift: f64 = 1.0 - row.iter().sum::<f64>();
            row[fail] += drift;
            transitions[s][a] = row;
            rewards[s][a] = rng.random::<f64>();
        }
    }
    let rho_table = (0..states)
        .map(|s| vec![if s == fail { 0.0 } else { rho }; actions])
        .collect();
    TabularMDP::new(transitions, rewards, rho_table, fail, gamma).expect("generated MDP is valid")
}

/// The fixed 5-state, 2-action model used across the planner tests.
pub fn fixture_mdp() -> TabularMDP {
    let mut rng = SampleRng::seed_from_u64(0x5eed_f1c5);
    random_mdp(&mut rng, 5, 2, 0.9, 0.3)
}

/// Counts calls to `sample` on the wrapped model.
pub struct Counting<M> {
    pub inner: M,
    pub calls: AtomicUsize,
}

impl<M> Counting<M> {
    pub fn new(inner: M) -> Self {
        Counting {
            inner,
            calls: AtomicUsize::new(0),
        }
    }

    pub fn take(&self) -> usize {
        self.calls.swap(0, Ordering::SeqCst)
    }
}

impl<M: GenerativeModel> GenerativeModel for Counting<M> {
    type State = M::State;

    fn num_actions(&self) -> usize {
        self.inner.num_actions()
    }

    fn initial_state(&self) -> M::State {
        self.inner.initial_state()
    }

    fn sample(&self, state: &M::State, action: usize, rng: &mut SampleRng) -> Transition<M::State> {
        self.calls.fetch_add(1, Ordering::Relaxed);
        self.inner.sample(state, action, rng)
    }

    fn rho(&self, state: &M::State, action: usize) -> f64 {
        self.inner.rho(state, action)
    }
}

/// Never-terminating chain with random rewards; every sample expands.
pub struct Endless {
    pub actions: usize,
}

impl GenerativeModel for Endless {
    type State = u32;

    fn num_actions(&self) -> usize {
        self.actions
    }

    fn initial_state(&self) -> u32 {
        0
    }

    fn sample(&self, state: &u32, action: usize, rng: &mut SampleRng) -> Transition<u32> {
        let next = rng.random_range(0..8u32);
        let reward = ((*state as usize * 7 + action * 3) % 11) as f64 / 10.0;
        Transition::new(next, reward, false)
    }

    fn rho(&self, state: &u32, _action: usize) -> f64 {
        if state.is_multiple_of(2) {
            0.25
        } else {
            0.0
        }
    }
}

/// Minimizes the dual objective by grid search and a golden-section polish.
///
/// Coarse grid of 1000 steps over `[0, ub]`, a refined grid at `1e-7 * ub`
/// around the coarse argmin, then golden-section search inside the refined
/// bracket. Uses only `objective`, no breakpoint logic.
pub fn grid_minimum(inst: &rss_core::DualInstance) -> f64 {
    let ub = inst.upper_bound();
    let coarse = ub * 1e-3;
    let mut best = (0.0, inst.objective(0.0));
    for k in 0..=1000 {
        let eta = (k as f64 * coarse).min(ub);
        let f = inst.objective(eta);
        if f < best.1 {
            best = (eta, f);
        }
    }
    let fine = ub * 1e-7;
    let lo = (best.0 - coarse).max(0.0);
    let hi = (best.0 + coarse).min(ub);
    let steps = ((hi - lo) / fine).ceil() as usize;
    for k in 0..=steps {
        let eta = (lo + k as f64 * fine).min(hi);
        let f = inst.objective(eta);
        if f < best.1 {
            best = (eta, f);
        }
    }
    let (mut a, mut b) = ((best.0 - fine).max(0.0), (best.0 + fine).min(ub));
    let phi = (5f64.sqrt() - 1.0) / 2.0;
    for _ in 0..200 {
        let x1 = b - phi * (b - a);
        let x2 = a + phi * (b - a);
        if inst.objective(x1) <= inst.objective(x2) {
            b = x2;
        } else {
            a = x1;
        }
    }
    best.1.min(inst.objective(0.5 * (a + b)))
}

/// Adaptive Simpson quadrature of `f` over `[a, b]`.
pub fn adaptive_simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    fn simpson(f: &dyn Fn(f64) -> f64, a: f64, fa: f64, b: f64, fb: f64) -> (f64, f64, f64) {
        let m = 0.5 * (a + b);
        let fm = f(m);
        (m, fm, (b - a) / 6.0 * (fa + 4.0 * fm + fb))
    }
    #[allow(clippy::too_many_arguments)]
    fn recurse(
        f: &dyn Fn(f64) -> f64,
        a: f64,
        fa: f64,
        b: f64,
        fb: f64,
        whole: f64,
        m: f64,
        fm: f64,
        tol: f64,
        depth: u32,
    ) -> f64 {
        let (lm, flm, left) = simpson(f, a, fa, m, fm);
        let (rm, frm, right) = simpson(f, m, fm, b, fb);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * tol {
            return left + right + delta / 15.0;
        }
        recurse(f, a, fa, m, fm, left, lm, flm, tol / 2.0, depth - 1)
            + recurse(f, m, fm, b, fb, right, rm, frm, tol / 2.0, depth - 1)
    }
    let (fa, fb) = (f(a), f(b));
    let (m, fm, whole) = simpson(f, a, fa, b, fb);
    recurse(f, a, fa, b, fb, whole, m, fm, tol, 50)
}

/// `1/2 * integral |N(0, s_l^2) - N(0, s_h^2)|` by quadrature.
pub fn gaussian_tv_quadrature(sigma_low: f64, sigma_high: f64) -> f64 {
    let pdf =
        |x: f64, s: f64| (-0.5 * (x / s).powi(2)).exp() / (s * (2.0 * std::f64::consts::PI).sqrt());
    let gap = |x: f64| (pdf(x, sigma_low) - pdf(x, sigma_high)).abs();
    // symmetric integrand; split where the narrow density changes fastest
    let mut knots: Vec<f64> = (0..=16).map(|k| k as f64 * sigma_low).collect();
    let mut x = 16.0 * sigma_low;
    while x < 14.0 * sigma_high {
        x = (x * 1.5).min(14.0 * sigma_high);
        knots.push(x);
    }
    let half: f64 = knots
        .windows(2)
        .map(|w| adaptive_simpson(&gap, w[0], w[1], 1e-13))
        .sum();
    half
}
