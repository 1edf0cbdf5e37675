mod common;

use common::{fixture_mdp, Counting, Endless};
use proptest::prelude::*;
use rss_core::envs::{frozenlake_planning_model, FrozenLakeConfig, GridMap, TabularModel};
use rss_core::{
    plan, plan_parallel, rss_plan, rss_variable_rho_plan, ss_plan, PlannerConfig, Stream,
};

fn tabular(rho: Option<f64>) -> TabularModel {
    let mdp = fixture_mdp();
    TabularModel::new(match rho {
        Some(r) => mdp.with_uniform_rho(r).unwrap(),
        None => mdp,
    })
}

proptest! {
    #![proptest_config(common::cases(64))]

    #[test]
    fn same_stream_same_plan(state in 0usize..4, seed in any::<u64>(), width in 1usize..5, depth in 0usize..4) {
        let model = tabular(None);
        let cfg = PlannerConfig::new(width, depth.max(1), 0.9).robust(0.3);
        let a = rss_plan(&model, &state, depth, &cfg, Stream::from_seed(seed)).unwrap();
        let b = rss_plan(&model, &state, depth, &cfg, Stream::from_seed(seed)).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn values_stay_in_bounds(state in 0usize..5, seed in any::<u64>(), width in 1usize..5, depth in 0usize..4, rho in 0.01f64..=1.0) {
        let model = tabular(None);
        let cfg = PlannerConfig::new(width, depth.max(1), 0.9);
        let bound = cfg.value_bound();
        for cfg in [cfg.nominal(), cfg.robust(rho), cfg.per_state_robust()] {
            let r = plan(&model, &state, depth, &cfg, Stream::from_seed(seed)).unwrap();
            prop_assert!(r.value >= 0.0 && r.value <= bound + 1e-12);
            for q in &r.per_action_values {
                prop_assert!(*q >= 0.0 && *q <= bound + 1e-12);
            }
        }
    }

    #[test]
    fn robust_never_exceeds_nominal(state in 0usize..4, seed in any::<u64>(), width in 1usize..6, depth in 1usize..4, rho in 0.01f64..=1.0) {
        let model = tabular(None);
        let cfg = PlannerConfig::new(width, depth.max(1), 0.9);
        let ss = ss_plan(&model, &state, depth, &cfg.nominal(), Stream::from_seed(seed)).unwrap();
        let rss = rss_plan(&model, &state, depth, &cfg.robust(rho), Stream::from_seed(seed)).unwrap();
        let tighter = rss_plan(&model, &state, depth, &cfg.robust(rho * 0.5), Stream::from_seed(seed)).unwrap();
        for a in 0..2 {
            prop_assert!(rss.per_action_values[a] <= ss.per_action_values[a] + 1e-12);
            prop_assert!(rss.per_action_values[a] <= tighter.per_action_values[a] + 1e-12);
        }
    }

    #[test]
    fn zero_radius_everywhere_is_sparse_sampling(state in 0usize..5, seed in any::<u64>(), width in 1usize..5, depth in 0usize..4) {
        let model = tabular(Some(0.0));
        let cfg = PlannerConfig::new(width, depth.max(1), 0.9);
        let variable = rss_variable_rho_plan(&model, &state, depth, &cfg.per_state_robust(), Stream::from_seed(seed)).unwrap();
        let ss = ss_plan(&model, &state, depth, &cfg.nominal(), Stream::from_seed(seed)).unwrap();
        prop_assert_eq!(bits(&variable.per_action_values), bits(&ss.per_action_values));
        prop_assert_eq!(variable.best_action, ss.best_action);
    }

    #[test]
    fn constant_radius_everywhere_is_rss(state in 0usize..5, seed in any::<u64>(), width in 1usize..5, depth in 0usize..4, rho in 0.01f64..=1.0) {
        let model = tabular(Some(rho));
        let cfg = PlannerConfig::new(width, depth.max(1), 0.9);
        let variable = rss_variable_rho_plan(&model, &state, depth, &cfg.per_state_robust(), Stream::from_seed(seed)).unwrap();
        let rss = rss_plan(&model, &state, depth, &cfg.robust(rho), Stream::from_seed(seed)).unwrap();
        prop_assert_eq!(bits(&variable.per_action_values), bits(&rss.per_action_values));
    }

    #[test]
    fn parallel_root_matches_sequential(seed in any::<u64>(), width in 1usize..4, depth in 0usize..4, actions in 1usize..4) {
        let model = Endless { actions };
        let cfg = PlannerConfig::new(width, depth.max(1), 0.95).per_state_robust();
        let a = plan(&model, &0, depth, &cfg, Stream::from_seed(seed)).unwrap();
        let b = plan_parallel(&model, &0, depth, &cfg, Stream::from_seed(seed)).unwrap();
        prop_assert_eq!(bits(&a.per_action_values), bits(&b.per_action_values));
        prop_assert_eq!(a.best_action, b.best_action);
    }
}

fn bits(v: &[f64]) -> Vec<u64> {
    v.iter().map(|x| x.to_bits()).collect()
}

#[test]
fn node_count_matches_tree_size() {
    for actions in 1..=3 {
        for width in 1..=4 {
            for depth in 0..=4 {
                let model = Counting::new(Endless { actions });
                let cfg = PlannerConfig::new(width, depth.max(1), 0.9).robust(0.2);
                rss_plan(&model, &0, depth, &cfg, Stream::from_seed(3)).unwrap();
                let branching = actions * width;
                let expected: usize = (1..=depth).map(|d| branching.pow(d as u32)).sum();
                assert_eq!(model.take(), expected, "|A|={actions} C={width} H={depth}");
                // the deepest level alone holds (|A| C)^H samples
                if depth > 0 {
                    let shallower: usize = (1..depth).map(|d| branching.pow(d as u32)).sum();
                    assert_eq!(expected - shallower, branching.pow(depth as u32));
                }
            }
        }
    }
}

#[test]
fn terminal_successors_are_not_expanded() {
    // from the fail state every sample is terminal, so only the root level is sampled
    let model = Counting::new(tabular(None));
    let cfg = PlannerConfig::new(3, 3, 0.9).nominal();
    let fail = model.inner.mdp().fail_state();
    let r = ss_plan(&model, &fail, 3, &cfg, Stream::from_seed(0)).unwrap();
    assert_eq!(model.take(), 2 * 3);
    assert_eq!(r.value, 0.0);
}

#[test]
fn frozenlake_robust_backups_only_near_holes() {
    let config = FrozenLakeConfig {
        rho: 0.3,
        ..FrozenLakeConfig::default()
    };
    let model = frozenlake_planning_model(&config).unwrap();
    let grid = GridMap::standard();
    let cfg = PlannerConfig::new(6, 2, 0.99);

    // two steps from the start never reach a hole-adjacent cell
    let start = grid.index(0, 0);
    assert!(!model.is_hole_adjacent(start));
    let variable = rss_variable_rho_plan(
        &model,
        &start,
        2,
        &cfg.per_state_robust(),
        Stream::from_seed(11),
    )
    .unwrap();
    let ss = ss_plan(&model, &start, 2, &cfg.nominal(), Stream::from_seed(11)).unwrap();
    assert_eq!(
        bits(&variable.per_action_values),
        bits(&ss.per_action_values)
    );

    // next to a hole the robust backup bites
    let risky = grid.index(2, 2);
    assert!(model.is_hole_adjacent(risky));
    let variable = rss_variable_rho_plan(
        &model,
        &risky,
        2,
        &cfg.per_state_robust(),
        Stream::from_seed(11),
    )
    .unwrap();
    let ss = ss_plan(&model, &risky, 2, &cfg.nominal(), Stream::from_seed(11)).unwrap();
    for a in 0..4 {
        assert!(variable.per_action_values[a] < ss.per_action_values[a]);
    }
}
