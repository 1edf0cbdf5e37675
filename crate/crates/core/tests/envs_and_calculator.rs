mod common;

use proptest::prelude::*;
use rss_core::envs::{
    frozenlake_planning_model, frozenlake_true_model, gaussian_tv, FrozenLakeConfig, GridMap,
};
use rss_core::oracle::tv_distance;
use rss_core::theorem1_hyperparameters;

// 50-digit quadrature of 1/2 * integral |N(0, 1e-3^2) - N(0, s^2)|.
const GAUSSIAN_TV_REFERENCE: [(f64, f64); 3] = [
    (0.07, 0.963226523),
    (0.11, 0.975594227),
    (0.15, 0.981615059),
];

#[test]
fn gaussian_tv_reference_values() {
    for (sigma_high, expected) in GAUSSIAN_TV_REFERENCE {
        let tv = gaussian_tv(1e-3, sigma_high).unwrap();
        assert!(
            (tv - expected).abs() < 1e-9,
            "sigma_high={sigma_high}: {tv} vs {expected}"
        );
    }
}

#[test]
fn gaussian_tv_matches_quadrature_off_the_experiment_grid() {
    for (lo, hi) in [(0.5, 1.0), (1.0, 3.0), (0.01, 0.02), (0.2, 0.21)] {
        let tv = gaussian_tv(lo, hi).unwrap();
        let quad = common::gaussian_tv_quadrature(lo, hi);
        assert!((tv - quad).abs() < 1e-8, "({lo}, {hi}): {tv} vs {quad}");
    }
}

proptest! {
    #![proptest_config(common::cases(128))]

    #[test]
    fn sample_width_never_shrinks_as_epsilon_tightens(
        eps in 0.05f64..2.5, factor in 0.1f64..1.0, gamma in 0.5f64..0.99, rho in 0.05f64..=1.0, actions in 2usize..8,
    ) {
        let loose = theorem1_hyperparameters(eps, gamma, rho, actions).unwrap();
        let tight = theorem1_hyperparameters(eps * factor, gamma, rho, actions).unwrap();
        prop_assert!(tight.sample_width >= loose.sample_width);
        prop_assert!(tight.horizon >= loose.horizon);
        prop_assert!(gamma.powi(loose.horizon as i32) <= loose.lambda * (1.0 + 1e-12));
    }

    #[test]
    fn frozenlake_models_stay_within_the_radius(rho in 0.0f64..=0.6, row in 0usize..8, col in 0usize..8, action in 0usize..4) {
        let config = FrozenLakeConfig { rho, ..FrozenLakeConfig::default() };
        let truth = frozenlake_true_model(&config).unwrap();
        let model = frozenlake_planning_model(&config).unwrap();
        let s = GridMap::standard().index(row, col);
        let p = truth.next_state_law(s, action);
        let q = model.next_state_law(s, action);
        prop_assert!(tv_distance(&p, &q) <= rho + 1e-12);
        if !model.is_hole_adjacent(s) {
            prop_assert_eq!(p, q);
        }
    }
}

#[test]
fn worked_calculator_example() {
    let h = theorem1_hyperparameters(0.3, 0.5, 0.5, 2).unwrap();
    assert_eq!(h.horizon, 4);
    assert!((h.lambda - 0.1).abs() < 1e-15);
    assert!((h.delta - 0.05).abs() < 1e-15);
    assert!((h.sample_width as f64 - 289_200.0).abs() / 289_200.0 < 1e-3);
}
