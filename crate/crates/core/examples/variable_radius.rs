//! Robust backups only where the model is uncertain.
//!
//! On FrozenLake the planning model is wrong only next to holes. The
//! variable-radius planner applies the robust backup there and the plain
//! mean elsewhere, so its action values match sparse sampling on safe ground
//! and turn pessimistic next to a hole.
//!
//! ```text
//! cargo run --release --example variable_radius
//! ```

use rss_core::envs::{frozenlake_planning_model, FrozenLakeConfig, GridMap};
use rss_core::{rss_plan, rss_variable_rho_plan, ss_plan, PlannerConfig, Stream};

const ACTIONS: [&str; 4] = ["left", "down", "right", "up"];

fn main() -> rss_core::Result<()> {
    let config = FrozenLakeConfig {
        rho: 0.5,
        ..FrozenLakeConfig::default()
    };
    let model = frozenlake_planning_model(&config)?;
    let grid = GridMap::standard();
    println!("{grid}");
    let cfg = PlannerConfig::new(20, 3, 0.99);

    for (row, col) in [(0, 0), (2, 2), (4, 2), (6, 5)] {
        let s = grid.index(row, col);
        let stream = Stream::from_seed(7);
        let ss = ss_plan(&model, &s, 3, &cfg.nominal(), stream)?;
        let var = rss_variable_rho_plan(&model, &s, 3, &cfg.per_state_robust(), stream)?;
        let rss = rss_plan(&model, &s, 3, &cfg.robust(config.rho), stream)?;
        println!(
            "cell ({row}, {col}) hole-adjacent: {}",
            if model.is_hole_adjacent(s) {
                "yes"
            } else {
                "no"
            }
        );
        for (name, r) in [("ss", &ss), ("rss-variable", &var), ("rss", &rss)] {
            let q: Vec<String> = r
                .per_action_values
                .iter()
                .map(|v| format!("{v:.4}"))
                .collect();
            println!(
                "  {name:<13} [{}] -> {}",
                q.join(", "),
                ACTIONS[r.best_action]
            );
        }
    }
    Ok(())
}
