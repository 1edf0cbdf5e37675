//! Robust sparse sampling approaching the exact finite-horizon robust value
//! as the sample width grows.
//!
//! ```text
//! cargo run --release --example planner_convergence
//! ```

use rss_core::envs::TabularModel;
use rss_core::{plan_parallel, BellmanOperator, PlannerConfig, Stream, TabularMDP};

fn main() -> rss_core::Result<()> {
    let mdp = TabularMDP::load(concat!(env!("CARGO_MANIFEST_DIR"), "/data/cliff.mdp"))?
        .with_uniform_rho(0.3)?;
    let depth = 2;
    let exact = BellmanOperator::robust(&mdp).truncated(depth)[0];
    let model = TabularModel::new(mdp.clone());
    println!("{depth}-step robust value of state 0: {exact:.5}");
    println!(
        "{:>6} {:>10} {:>10} {:>10}",
        "C", "mean", "max |err|", "seeds"
    );
    let seeds = 20;
    for width in [10, 50, 250, 1000] {
        let config = PlannerConfig::new(width, depth, mdp.gamma()).robust(0.3);
        let mut total = 0.0;
        let mut worst: f64 = 0.0;
        for seed in 0..seeds {
            let v = plan_parallel(&model, &0, depth, &config, Stream::from_seed(seed))?.value;
            total += v;
            worst = worst.max((v - exact).abs());
        }
        println!(
            "{width:>6} {:>10.5} {worst:>10.5} {seeds:>10}",
            total / seeds as f64
        );
    }
    Ok(())
}
