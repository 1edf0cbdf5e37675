//! Mean discounted return on FrozenLake as the model error grows.
//!
//! ```text
//! cargo run --release --example frozenlake_sweep [seeds] [sample_width]
//! ```
//!
//! 100 seeds at C = 15 take a few minutes on one core.

use rss_core::harness::output::format_sweep_table;
use rss_core::harness::{sweep, ExperimentConfig, PlannerKind, SweepParameter};

fn main() -> rss_core::Result<()> {
    let mut args = std::env::args().skip(1);
    let seeds = args.next().and_then(|s| s.parse().ok()).unwrap_or(20);
    let width = args.next().and_then(|s| s.parse().ok()).unwrap_or(10);
    let template = ExperimentConfig {
        num_seeds: seeds,
        sample_width: width,
        ..ExperimentConfig::frozenlake()
    };
    let planners = [
        PlannerKind::RssVariable,
        PlannerKind::Ss,
        PlannerKind::SsTrueDynamics,
    ];
    let rhos = [0.1, 0.2, 0.3, 0.4, 0.5, 0.6];
    let points = sweep(&template, SweepParameter::Rho, &rhos, &planners)?;
    print!("{}", format_sweep_table(&points));
    Ok(())
}
