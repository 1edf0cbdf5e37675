//! CartPole with extra pole noise in a narrow band of cart positions.
//!
//! Sparse sampling on the low-noise model degrades as the band noise grows;
//! the variable-radius planner keeps the cart out of the band.
//!
//! ```text
//! cargo run --release --example cartpole_noise_sweep [seeds]
//! ```

use rss_core::envs::gaussian_tv;
use rss_core::harness::output::format_sweep_table;
use rss_core::harness::{sweep, ExperimentConfig, PlannerKind, SweepParameter};

fn main() -> rss_core::Result<()> {
    let seeds = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(20);
    let sigmas = [0.07, 0.09, 0.11, 0.13, 0.15];
    for s in sigmas {
        println!("sigma_high {s}: band radius {:.6}", gaussian_tv(1e-3, s)?);
    }
    let template = ExperimentConfig {
        num_seeds: seeds,
        sample_width: 5,
        horizon: 4,
        ..ExperimentConfig::cartpole()
    };
    let planners = [
        PlannerKind::Ss,
        PlannerKind::RssVariable,
        PlannerKind::SsTrueDynamics,
    ];
    let points = sweep(&template, SweepParameter::SigmaHigh, &sigmas, &planners)?;
    print!("{}", format_sweep_table(&points));
    Ok(())
}
