//! Runs an experiment described by a JSON file and writes per-seed results.
//!
//! ```text
//! cargo run --release --example experiment_from_config [config.json] [out.csv]
//! ```
//!
//! Relative paths inside the config resolve against the working directory;
//! the bundled configs expect to run from the crate root.

use rss_core::harness::{output::summary_path, run_experiment, ExperimentConfig};

fn main() -> rss_core::Result<()> {
    let mut args = std::env::args().skip(1);
    let path = args.next().unwrap_or_else(|| {
        concat!(env!("CARGO_MANIFEST_DIR"), "/data/frozenlake.json").to_string()
    });
    let mut config = ExperimentConfig::load(&path)?;
    let out = args.next().unwrap_or_else(|| {
        std::env::temp_dir()
            .join("rss-run.csv")
            .to_string_lossy()
            .into_owned()
    });
    config.output = Some(out.clone());

    let summary = run_experiment(&config)?;
    let a = summary.aggregate;
    println!(
        "{} on {:?}: mean {:.4} ± {:.4}, success {:.2}, {} seeds in {:.1} s",
        summary.planner,
        config.environment,
        a.mean_return,
        a.standard_error,
        a.success_rate,
        a.num_seeds,
        summary.wall_time_secs
    );
    println!("per-seed rows: {out}");
    println!("summary:       {}", summary_path(&out).display());
    Ok(())
}
