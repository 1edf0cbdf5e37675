mod common;

use std::fs;
use std::process::Command;

use rss_core::harness::output::summary_path;
use rss_core::harness::{
    run_experiment, sweep, EnvironmentKind, ExperimentConfig, OutputFormat, PlannerKind,
    SweepParameter,
};
use rss_core::Error;

fn tabular_config(dir: &std::path::Path) -> ExperimentConfig {
    let file = dir.join("fixture.mdp");
    fs::write(&file, common::fixture_mdp().to_text()).unwrap();
    let mut config = ExperimentConfig {
        environment: EnvironmentKind::TabularFile,
        planner: PlannerKind::RssVariable,
        sample_width: 3,
        horizon: 2,
        gamma: 0.9,
        num_seeds: 12,
        base_seed: 40,
        ..ExperimentConfig::default()
    };
    config.tabular.file = Some(file.to_string_lossy().into_owned());
    config.tabular.max_steps = 30;
    config
}

fn without_wall_time(text: &str) -> serde_json::Value {
    let mut v: serde_json::Value = serde_json::from_str(text).unwrap();
    v.as_object_mut().unwrap().remove("wall_time_secs");
    v["config"].as_object_mut().unwrap().remove("worker_count");
    v["config"].as_object_mut().unwrap().remove("output");
    v
}

#[test]
fn worker_count_does_not_change_results() {
    let dir = tempfile::tempdir().unwrap();
    let base = tabular_config(dir.path());
    let mut csvs = Vec::new();
    let mut summaries = Vec::new();
    for workers in [1, 4, 8] {
        let out = dir.path().join(format!("run{workers}.csv"));
        let config = ExperimentConfig {
            worker_count: Some(workers),
            output: Some(out.to_string_lossy().into_owned()),
            ..base.clone()
        };
        run_experiment(&config).unwrap();
        csvs.push(fs::read(&out).unwrap());
        summaries.push(without_wall_time(
            &fs::read_to_string(summary_path(out.to_str().unwrap())).unwrap(),
        ));
    }
    assert_eq!(csvs[0], csvs[1]);
    assert_eq!(csvs[0], csvs[2]);
    assert_eq!(summaries[0], summaries[1]);
    assert_eq!(summaries[0], summaries[2]);
}

#[test]
fn frozenlake_runs_are_reproducible() {
    let config = ExperimentConfig {
        sample_width: 2,
        horizon: 2,
        num_seeds: 4,
        ..ExperimentConfig::frozenlake()
    };
    let a = run_experiment(&ExperimentConfig {
        worker_count: Some(1),
        ..config.clone()
    })
    .unwrap();
    let b = run_experiment(&ExperimentConfig {
        worker_count: Some(3),
        ..config
    })
    .unwrap();
    assert_eq!(a.episodes, b.episodes);
}

#[derive(serde::Deserialize)]
struct Row {
    seed: u64,
    discounted_return: f64,
    steps: usize,
    success: bool,
}

#[test]
fn exported_rows_reproduce_the_summary() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("agg.csv");
    let config = ExperimentConfig {
        output: Some(out.to_string_lossy().into_owned()),
        worker_count: Some(2),
        ..tabular_config(dir.path())
    };
    let summary = run_experiment(&config).unwrap();
    let rows: Vec<Row> = csv::Reader::from_path(&out)
        .unwrap()
        .deserialize()
        .map(|r| r.unwrap())
        .collect();
    assert_eq!(rows.len(), 12);
    assert_eq!(
        rows.iter().map(|r| r.seed).collect::<Vec<_>>(),
        (40..52).collect::<Vec<_>>()
    );
    assert!(rows.iter().all(|r| r.steps >= 1 && r.steps <= 30));

    let n = rows.len() as f64;
    let mean = rows.iter().map(|r| r.discounted_return).sum::<f64>() / n;
    let var = rows
        .iter()
        .map(|r| (r.discounted_return - mean).powi(2))
        .sum::<f64>()
        / (n - 1.0);
    let success = rows.iter().filter(|r| r.success).count() as f64 / n;
    assert!((summary.mean_return() - mean).abs() <= 1e-12);
    assert!((summary.standard_error() - (var / n).sqrt()).abs() <= 1e-12);
    assert!((summary.success_rate() - success).abs() <= 1e-12);
    let lo = rows
        .iter()
        .map(|r| r.discounted_return)
        .fold(f64::INFINITY, f64::min);
    let hi = rows
        .iter()
        .map(|r| r.discounted_return)
        .fold(f64::NEG_INFINITY, f64::max);
    assert!(lo <= summary.mean_return() && summary.mean_return() <= hi);

    let doc: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(summary_path(out.to_str().unwrap())).unwrap())
            .unwrap();
    assert_eq!(doc["config"]["planner"], "rss-variable");
    assert_eq!(doc["aggregate"]["num_seeds"], 12);
}

#[test]
fn single_seed_flags_the_standard_error() {
    let dir = tempfile::tempdir().unwrap();
    let config = ExperimentConfig {
        num_seeds: 1,
        ..tabular_config(dir.path())
    };
    let summary = run_experiment(&config).unwrap();
    assert_eq!(summary.standard_error(), 0.0);
    assert!(!summary.aggregate.standard_error_defined);
}

#[test]
fn json_output_carries_everything() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("run.json");
    let config = ExperimentConfig {
        output: Some(out.to_string_lossy().into_owned()),
        format: OutputFormat::Json,
        num_seeds: 3,
        ..tabular_config(dir.path())
    };
    run_experiment(&config).unwrap();
    let doc: serde_json::Value = serde_json::from_str(&fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(doc["summary"]["episodes"].as_array().unwrap().len(), 3);
    assert!(doc["summary"]["mean_return"].is_number());
}

#[test]
fn error_paths() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    fs::write(&bad, r#"{"planner": "value-iteration"}"#).unwrap();
    let err = ExperimentConfig::load(&bad).unwrap_err();
    assert!(matches!(err, Error::Config(_)));
    assert_eq!(err.exit_code(), 1);

    let config = ExperimentConfig {
        output: Some(
            dir.path()
                .join("missing/dir/out.csv")
                .to_string_lossy()
                .into_owned(),
        ),
        ..tabular_config(dir.path())
    };
    let err = run_experiment(&config).unwrap_err();
    assert!(matches!(err, Error::Io(_)));
    assert_eq!(err.exit_code(), 2);

    let config = ExperimentConfig {
        num_seeds: 0,
        ..tabular_config(dir.path())
    };
    assert!(matches!(run_experiment(&config), Err(Error::Config(_))));
}

#[test]
fn sweep_writes_one_row_per_value_and_planner() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("sweep.csv");
    let config = ExperimentConfig {
        output: Some(out.to_string_lossy().into_owned()),
        num_seeds: 3,
        ..tabular_config(dir.path())
    };
    let planners = [PlannerKind::Ss, PlannerKind::Rss];
    let points = sweep(&config, SweepParameter::Rho, &[0.1, 0.2, 0.4], &planners).unwrap();
    assert_eq!(points.len(), 6);
    let mut reader = csv::Reader::from_path(&out).unwrap();
    assert_eq!(
        reader.headers().unwrap().iter().collect::<Vec<_>>(),
        [
            "parameter",
            "value",
            "planner",
            "num_seeds",
            "mean_return",
            "standard_error",
            "success_rate",
            "wall_time_secs"
        ]
    );
    assert_eq!(reader.records().count(), 6);
    assert!(points.iter().all(|p| p.summary.episodes.len() == 3));

    let empty_out = dir.path().join("empty.csv");
    let empty = ExperimentConfig {
        output: Some(empty_out.to_string_lossy().into_owned()),
        ..config
    };
    assert!(sweep(&empty, SweepParameter::Horizon, &[], &planners)
        .unwrap()
        .is_empty());
    assert_eq!(
        csv::Reader::from_path(&empty_out)
            .unwrap()
            .records()
            .count(),
        0
    );
}

fn rss() -> Command {
    Command::new(env!("CARGO_BIN_EXE_rss"))
}

#[test]
fn binary_exit_codes_and_output() {
    let dir = tempfile::tempdir().unwrap();
    let mdp = dir.path().join("m.mdp");
    fs::write(&mdp, common::fixture_mdp().to_text()).unwrap();

    let out = rss()
        .args(["oracle", "--file", mdp.to_str().unwrap(), "--nominal"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["robust_values"].as_array().unwrap().len(), 5);

    let out = rss()
        .args([
            "hyperparams",
            "--epsilon",
            "0.3",
            "--gamma",
            "0.5",
            "--rho",
            "0.5",
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["horizon"], 4);

    let run = |extra: &[&str]| {
        let mut cmd = rss();
        cmd.args([
            "run",
            "--environment",
            "tabular-file",
            "--tabular-file",
            mdp.to_str().unwrap(),
        ])
        .args(["-C", "2", "-H", "2", "--num-seeds", "2"])
        .args(extra);
        cmd.output().unwrap()
    };
    assert_eq!(run(&[]).status.code(), Some(0));
    assert_eq!(run(&["--planner", "mcts"]).status.code(), Some(1));
    assert_eq!(run(&["--gamma", "1.5"]).status.code(), Some(1));
    assert_eq!(
        run(&["--output", "/nonexistent/dir/x.csv"]).status.code(),
        Some(2)
    );
    let broken = dir.path().join("broken.mdp");
    fs::write(&broken, "2 1 0.9 1\n0.5 0.0\n").unwrap();
    assert_eq!(
        rss()
            .args(["oracle", "--file", broken.to_str().unwrap()])
            .output()
            .unwrap()
            .status
            .code(),
        Some(1)
    );

    // RSS_WORKERS provides the default, results do not depend on it
    let a = run(&[]);
    let b = {
        let mut cmd = rss();
        cmd.env("RSS_WORKERS", "3")
            .args([
                "run",
                "--environment",
                "tabular-file",
                "--tabular-file",
                mdp.to_str().unwrap(),
            ])
            .args(["-C", "2", "-H", "2", "--num-seeds", "2"]);
        cmd.output().unwrap()
    };
    let strip = |o: &std::process::Output| {
        let s = String::from_utf8_lossy(&o.stdout).into_owned();
        s.split(" wall_time").next().unwrap().to_string()
    };
    assert_eq!(strip(&a), strip(&b));
}
