//! Command-line front end: `run`, `sweep`, `oracle` and `hyperparams`.
//!
//! Flags override values read from `--config`.

use std::ffi::OsString;
use std::io::Write;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use crate::error::Result;
use crate::harness::config::{
    EnvironmentKind, ExperimentConfig, OutputFormat, PlannerKind, SweepParameter,
};
use crate::harness::output::format_sweep_table;
use crate::harness::run::{run_experiment, sweep};
use crate::hyperparams::theorem1_hyperparameters;
use crate::oracle::{nominal_value_iteration, robust_value_iteration, TabularMDP};

#[derive(Debug, Parser)]
#[command(
    name = "rss",
    version,
    about = "Robust sparse sampling planners and experiments"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run one experiment over a range of seeds.
    Run(ExperimentArgs),
    /// Repeat an experiment across parameter values and planners.
    Sweep(SweepArgs),
    /// Solve a tabular model exactly with value iteration.
    Oracle(OracleArgs),
    /// Sample width and horizon for a target accuracy.
    Hyperparams(HyperparamArgs),
}

#[derive(Debug, Args, Default)]
pub struct ExperimentArgs {
    /// JSON experiment config; flags below override its fields.
    #[arg(long)]
    pub config: Option<String>,
    #[arg(long, value_enum)]
    pub environment: Option<EnvironmentKind>,
    #[arg(long, value_enum)]
    pub planner: Option<PlannerKind>,
    #[arg(long, short = 'C')]
    pub sample_width: Option<usize>,
    #[arg(long, short = 'H')]
    pub horizon: Option<usize>,
    #[arg(long)]
    pub gamma: Option<f64>,
    #[arg(long)]
    pub default_rho: Option<f64>,
    #[arg(long)]
    pub num_seeds: Option<usize>,
    #[arg(long)]
    pub base_seed: Option<u64>,
    #[arg(long, env = "RSS_WORKERS")]
    pub worker_count: Option<usize>,
    #[arg(long)]
    pub output: Option<String>,
    #[arg(long, value_enum)]
    pub format: Option<OutputFormat>,
    /// Episode length cap for the selected environment.
    #[arg(long)]
    pub max_steps: Option<usize>,
    /// FrozenLake slip-probability shift near holes.
    #[arg(long)]
    pub rho: Option<f64>,
    #[arg(long)]
    pub p_true: Option<f64>,
    #[arg(long)]
    pub map_file: Option<String>,
    #[arg(long)]
    pub sigma_low: Option<f64>,
    #[arg(long)]
    pub sigma_high: Option<f64>,
    #[arg(long)]
    pub tabular_file: Option<String>,
    #[arg(long)]
    pub true_file: Option<String>,
    #[arg(long)]
    pub initial_state: Option<usize>,
}

impl ExperimentArgs {
    pub fn resolve(&self) -> Result<ExperimentConfig> {
        let mut c = match &self.config {
            Some(path) => ExperimentConfig::load(path)?,
            None => ExperimentConfig::default(),
        };
        macro_rules! set {
            ($flag:ident => $($field:ident).+) => {
                if let Some(v) = &self.$flag {
                    c.$($field).+ = v.clone();
                }
            };
        }
        set!(environment => environment);
        set!(planner => planner);
        set!(sample_width => sample_width);
        set!(horizon => horizon);
        set!(gamma => gamma);
        set!(num_seeds => num_seeds);
        set!(base_seed => base_seed);
        set!(format => format);
        set!(rho => frozenlake.rho);
        set!(p_true => frozenlake.p_true);
        set!(sigma_low => cartpole.sigma_low);
        set!(sigma_high => cartpole.sigma_high);
        set!(initial_state => tabular.initial_state);
        if self.default_rho.is_some() {
            c.default_rho = self.default_rho;
        }
        if self.worker_count.is_some() {
            c.worker_count = self.worker_count;
        }
        if self.output.is_some() {
            c.output = self.output.clone();
        }
        if self.map_file.is_some() {
            c.frozenlake.map_file = self.map_file.clone();
        }
        if self.tabular_file.is_some() {
            c.tabular.file = self.tabular_file.clone();
        }
        if self.true_file.is_some() {
            c.tabular.true_file = self.true_file.clone();
        }
        if let Some(n) = self.max_steps {
            match c.environment {
                EnvironmentKind::Frozenlake => c.frozenlake.max_steps = n,
                EnvironmentKind::Cartpole => c.cartpole.max_steps = n,
                EnvironmentKind::TabularFile => c.tabular.max_steps = n,
            }
        }
        Ok(c)
    }
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub experiment: ExperimentArgs,
    /// Field to vary.
    #[arg(long, value_enum)]
    pub param: SweepParameter,
    /// Comma-separated values.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub values: Vec<f64>,
    /// Comma-separated planners; the config's planner when omitted.
    #[arg(long, value_enum, value_delimiter = ',')]
    pub planners: Vec<PlannerKind>,
}

#[derive(Debug, Args)]
pub struct OracleArgs {
    /// Matrix file describing the tabular model.
    #[arg(long)]
    pub file: String,
    /// Sup-norm accuracy of the returned values.
    #[arg(long, default_value_t = 1e-10)]
    pub tolerance: f64,
    /// Override the discount stored in the file.
    #[arg(long)]
    pub gamma: Option<f64>,
    /// Replace the per-pair radii with one radius.
    #[arg(long)]
    pub rho: Option<f64>,
    /// Also print the non-robust values.
    #[arg(long)]
    pub nominal: bool,
}

#[derive(Debug, Args)]
pub struct HyperparamArgs {
    #[arg(long)]
    pub epsilon: f64,
    #[arg(long)]
    pub gamma: f64,
    #[arg(long)]
    pub rho: f64,
    #[arg(long, default_value_t = 2)]
    pub actions: usize,
}

fn run_command(args: &ExperimentArgs, out: &mut dyn Write) -> Result<()> {
    let config = args.resolve()?;
    let summary = run_experiment(&config)?;
    let a = summary.aggregate;
    writeln!(
        out,
        "{} seeds={} mean_return={:.6} standard_error={:.6} success_rate={:.4} wall_time={:.2}s",
        summary.planner,
        a.num_seeds,
        a.mean_return,
        a.standard_error,
        a.success_rate,
        summary.wall_time_secs
    )?;
    if !a.standard_error_defined {
        writeln!(out, "note: standard error undefined for a single seed")?;
    }
    Ok(())
}

fn sweep_command(args: &SweepArgs, out: &mut dyn Write) -> Result<()> {
    let config = args.experiment.resolve()?;
    let planners = if args.planners.is_empty() {
        vec![config.planner]
    } else {
        args.planners.clone()
    };
    let points = sweep(&config, args.param, &args.values, &planners)?;
    write!(out, "{}", format_sweep_table(&points))?;
    Ok(())
}

fn oracle_command(args: &OracleArgs, out: &mut dyn Write) -> Result<()> {
    let mut mdp = TabularMDP::load(&args.file)?;
    if let Some(g) = args.gamma {
        mdp = mdp.with_gamma(g)?;
    }
    if let Some(r) = args.rho {
        mdp = mdp.with_uniform_rho(r)?;
    }
    let robust = robust_value_iteration(&mdp, args.tolerance)?;
    let mut doc = json!({ "gamma": mdp.gamma(), "robust_values": robust });
    if args.nominal {
        doc["nominal_values"] = json!(nominal_value_iteration(&mdp, args.tolerance)?);
    }
    writeln!(out, "{}", serde_json::to_string_pretty(&doc)?)?;
    Ok(())
}

fn hyperparams_command(args: &HyperparamArgs, out: &mut dyn Write) -> Result<()> {
    let h = theorem1_hyperparameters(args.epsilon, args.gamma, args.rho, args.actions)?;
    writeln!(out, "{}", serde_json::to_string_pretty(&h)?)?;
    Ok(())
}

pub fn execute(cli: &Cli, out: &mut dyn Write) -> Result<()> {
    match &cli.command {
        Command::Run(a) => run_command(a, out),
        Command::Sweep(a) => sweep_command(a, out),
        Command::Oracle(a) => oracle_command(a, out),
        Command::Hyperparams(a) => hyperparams_command(a, out),
    }
}

/// Parses `args` and runs the command; returns the process exit code.
///
/// 0 on success, 1 for bad arguments or configuration, 2 for runtime failures.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let stdout = std::io::stdout();
    match execute(&cli, &mut stdout.lock()) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
