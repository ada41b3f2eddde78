//! Command-line interface: `run`, `bounds` and `audit`.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};
use dpbandit_core::audit::{AuditScenario, Verdict, DEFAULT_MIN_COUNT, MIN_TRIALS};
use dpbandit_core::bounds::BoundReport;
use dpbandit_core::{Environment, PolicyKind, PolicySpec, DEFAULT_ALPHA};
use serde::Serialize;

use crate::experiment::{run_audit, run_sweep};
use crate::io::{aggregate_rows, audit_rows, bounds_rows, raw_rows, write_csv};

#[derive(Debug, Parser)]
#[command(name = "dpbandit", version, about = "Private multi-armed bandit simulator")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Simulate seeded runs and write per-run and aggregate regret curves.
    Run(RunArgs),
    /// Evaluate regret lower and upper bounds for an instance.
    Bounds(BoundsArgs),
    /// Monte-Carlo check of epsilon-DP on two neighbouring reward tables.
    Audit(AuditArgs),
}

#[derive(Debug, Args)]
pub struct PolicyKnobs {
    #[arg(long, default_value_t = DEFAULT_ALPHA)]
    pub alpha: f64,
    #[arg(long, default_value_t = dpbandit_core::policies::DEFAULT_DPUCB_GAMMA)]
    pub dpucb_gamma: f64,
    /// Defaults to 1/T.
    #[arg(long)]
    pub dpse_beta: Option<f64>,
}

impl PolicyKnobs {
    fn spec(&self, kind: PolicyKind, epsilon: f64) -> PolicySpec {
        let mut spec = PolicySpec::new(kind, epsilon).with_alpha(self.alpha);
        spec.dpucb_gamma = self.dpucb_gamma;
        spec.dpse_beta = self.dpse_beta;
        spec
    }
}

#[derive(Debug, Args)]
pub struct RunArgs {
    /// One or more of adap-ucb, adap-klucb, ucb, klucb, dp-ucb, dp-se.
    #[arg(long, value_delimiter = ',', default_value = "adap-ucb")]
    pub policy: Vec<PolicyKind>,
    /// Bernoulli arm means.
    #[arg(long, value_delimiter = ',', required = true)]
    pub means: Vec<f64>,
    #[arg(long, value_delimiter = ',', default_value = "1")]
    pub epsilon: Vec<f64>,
    #[arg(long, default_value_t = 100_000)]
    pub horizon: u64,
    #[arg(long, default_value_t = 20)]
    pub runs: u32,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Aggregate CSV path; per-run rows go next to it as `<stem>.raw.csv`.
    /// Without it, per-run rows are printed.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[command(flatten)]
    pub knobs: PolicyKnobs,
}

#[derive(Debug, Args)]
pub struct BoundsArgs {
    #[arg(long, value_delimiter = ',', required = true)]
    pub means: Vec<f64>,
    #[arg(long, value_delimiter = ',', default_value = "1")]
    pub epsilon: Vec<f64>,
    #[arg(long, default_value_t = DEFAULT_ALPHA)]
    pub alpha: f64,
    #[arg(long, default_value_t = 1e7)]
    pub horizon: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct AuditArgs {
    #[arg(long, default_value = "adap-ucb")]
    pub policy: PolicyKind,
    #[arg(long, default_value_t = 1.0)]
    pub epsilon: f64,
    #[arg(long, default_value_t = 4)]
    pub horizon: usize,
    #[arg(long, default_value_t = 2)]
    pub arms: usize,
    #[arg(long, default_value_t = 2 * MIN_TRIALS)]
    pub trials: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Reward of step t, `{0, 1}` values. Defaults to `0,1,1,...`.
    #[arg(long, value_delimiter = ',')]
    pub table: Option<Vec<f64>>,
    /// Neighbouring table. Defaults to all ones.
    #[arg(long, value_delimiter = ',')]
    pub neighbor: Option<Vec<f64>>,
    #[arg(long, default_value_t = DEFAULT_MIN_COUNT)]
    pub min_count: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[command(flatten)]
    pub knobs: PolicyKnobs,
}

pub fn execute(cli: Cli) -> anyhow::Result<ExitCode> {
    match cli.command {
        Command::Run(args) => run(&args),
        Command::Bounds(args) => bounds(&args),
        Command::Audit(args) => audit(&args),
    }
}

fn emit<T: Serialize>(rows: &[T], out: Option<&Path>) -> anyhow::Result<()> {
    match out {
        Some(path) => {
            let file = File::create(path).with_context(|| format!("creating {}", path.display()))?;
            write_csv(rows, BufWriter::new(file))?;
            log::info!("wrote {} rows to {}", rows.len(), path.display());
        }
        None => write_csv(rows, io::stdout().lock())?,
    }
    Ok(())
}

/// `c2.csv` becomes `c2.raw.csv`.
pub fn raw_path(aggregate: &Path) -> PathBuf {
    let stem = aggregate.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    aggregate.with_file_name(format!("{stem}.raw.csv"))
}

fn run(args: &RunArgs) -> anyhow::Result<ExitCode> {
    let env = Environment::bernoulli(&args.means)?;
    if args.runs == 0 {
        bail!("--runs must be at least 1");
    }
    let specs: Vec<PolicySpec> = args
        .policy
        .iter()
        .flat_map(|&kind| args.epsilon.iter().map(move |&eps| (kind, eps)))
        .map(|(kind, eps)| args.knobs.spec(kind, eps))
        .collect();
    for spec in &specs {
        spec.validate()?;
    }
    let cells = run_sweep(&specs, &env, args.horizon, args.runs, args.seed)?;
    let raw = raw_rows(&cells);
    match &args.out {
        Some(path) => {
            let series: Vec<_> = cells.iter().map(|c| c.aggregate()).collect();
            emit(&aggregate_rows(&series), Some(path))?;
            emit(&raw, Some(&raw_path(path)))?;
        }
        None => emit(&raw, None)?,
    }
    Ok(ExitCode::SUCCESS)
}

fn bounds(args: &BoundsArgs) -> anyhow::Result<ExitCode> {
    let mut rows = Vec::new();
    for &eps in &args.epsilon {
        rows.extend(bounds_rows(&BoundReport::new(&args.means, args.horizon, eps, args.alpha)?));
    }
    emit(&rows, args.out.as_deref())?;
    Ok(ExitCode::SUCCESS)
}

fn audit(args: &AuditArgs) -> anyhow::Result<ExitCode> {
    let t = args.horizon;
    let table = args.table.clone().unwrap_or_else(|| (0..t).map(|i| if i == 0 { 0.0 } else { 1.0 }).collect());
    let neighbor = args.neighbor.clone().unwrap_or_else(|| vec![1.0; t]);
    let mut scenario = AuditScenario::new(args.arms, table, neighbor, args.trials)?;
    scenario.min_count = args.min_count;
    let spec = args.knobs.spec(args.policy, args.epsilon);
    let report = run_audit(&scenario, &spec, args.seed)?;
    emit(&audit_rows(&report), args.out.as_deref())?;
    let mut err = io::stderr().lock();
    writeln!(
        err,
        "audit {} eps={} T={} trials={}: {} (max log-ratio {})",
        spec.kind,
        spec.epsilon,
        t,
        args.trials,
        report.verdict.label(),
        report.max_log_ratio.map_or("n/a".to_owned(), |m| format!("{m:.4}")),
    )?;
    writeln!(err, "note: a pass does not certify privacy; only a failure is conclusive")?;
    Ok(if report.verdict == Verdict::Fail { ExitCode::FAILURE } else { ExitCode::SUCCESS })
}
