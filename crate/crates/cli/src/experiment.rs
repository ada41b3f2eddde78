//! Seeded batch runs and their aggregation.

use dpbandit_core::audit::{audit_ratio, count_actions, spec_policy, ActionCounts, AuditReport, AuditScenario, Table};
use dpbandit_core::{simulate, Detail, Environment, PolicySpec, RunTrace, SeededRng};
use rayon::prelude::*;

const AUDIT_CHUNK: u64 = 8192;

/// One `(policy, epsilon)` cell of a sweep.
#[derive(Debug, Clone)]
pub struct CellResult {
    pub spec: PolicySpec,
    pub traces: Vec<RunTrace>,
}

/// Runs `runs` seeded repetitions of `spec`; run `r` uses `SeededRng::new(seed, r)`.
pub fn run_cell(
    spec: &PolicySpec,
    env: &Environment,
    horizon: u64,
    runs: u32,
    seed: u64,
) -> dpbandit_core::Result<CellResult> {
    let traces = (0..u64::from(runs))
        .into_par_iter()
        .map(|run| simulate(spec, env, horizon, &SeededRng::new(seed, run), Detail::Checkpoints))
        .collect::<dpbandit_core::Result<Vec<_>>>()?;
    Ok(CellResult { spec: *spec, traces })
}

/// Runs every cell in parallel. Output keeps the order of `specs`.
pub fn run_sweep(
    specs: &[PolicySpec],
    env: &Environment,
    horizon: u64,
    runs: u32,
    seed: u64,
) -> dpbandit_core::Result<Vec<CellResult>> {
    specs.par_iter().map(|spec| run_cell(spec, env, horizon, runs, seed)).collect()
}

/// Mean and sample standard deviation of cumulative pseudo-regret per checkpoint.
#[derive(Debug, Clone, PartialEq)]
pub struct AggregateSeries {
    pub spec: PolicySpec,
    pub t: Vec<u64>,
    pub mean: Vec<f64>,
    pub std: Vec<f64>,
    pub runs: usize,
}

impl AggregateSeries {
    pub fn from_traces(spec: PolicySpec, traces: &[RunTrace]) -> Self {
        let t: Vec<u64> = traces.first().map(|tr| tr.checkpoints.iter().map(|c| c.t).collect()).unwrap_or_default();
        let n = traces.len();
        let mut mean = Vec::with_capacity(t.len());
        let mut std = Vec::with_capacity(t.len());
        for i in 0..t.len() {
            let values: Vec<f64> = traces.iter().map(|tr| tr.checkpoints[i].cum_pseudo_regret).collect();
            let m = values.iter().sum::<f64>() / n as f64;
            let var = if n > 1 { values.iter().map(|v| (v - m).powi(2)).sum::<f64>() / (n - 1) as f64 } else { 0.0 };
            mean.push(m);
            std.push(var.sqrt());
        }
        Self { spec, t, mean, std, runs: n }
    }

    pub fn final_mean(&self) -> f64 {
        self.mean.last().copied().unwrap_or(0.0)
    }
}

impl CellResult {
    pub fn aggregate(&self) -> AggregateSeries {
        AggregateSeries::from_traces(self.spec, &self.traces)
    }

    pub fn mean_final_regret(&self) -> f64 {
        self.traces.iter().map(RunTrace::final_pseudo_regret).sum::<f64>() / self.traces.len() as f64
    }
}

/// Counts action sequences for one table, trials split into parallel chunks.
pub fn audit_counts(
    scenario: &AuditScenario,
    spec: &PolicySpec,
    which: Table,
    seed: u64,
) -> dpbandit_core::Result<ActionCounts> {
    spec.validate()?;
    let horizon = scenario.horizon() as u64;
    let chunks: Vec<u64> = (0..scenario.trials.div_ceil(AUDIT_CHUNK)).collect();
    let parts = chunks
        .par_iter()
        .map(|&c| {
            let range = c * AUDIT_CHUNK..((c + 1) * AUDIT_CHUNK).min(scenario.trials);
            count_actions(scenario, which, seed, range, spec_policy(*spec, horizon))
        })
        .collect::<dpbandit_core::Result<Vec<_>>>()?;
    let mut total = ActionCounts::new(scenario.k, scenario.horizon())?;
    for part in &parts {
        total.merge(part)?;
    }
    Ok(total)
}

/// Estimates both action distributions and compares them against `spec.epsilon`.
pub fn run_audit(scenario: &AuditScenario, spec: &PolicySpec, seed: u64) -> dpbandit_core::Result<AuditReport> {
    let orig = audit_counts(scenario, spec, Table::Original, seed)?;
    let neigh = audit_counts(scenario, spec, Table::Neighbor, seed)?;
    audit_ratio(&orig, &neigh, spec.epsilon, scenario.min_count)
}
