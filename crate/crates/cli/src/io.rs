//! CSV schemas for run, bound and audit output.

use std::io::{Read, Write};

use dpbandit_core::audit::AuditReport;
use dpbandit_core::bounds::BoundReport;
use serde::{Deserialize, Serialize};

use crate::experiment::{AggregateSeries, CellResult};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RawRow {
    pub policy: String,
    pub epsilon: f64,
    pub alpha: f64,
    pub seed: u64,
    pub run: u64,
    pub t: u64,
    pub arm: u32,
    pub cum_pseudo_regret: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AggregateRow {
    pub policy: String,
    pub epsilon: f64,
    pub alpha: f64,
    pub t: u64,
    pub mean_regret: f64,
    pub std_regret: f64,
    pub runs: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundsRow {
    #[serde(rename = "K")]
    pub k: usize,
    #[serde(rename = "T")]
    pub horizon: f64,
    pub epsilon: f64,
    pub alpha: f64,
    pub arm: usize,
    pub mean: f64,
    pub gap: f64,
    pub d_inf: f64,
    pub t_inf: f64,
    pub minimax_lower: f64,
    pub pd_lower_rate: f64,
    pub adap_ucb_upper: f64,
    pub minimax_upper: f64,
    pub regime: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AuditCsvRow {
    /// Actions joined by `-`, e.g. `0-1-1-0`.
    pub sequence: String,
    pub count_orig: u64,
    pub count_neigh: u64,
    pub log_ratio: f64,
    pub slack: f64,
    pub verdict: String,
}

/// Checkpoint rows of every run, ordered by cell then run then `t`.
pub fn raw_rows(cells: &[CellResult]) -> Vec<RawRow> {
    cells
        .iter()
        .flat_map(|cell| {
            cell.traces.iter().flat_map(move |tr| {
                tr.checkpoints.iter().map(move |c| RawRow {
                    policy: cell.spec.kind.name().to_owned(),
                    epsilon: cell.spec.epsilon,
                    alpha: cell.spec.alpha,
                    seed: tr.meta.seed,
                    run: tr.meta.run,
                    t: c.t,
                    arm: c.arm,
                    cum_pseudo_regret: c.cum_pseudo_regret,
                })
            })
        })
        .collect()
}

pub fn aggregate_rows(series: &[AggregateSeries]) -> Vec<AggregateRow> {
    series
        .iter()
        .flat_map(|s| {
            (0..s.t.len()).map(move |i| AggregateRow {
                policy: s.spec.kind.name().to_owned(),
                epsilon: s.spec.epsilon,
                alpha: s.spec.alpha,
                t: s.t[i],
                mean_regret: s.mean[i],
                std_regret: s.std[i],
                runs: s.runs,
            })
        })
        .collect()
}

pub fn bounds_rows(report: &BoundReport) -> Vec<BoundsRow> {
    report
        .arms
        .iter()
        .enumerate()
        .map(|(arm, g)| BoundsRow {
            k: report.k,
            horizon: report.horizon,
            epsilon: report.epsilon,
            alpha: report.alpha,
            arm,
            mean: g.mean,
            gap: g.gap,
            d_inf: g.d_inf,
            t_inf: g.t_inf,
            minimax_lower: report.minimax_lower.value,
            pd_lower_rate: report.pd_lower_rate,
            adap_ucb_upper: report.adap_ucb_upper,
            minimax_upper: report.minimax_upper,
            regime: report.minimax_lower.regime.label().to_owned(),
        })
        .collect()
}

pub fn audit_rows(report: &AuditReport) -> Vec<AuditCsvRow> {
    report
        .rows
        .iter()
        .map(|r| AuditCsvRow {
            sequence: r.sequence.iter().map(u32::to_string).collect::<Vec<_>>().join("-"),
            count_orig: r.count_orig,
            count_neigh: r.count_neigh,
            log_ratio: r.log_ratio,
            slack: r.slack,
            verdict: r.verdict.label().to_owned(),
        })
        .collect()
}

pub fn write_csv<T: Serialize, W: Write>(rows: &[T], out: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for row in rows {
        w.serialize(row)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_csv<T: for<'de> Deserialize<'de>, R: Read>(input: R) -> csv::Result<Vec<T>> {
    csv::Reader::from_reader(input).deserialize().collect()
}
