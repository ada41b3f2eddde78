//! Monte-Carlo falsification of epsilon-global DP on tiny horizons.
//!
//! A policy is run many times against two fixed reward tables that differ in
//! one entry. Each run's full action sequence is counted, and for every
//! well-populated sequence the log ratio of its two frequencies is compared to
//! `eps` plus three standard errors. A pass does not certify privacy; a
//! failure exhibits a sequence whose probability moved by more than `e^eps`.

use alloc::vec::Vec;
use core::ops::Range;

use crate::env::RewardTable;
use crate::error::{Error, Result};
use crate::policies::{run_policy, PolicySpec};
use crate::rng::SeededRng;
use crate::trace::Detail;

pub const MAX_AUDIT_HORIZON: usize = 8;
pub const MAX_SUPPORT: usize = 4096;
pub const MIN_TRIALS: u64 = 100_000;
pub const DEFAULT_MIN_COUNT: u64 = 500;
/// Standard errors of slack on each log ratio.
pub const SLACK_SIGMAS: f64 = 3.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Table {
    Original,
    Neighbor,
}

/// Two neighbouring `{0, 1}` reward tables and the trial budget.
#[derive(Debug, Clone, PartialEq)]
pub struct AuditScenario {
    pub k: usize,
    pub original: Vec<f64>,
    pub neighbor: Vec<f64>,
    pub trials: u64,
    pub min_count: u64,
}

impl AuditScenario {
    pub fn new(k: usize, original: Vec<f64>, neighbor: Vec<f64>, trials: u64) -> Result<Self> {
        let horizon = original.len();
        if neighbor.len() != horizon || horizon == 0 || horizon > MAX_AUDIT_HORIZON {
            return Err(Error::Parameter("audit tables must have equal length between 1 and 8"));
        }
        if k < 2 || support_size(k, horizon).is_none_or(|s| s > MAX_SUPPORT) {
            return Err(Error::Parameter("K^T must not exceed 4096"));
        }
        if original.iter().chain(&neighbor).any(|&r| r != 0.0 && r != 1.0) {
            return Err(Error::Parameter("audit rewards must be 0 or 1"));
        }
        let differing = original.iter().zip(&neighbor).filter(|(a, b)| a != b).count();
        if differing != 1 {
            return Err(Error::Parameter("neighbouring tables must differ in exactly one entry"));
        }
        if trials < MIN_TRIALS {
            return Err(Error::Parameter("an audit needs at least 100000 trials"));
        }
        Ok(Self { k, original, neighbor, trials, min_count: DEFAULT_MIN_COUNT })
    }

    pub fn horizon(&self) -> usize {
        self.original.len()
    }

    pub fn table(&self, which: Table) -> &[f64] {
        match which {
            Table::Original => &self.original,
            Table::Neighbor => &self.neighbor,
        }
    }

    /// Index of the entry where the tables differ.
    pub fn differing_entry(&self) -> usize {
        self.original.iter().zip(&self.neighbor).position(|(a, b)| a != b).unwrap_or(0)
    }
}

fn support_size(k: usize, horizon: usize) -> Option<usize> {
    k.checked_pow(horizon as u32)
}

/// Counts of full action sequences, indexed by `sum_t a_t K^t`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ActionCounts {
    pub k: usize,
    pub horizon: usize,
    pub counts: Vec<u64>,
}

impl ActionCounts {
    pub fn new(k: usize, horizon: usize) -> Result<Self> {
        let size = support_size(k, horizon)
            .filter(|&s| s <= MAX_SUPPORT)
            .ok_or(Error::Parameter("K^T must not exceed 4096"))?;
        Ok(Self { k, horizon, counts: alloc::vec![0; size] })
    }

    pub fn trials(&self) -> u64 {
        self.counts.iter().sum()
    }

    pub fn add(&mut self, actions: &[u32]) -> Result<()> {
        if actions.len() != self.horizon {
            return Err(Error::Contract("action sequence has the wrong length"));
        }
        let idx = self.encode(actions)?;
        self.counts[idx] += 1;
        Ok(())
    }

    pub fn merge(&mut self, other: &ActionCounts) -> Result<()> {
        if other.k != self.k || other.horizon != self.horizon {
            return Err(Error::Parameter("cannot merge counts over different supports"));
        }
        for (a, b) in self.counts.iter_mut().zip(&other.counts) {
            *a += b;
        }
        Ok(())
    }

    pub fn frequency(&self, idx: usize) -> f64 {
        self.counts[idx] as f64 / self.trials() as f64
    }

    fn encode(&self, actions: &[u32]) -> Result<usize> {
        actions.iter().rev().try_fold(0usize, |acc, &a| {
            if (a as usize) < self.k {
                Ok(acc * self.k + a as usize)
            } else {
                Err(Error::ArmOutOfRange { arm: a as usize, k: self.k })
            }
        })
    }

    pub fn decode(&self, mut idx: usize) -> Vec<u32> {
        (0..self.horizon)
            .map(|_| {
                let a = idx % self.k;
                idx /= self.k;
                a as u32
            })
            .collect()
    }
}

/// RNG of trial `trial` against `which`; the two tables never share streams.
pub fn trial_rng(seed: u64, which: Table, trial: u64) -> SeededRng {
    let tag = match which {
        Table::Original => 0,
        Table::Neighbor => 1,
    };
    SeededRng::new(seed, 2 * trial + tag)
}

/// Runs `policy` for the trials in `trials` against one table and counts the
/// action sequences. Results for disjoint ranges can be [merged](ActionCounts::merge).
pub fn count_actions<F>(
    scenario: &AuditScenario,
    which: Table,
    seed: u64,
    trials: Range<u64>,
    policy: F,
) -> Result<ActionCounts>
where
    F: Fn(&mut RewardTable<'_>, &SeededRng) -> Result<Vec<u32>>,
{
    let mut counts = ActionCounts::new(scenario.k, scenario.horizon())?;
    for trial in trials {
        let mut bandit = RewardTable::new(scenario.k, scenario.table(which))?;
        let actions = policy(&mut bandit, &trial_rng(seed, which, trial))?;
        counts.add(&actions)?;
    }
    Ok(counts)
}

/// Adapter running a [`PolicySpec`] for `horizon` steps and returning its actions.
pub fn spec_policy(spec: PolicySpec, horizon: u64) -> impl Fn(&mut RewardTable<'_>, &SeededRng) -> Result<Vec<u32>> {
    move |bandit, rng| Ok(run_policy(&spec, bandit, horizon, rng, Detail::Full)?.arms)
}

/// Single-threaded estimate over all `scenario.trials` trials.
pub fn estimate_action_distribution(
    scenario: &AuditScenario,
    spec: &PolicySpec,
    which: Table,
    seed: u64,
) -> Result<ActionCounts> {
    let policy = spec_policy(*spec, scenario.horizon() as u64);
    count_actions(scenario, which, seed, 0..scenario.trials, policy)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RowVerdict {
    Pass,
    Fail,
    /// Too few observations in both tables to test.
    Skipped,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail,
    Inconclusive,
}

impl Verdict {
    pub fn label(self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::Inconclusive => "inconclusive",
        }
    }
}

impl RowVerdict {
    pub fn label(self) -> &'static str {
        match self {
            RowVerdict::Pass => "pass",
            RowVerdict::Fail => "fail",
            RowVerdict::Skipped => "skipped",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AuditRow {
    pub sequence: Vec<u32>,
    pub count_orig: u64,
    pub count_neigh: u64,
    /// `|ln(f_orig / f_neigh)|`; infinite when one side was never observed.
    pub log_ratio: f64,
    pub slack: f64,
    pub verdict: RowVerdict,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AuditReport {
    pub epsilon: f64,
    pub min_count: u64,
    pub rows: Vec<AuditRow>,
    /// Largest log ratio over tested rows, `None` when nothing was tested.
    pub max_log_ratio: Option<f64>,
    pub verdict: Verdict,
}

/// Compares two action-sequence distributions against `eps`.
///
/// A sequence is tested when at least one table observed it `min_count`
/// times. Its slack is `3 sqrt(1/c + 1/c')`; a sequence seen often under one
/// table and never under the other has an infinite log ratio and fails.
pub fn audit_ratio(orig: &ActionCounts, neigh: &ActionCounts, eps: f64, min_count: u64) -> Result<AuditReport> {
    if orig.k != neigh.k || orig.horizon != neigh.horizon {
        return Err(Error::Parameter("distributions over different supports"));
    }
    let (n_orig, n_neigh) = (orig.trials(), neigh.trials());
    let mut rows = Vec::new();
    let mut max_log_ratio: Option<f64> = None;
    let mut any_fail = false;
    for idx in 0..orig.counts.len() {
        let (co, cn) = (orig.counts[idx], neigh.counts[idx]);
        if co == 0 && cn == 0 {
            continue;
        }
        let (log_ratio, slack, verdict) = if co.max(cn) < min_count {
            (f64::NAN, f64::NAN, RowVerdict::Skipped)
        } else if co == 0 || cn == 0 {
            (f64::INFINITY, SLACK_SIGMAS * libm::sqrt(1.0 / co.max(cn) as f64), RowVerdict::Fail)
        } else {
            let fo = co as f64 / n_orig as f64;
            let fn_ = cn as f64 / n_neigh as f64;
            let lr = libm::fabs(libm::log(fo / fn_));
            let slack = SLACK_SIGMAS * libm::sqrt(1.0 / co as f64 + 1.0 / cn as f64);
            let v = if lr <= eps + slack { RowVerdict::Pass } else { RowVerdict::Fail };
            (lr, slack, v)
        };
        if verdict != RowVerdict::Skipped {
            max_log_ratio = Some(max_log_ratio.map_or(log_ratio, |m| m.max(log_ratio)));
        }
        any_fail |= verdict == RowVerdict::Fail;
        rows.push(AuditRow { sequence: orig.decode(idx), count_orig: co, count_neigh: cn, log_ratio, slack, verdict });
    }
    let verdict = if any_fail {
        Verdict::Fail
    } else if max_log_ratio.is_none() {
        Verdict::Inconclusive
    } else {
        Verdict::Pass
    };
    Ok(AuditReport { epsilon: eps, min_count, rows, max_log_ratio, verdict })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::env::Bandit;
    use crate::policies::PolicyKind;
    use alloc::vec;

    fn scenario() -> AuditScenario {
        AuditScenario::new(2, vec![0.0, 1.0, 1.0, 1.0], vec![1.0, 1.0, 1.0, 1.0], MIN_TRIALS).unwrap()
    }

    #[test]
    fn scenario_validation() {
        assert!(AuditScenario::new(2, vec![0.0, 1.0], vec![0.0, 1.0], MIN_TRIALS).is_err());
        assert!(AuditScenario::new(2, vec![0.0, 1.0], vec![1.0, 0.0], MIN_TRIALS).is_err());
        assert!(AuditScenario::new(2, vec![0.5, 1.0], vec![1.0, 1.0], MIN_TRIALS).is_err());
        assert!(AuditScenario::new(2, vec![0.0, 1.0], vec![1.0, 1.0], 10).is_err());
        assert!(AuditScenario::new(2, vec![0.0; 9], [vec![1.0], vec![0.0; 8]].concat(), MIN_TRIALS).is_err());
        assert!(AuditScenario::new(9, vec![0.0; 4], vec![0.0, 0.0, 0.0, 1.0], MIN_TRIALS).is_err());
        assert!(AuditScenario::new(8, vec![0.0; 4], vec![0.0, 0.0, 0.0, 1.0], MIN_TRIALS).is_ok());
        assert_eq!(scenario().differing_entry(), 0);
    }

    #[test]
    fn encoding_round_trips() {
        let c = ActionCounts::new(3, 4).unwrap();
        for idx in 0..81 {
            assert_eq!(c.encode(&c.decode(idx)).unwrap(), idx);
        }
        assert!(c.encode(&[0, 3, 0, 0]).is_err());
    }

    #[test]
    fn deterministic_ucb_gives_a_point_mass() {
        let s = scenario();
        let spec = PolicySpec::new(PolicyKind::Ucb, 1.0);
        let counts = count_actions(&s, Table::Original, 1, 0..1000, spec_policy(spec, 4)).unwrap();
        assert_eq!(counts.trials(), 1000);
        assert_eq!(counts.counts.iter().filter(|&&c| c > 0).count(), 1);
        let total: f64 = (0..counts.counts.len()).map(|i| counts.frequency(i)).sum();
        assert_eq!(total, 1.0);
    }

    #[test]
    fn identical_distributions_pass() {
        let mut c = ActionCounts::new(2, 2).unwrap();
        c.counts = vec![1000, 2000, 0, 700];
        let r = audit_ratio(&c, &c, 0.01, 500).unwrap();
        assert_eq!(r.verdict, Verdict::Pass);
        assert_eq!(r.max_log_ratio, Some(0.0));
        assert_eq!(r.rows.len(), 3);
    }

    #[test]
    fn sparse_support_is_inconclusive() {
        let mut c = ActionCounts::new(2, 2).unwrap();
        c.counts = vec![10, 20, 0, 7];
        let r = audit_ratio(&c, &c, 1.0, 500).unwrap();
        assert_eq!(r.verdict, Verdict::Inconclusive);
        assert!(r.rows.iter().all(|row| row.verdict == RowVerdict::Skipped));
    }

    #[test]
    fn copying_the_first_reward_is_caught() {
        // Not private: A_2 reveals r_1.
        let leak = |b: &mut RewardTable<'_>, _: &SeededRng| -> Result<Vec<u32>> {
            let r1 = b.pull(0)?;
            let a2 = r1 as u32;
            b.pull(a2 as usize)?;
            let mut actions = vec![0, a2];
            for _ in 2..4 {
                b.pull(0)?;
                actions.push(0);
            }
            Ok(actions)
        };
        let s = scenario();
        let o = count_actions(&s, Table::Original, 3, 0..s.trials, leak).unwrap();
        let n = count_actions(&s, Table::Neighbor, 3, 0..s.trials, leak).unwrap();
        for eps in [0.1, 1.0, 10.0, 100.0] {
            let r = audit_ratio(&o, &n, eps, DEFAULT_MIN_COUNT).unwrap();
            assert_eq!(r.verdict, Verdict::Fail);
            assert_eq!(r.max_log_ratio, Some(f64::INFINITY));
        }
    }

    #[test]
    fn merged_ranges_equal_a_single_pass() {
        let s = scenario();
        let spec = PolicySpec::new(PolicyKind::AdaPUcb, 1.0);
        let whole = count_actions(&s, Table::Neighbor, 5, 0..2000, spec_policy(spec, 4)).unwrap();
        let mut parts = count_actions(&s, Table::Neighbor, 5, 0..700, spec_policy(spec, 4)).unwrap();
        parts.merge(&count_actions(&s, Table::Neighbor, 5, 700..2000, spec_policy(spec, 4)).unwrap()).unwrap();
        assert_eq!(whole, parts);
    }
}
