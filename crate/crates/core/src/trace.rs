//! Run traces and the checkpoint grid.

use alloc::vec::Vec;

use crate::policies::PolicyKind;

/// Maximum number of checkpoints kept per run.
pub const MAX_CHECKPOINTS: usize = 200;

/// How much of a run to keep.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Detail {
    /// Every step's arm and reward, plus checkpoints.
    Full,
    /// Checkpoints only.
    #[default]
    Checkpoints,
}

/// Regret bookkeeping at one step `t` (1-based).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Checkpoint {
    pub t: u64,
    /// Arm pulled at step `t`.
    pub arm: u32,
    /// `sum_{s <= t} gap(A_s)`.
    pub cum_pseudo_regret: f64,
    /// `t * mu_star - sum_{s <= t} r_s`.
    pub cum_realized_regret: f64,
}

/// A contiguous block of pulls of one arm, as scheduled by an episodic policy.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Episode {
    pub arm: u32,
    pub start: u64,
    pub len: u64,
    /// False when the horizon cut the episode short.
    pub complete: bool,
}

/// Which steps fed one private mean.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MeanRecord {
    pub arm: u32,
    pub steps: WindowSteps,
}

/// Steps `first..=last` that fed a window, and how many of them belonged
/// to the arm. For episodic policies `count == last - first + 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WindowSteps {
    pub first: u64,
    pub last: u64,
    pub count: u64,
}

/// Identification of a run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunMeta {
    pub policy: PolicyKind,
    pub epsilon: f64,
    pub alpha: f64,
    pub seed: u64,
    pub run: u64,
    pub horizon: u64,
    pub means: Vec<f64>,
}

/// History of one seeded run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunTrace {
    pub meta: RunMeta,
    /// Per-step arms, empty unless recorded with [`Detail::Full`].
    pub arms: Vec<u32>,
    /// Per-step rewards, empty unless recorded with [`Detail::Full`].
    pub rewards: Vec<f64>,
    pub checkpoints: Vec<Checkpoint>,
    pub pulls: Vec<u64>,
    pub episodes: Vec<Episode>,
    pub private_means: Vec<MeanRecord>,
}

impl RunTrace {
    pub fn final_pseudo_regret(&self) -> f64 {
        self.checkpoints.last().map_or(0.0, |c| c.cum_pseudo_regret)
    }

    pub fn final_realized_regret(&self) -> f64 {
        self.checkpoints.last().map_or(0.0, |c| c.cum_realized_regret)
    }

    /// Lengths of the completed episodes of `arm`, in order.
    pub fn episode_lengths(&self, arm: u32) -> Vec<u64> {
        self.episodes.iter().filter(|e| e.arm == arm && e.complete).map(|e| e.len).collect()
    }
}

/// Checkpoint steps for `k` arms and horizon `horizon`: the multiples of `k`
/// up to `10 k`, a geometric grid of ratio 1.1 (every step while the grid is
/// denser than that), and the horizon itself. The ratio grows if more than
/// [`MAX_CHECKPOINTS`] points would result.
pub fn checkpoint_grid(k: usize, horizon: u64) -> Vec<u64> {
    let k = k.max(1) as u64;
    let mut ratio = 1.1;
    loop {
        let mut grid: Vec<u64> = (1..=10).map(|i| i * k).filter(|&t| t <= horizon).collect();
        let mut g = 1u64;
        while g <= horizon {
            grid.push(g);
            g = (g + 1).max(libm::ceil(g as f64 * ratio) as u64);
        }
        if horizon > 0 {
            grid.push(horizon);
        }
        grid.sort_unstable();
        grid.dedup();
        if grid.len() <= MAX_CHECKPOINTS {
            return grid;
        }
        ratio *= 1.05;
    }
}

/// Step-by-step accumulator shared by all policies.
#[derive(Debug)]
pub(crate) struct Recorder {
    detail: Detail,
    grid: Vec<u64>,
    next: usize,
    best_mean: f64,
    t: u64,
    cum_pseudo: f64,
    cum_reward: f64,
    arms: Vec<u32>,
    rewards: Vec<f64>,
    checkpoints: Vec<Checkpoint>,
    pulls: Vec<u64>,
    episodes: Vec<Episode>,
    private_means: Vec<MeanRecord>,
}

impl Recorder {
    pub(crate) fn new(k: usize, horizon: u64, best_mean: f64, detail: Detail) -> Self {
        let cap = if detail == Detail::Full { horizon as usize } else { 0 };
        Self {
            detail,
            grid: checkpoint_grid(k, horizon),
            next: 0,
            best_mean,
            t: 0,
            cum_pseudo: 0.0,
            cum_reward: 0.0,
            arms: Vec::with_capacity(cap),
            rewards: Vec::with_capacity(cap),
            checkpoints: Vec::new(),
            pulls: alloc::vec![0; k],
            episodes: Vec::new(),
            private_means: Vec::new(),
        }
    }

    /// Current step count (number of pulls recorded so far).
    pub(crate) fn t(&self) -> u64 {
        self.t
    }

    pub(crate) fn pulls(&self, arm: usize) -> u64 {
        self.pulls[arm]
    }

    pub(crate) fn record(&mut self, arm: usize, reward: f64, gap: f64) {
        self.t += 1;
        self.pulls[arm] += 1;
        self.cum_pseudo += gap;
        self.cum_reward += reward;
        if self.detail == Detail::Full {
            self.arms.push(arm as u32);
            self.rewards.push(reward);
        }
        if self.grid.get(self.next) == Some(&self.t) {
            self.next += 1;
            self.checkpoints.push(Checkpoint {
                t: self.t,
                arm: arm as u32,
                cum_pseudo_regret: self.cum_pseudo,
                cum_realized_regret: self.t as f64 * self.best_mean - self.cum_reward,
            });
        }
    }

    pub(crate) fn episode(&mut self, arm: usize, start: u64, len: u64, complete: bool) {
        self.episodes.push(Episode { arm: arm as u32, start, len, complete });
    }

    pub(crate) fn private_mean(&mut self, arm: usize, first: u64, last: u64, count: u64) {
        self.private_means.push(MeanRecord { arm: arm as u32, steps: WindowSteps { first, last, count } });
    }

    pub(crate) fn finish(self, meta: RunMeta) -> RunTrace {
        RunTrace {
            meta,
            arms: self.arms,
            rewards: self.rewards,
            checkpoints: self.checkpoints,
            pulls: self.pulls,
            episodes: self.episodes,
            private_means: self.private_means,
        }
    }
}
