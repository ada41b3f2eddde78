//! Bandit environments with rewards in `[0, 1]`.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::rng::{RngStream, SeededRng, Substream};

/// Reward distribution of a single arm.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ArmModel {
    Bernoulli { p: f64 },
    BoundedUniform { lo: f64, hi: f64 },
}

impl ArmModel {
    pub fn bernoulli(p: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::Parameter("Bernoulli mean must lie in [0, 1]"));
        }
        Ok(ArmModel::Bernoulli { p })
    }

    pub fn uniform(lo: f64, hi: f64) -> Result<Self> {
        if !(0.0 <= lo && lo <= hi && hi <= 1.0) {
            return Err(Error::Parameter("uniform arm needs 0 <= lo <= hi <= 1"));
        }
        Ok(ArmModel::BoundedUniform { lo, hi })
    }

    pub fn mean(&self) -> f64 {
        match *self {
            ArmModel::Bernoulli { p } => p,
            ArmModel::BoundedUniform { lo, hi } => 0.5 * (lo + hi),
        }
    }

    fn sample(&self, rng: &mut RngStream) -> f64 {
        let u = rng.open01();
        match *self {
            ArmModel::Bernoulli { p } => {
                if u < p {
                    1.0
                } else {
                    0.0
                }
            }
            ArmModel::BoundedUniform { lo, hi } => lo + (hi - lo) * u,
        }
    }
}

/// An ordered set of `K >= 2` arms. Immutable once built.
#[derive(Debug, Clone, PartialEq)]
pub struct Environment {
    arms: Vec<ArmModel>,
    best_mean: f64,
}

impl Environment {
    pub fn new(arms: Vec<ArmModel>) -> Result<Self> {
        if arms.len() < 2 {
            return Err(Error::Parameter("an environment needs at least two arms"));
        }
        let best_mean = arms.iter().map(ArmModel::mean).fold(f64::NEG_INFINITY, f64::max);
        Ok(Self { arms, best_mean })
    }

    /// Bernoulli environment from a list of means.
    pub fn bernoulli(means: &[f64]) -> Result<Self> {
        let arms = means.iter().map(|&p| ArmModel::bernoulli(p)).collect::<Result<Vec<_>>>()?;
        Self::new(arms)
    }

    pub fn num_arms(&self) -> usize {
        self.arms.len()
    }

    pub fn arms(&self) -> &[ArmModel] {
        &self.arms
    }

    pub fn means(&self) -> Vec<f64> {
        self.arms.iter().map(ArmModel::mean).collect()
    }

    pub fn best_mean(&self) -> f64 {
        self.best_mean
    }

    pub fn gap(&self, arm: usize) -> f64 {
        self.best_mean - self.arms[arm].mean()
    }

    /// `(mean, gap)` per arm, in arm order.
    pub fn instance_gaps(&self) -> Vec<(f64, f64)> {
        self.arms.iter().map(|a| (a.mean(), self.best_mean - a.mean())).collect()
    }

    pub fn sample_reward(&self, arm: usize, rng: &mut RngStream) -> Result<f64> {
        let model = self.arms.get(arm).ok_or(Error::ArmOutOfRange { arm, k: self.arms.len() })?;
        Ok(model.sample(rng))
    }
}

/// What a policy interacts with: pull an arm, observe a reward in `[0, 1]`.
pub trait Bandit {
    fn num_arms(&self) -> usize;

    fn pull(&mut self, arm: usize) -> Result<f64>;

    /// Suboptimality gap of `arm`, used only for pseudo-regret bookkeeping.
    fn gap(&self, arm: usize) -> f64;

    fn best_mean(&self) -> f64;
}

/// An [`Environment`] bound to the reward substreams of one run.
#[derive(Debug, Clone)]
pub struct StochasticBandit<'a> {
    env: &'a Environment,
    streams: Vec<RngStream>,
}

impl<'a> StochasticBandit<'a> {
    pub fn new(env: &'a Environment, rng: &SeededRng) -> Self {
        let streams = (0..env.num_arms()).map(|a| rng.stream(Substream::Reward(a))).collect();
        Self { env, streams }
    }
}

impl Bandit for StochasticBandit<'_> {
    fn num_arms(&self) -> usize {
        self.env.num_arms()
    }

    fn pull(&mut self, arm: usize) -> Result<f64> {
        let k = self.env.num_arms();
        let stream = self.streams.get_mut(arm).ok_or(Error::ArmOutOfRange { arm, k })?;
        self.env.sample_reward(arm, stream)
    }

    fn gap(&self, arm: usize) -> f64 {
        self.env.gap(arm)
    }

    fn best_mean(&self) -> f64 {
        self.env.best_mean()
    }
}

/// Replays a fixed reward sequence: the reward at step `t` is `table[t - 1]`
/// whichever arm is pulled. Gaps are reported as zero.
#[derive(Debug, Clone)]
pub struct RewardTable<'a> {
    k: usize,
    table: &'a [f64],
    next: usize,
}

impl<'a> RewardTable<'a> {
    pub fn new(k: usize, table: &'a [f64]) -> Result<Self> {
        if k < 2 {
            return Err(Error::Parameter("a reward table needs at least two arms"));
        }
        if table.iter().any(|r| !(0.0..=1.0).contains(r)) {
            return Err(Error::Contract("tabled rewards must lie in [0, 1]"));
        }
        Ok(Self { k, table, next: 0 })
    }
}

impl Bandit for RewardTable<'_> {
    fn num_arms(&self) -> usize {
        self.k
    }

    fn pull(&mut self, arm: usize) -> Result<f64> {
        if arm >= self.k {
            return Err(Error::ArmOutOfRange { arm, k: self.k });
        }
        let r = *self.table.get(self.next).ok_or(Error::Parameter("reward table exhausted"))?;
        self.next += 1;
        Ok(r)
    }

    fn gap(&self, _arm: usize) -> f64 {
        0.0
    }

    fn best_mean(&self) -> f64 {
        0.0
    }
}
