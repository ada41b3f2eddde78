//! DP-UCB: UCB over per-arm tree-mechanism sums.
//!
//! Each arm's reward stream feeds its own [`TreeMechanism`] with budget
//! `eps`. The index is the noisy mean plus the usual exploration bonus plus
//! a high-probability bound on the tree noise, divided by the pull count.

use alloc::vec::Vec;

use super::{first_max, meta, ucb_index, PolicyKind};
use crate::env::Bandit;
use crate::error::{Error, Result};
use crate::privacy::{check_epsilon, tree_depth, TreeMechanism};
use crate::rng::{SeededRng, Substream};
use crate::trace::{Detail, Recorder, RunTrace};

/// Index inflation `sqrt(8) D^1.5 ln(2T / gamma) / (eps n)`, `D = ceil(log2 T)`.
///
/// `D` nodes of `Lap(D / eps)` make up a tree prefix sum; their total stays
/// below `sqrt(8 D) (D / eps) ln(2T / gamma)` at all `T` steps with
/// probability at least `1 - gamma`. Per step this is `O(log(T)^2.5 / eps)`.
pub fn dpucb_inflation(count: u64, horizon: u64, eps: f64, gamma: f64) -> f64 {
    let depth = tree_depth(horizon);
    libm::sqrt(8.0) * depth * libm::sqrt(depth) * libm::log(2.0 * horizon as f64 / gamma) / (eps * count as f64)
}

pub fn run_dpucb<B: Bandit>(
    bandit: &mut B,
    horizon: u64,
    eps: f64,
    alpha: f64,
    gamma: f64,
    rng: &SeededRng,
    detail: Detail,
) -> Result<RunTrace> {
    check_epsilon(eps)?;
    if !(gamma > 0.0 && gamma < 1.0) {
        return Err(Error::Parameter("dpucb_gamma must lie in (0, 1)"));
    }
    let k = bandit.num_arms();
    if horizon < k as u64 {
        return Err(Error::Parameter("horizon must be at least the number of arms"));
    }
    let mut rec = Recorder::new(k, horizon, bandit.best_mean(), detail);
    let mut trees: Vec<TreeMechanism> =
        (0..k).map(|a| TreeMechanism::new(horizon, eps, rng.stream(Substream::Noise(a)))).collect::<Result<_>>()?;
    let mut noisy_sums: Vec<f64> = alloc::vec![0.0; k];

    let mut pull = |arm: usize, rec: &mut Recorder, sums: &mut [f64]| -> Result<()> {
        let r = bandit.pull(arm)?;
        rec.record(arm, r, bandit.gap(arm));
        sums[arm] = trees[arm].update(r)?;
        Ok(())
    };

    for arm in 0..k {
        pull(arm, &mut rec, &mut noisy_sums)?;
    }
    while rec.t() < horizon {
        let alpha_log_t = alpha * libm::log((rec.t() + 1) as f64);
        let index = |a: usize| {
            let n = rec.pulls(a);
            ucb_index(noisy_sums[a] / n as f64, n as f64, alpha_log_t, f64::INFINITY)
                + dpucb_inflation(n, horizon, eps, gamma)
        };
        let arm = first_max((0..k).map(index));
        pull(arm, &mut rec, &mut noisy_sums)?;
    }
    Ok(rec.finish(meta(PolicyKind::DpUcb, eps, alpha, rng, horizon)))
}
