//! Non-private UCB and KL-UCB, recomputing every index at every step.

use alloc::vec::Vec;

use super::{first_max, klucb_index, meta, ucb_index, PolicyKind};
use crate::env::Bandit;
use crate::error::{Error, Result};
use crate::rng::SeededRng;
use crate::trace::{Detail, Recorder, RunTrace};

pub fn run_ucb<B: Bandit>(
    bandit: &mut B,
    horizon: u64,
    alpha: f64,
    rng: &SeededRng,
    detail: Detail,
) -> Result<RunTrace> {
    run_index_policy(bandit, horizon, alpha, rng, detail, PolicyKind::Ucb)
}

pub fn run_klucb<B: Bandit>(
    bandit: &mut B,
    horizon: u64,
    alpha: f64,
    rng: &SeededRng,
    detail: Detail,
) -> Result<RunTrace> {
    run_index_policy(bandit, horizon, alpha, rng, detail, PolicyKind::KlUcb)
}

fn run_index_policy<B: Bandit>(
    bandit: &mut B,
    horizon: u64,
    alpha: f64,
    rng: &SeededRng,
    detail: Detail,
    kind: PolicyKind,
) -> Result<RunTrace> {
    let k = bandit.num_arms();
    if horizon < k as u64 {
        return Err(Error::Parameter("horizon must be at least the number of arms"));
    }
    let mut rec = Recorder::new(k, horizon, bandit.best_mean(), detail);
    let mut sums: Vec<f64> = alloc::vec![0.0; k];

    for (arm, sum) in sums.iter_mut().enumerate() {
        let r = bandit.pull(arm)?;
        rec.record(arm, r, bandit.gap(arm));
        *sum += r;
    }
    while rec.t() < horizon {
        let alpha_log_t = alpha * libm::log((rec.t() + 1) as f64);
        let index = |a: usize| {
            let n = rec.pulls(a) as f64;
            let mean = sums[a] / n;
            match kind {
                PolicyKind::KlUcb => klucb_index(mean, n, alpha_log_t, f64::INFINITY),
                _ => ucb_index(mean, n, alpha_log_t, f64::INFINITY),
            }
        };
        let arm = first_max((0..k).map(index));
        let r = bandit.pull(arm)?;
        rec.record(arm, r, bandit.gap(arm));
        sums[arm] += r;
    }
    Ok(rec.finish(meta(kind, f64::INFINITY, alpha, rng, horizon)))
}
