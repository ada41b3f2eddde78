//! Episodic private index policies.
//!
//! After one initial pull per arm, time is cut into episodes. At the start
//! `t_l` of an episode every arm gets an index computed from the private mean
//! of its last active episode only; the arm with the highest index is then
//! played until its total pull count doubles. A private mean is drawn once per
//! finished episode, so each reward enters exactly one noisy statistic.

use alloc::vec::Vec;

use super::{first_max, klucb_index, meta, ucb_index, PolicyKind, PolicySpec};
use crate::env::Bandit;
use crate::error::{Error, Result};
use crate::privacy::noisy_mean;
use crate::rng::{RngStream, SeededRng, Substream};
use crate::trace::{Detail, Recorder, RunTrace};

/// Private summary of one arm's last active episode.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ArmWindow {
    /// Total pulls `N_a(t)`.
    pub total_pulls: u64,
    /// Length of the last finished episode.
    pub last_count: u64,
    /// Noisy mean of that episode's rewards.
    pub last_private_mean: f64,
}

/// Per-arm bookkeeping plus the global episode counter.
#[derive(Debug, Clone, PartialEq)]
pub struct EpisodeLedger {
    pub arms: Vec<ArmWindow>,
    /// Number of episodes started after initialization.
    pub episode: u64,
    /// First step of the current episode.
    pub episode_start: u64,
}

impl EpisodeLedger {
    fn new(k: usize) -> Self {
        Self {
            arms: alloc::vec![
                ArmWindow { total_pulls: 0, last_count: 0, last_private_mean: 0.0 };
                k
            ],
            episode: 0,
            episode_start: 0,
        }
    }
}

/// Runs AdaP-UCB or AdaP-KLUCB.
pub fn run_episodic<B: Bandit>(
    spec: &PolicySpec,
    bandit: &mut B,
    horizon: u64,
    rng: &SeededRng,
    detail: Detail,
) -> Result<RunTrace> {
    let kl = match spec.kind {
        PolicyKind::AdaPUcb => false,
        PolicyKind::AdaPKlUcb => true,
        _ => return Err(Error::Parameter("run_episodic needs an AdaP policy")),
    };
    let k = bandit.num_arms();
    if horizon < k as u64 {
        return Err(Error::Parameter("horizon must be at least the number of arms"));
    }
    let eps = spec.epsilon;
    let mut noise: Vec<RngStream> = (0..k).map(|a| rng.stream(Substream::Noise(a))).collect();
    let mut rec = Recorder::new(k, horizon, bandit.best_mean(), detail);
    let mut ledger = EpisodeLedger::new(k);

    // The initial pull of each arm is that arm's first window.
    for (arm, (w, noise)) in ledger.arms.iter_mut().zip(&mut noise).enumerate() {
        let r = bandit.pull(arm)?;
        rec.record(arm, r, bandit.gap(arm));
        let step = rec.t();
        rec.episode(arm, step, 1, true);
        w.total_pulls = 1;
        w.last_count = 1;
        if step < horizon {
            w.last_private_mean = noisy_mean(r, 1, eps, noise);
            rec.private_mean(arm, step, step, 1);
        }
    }

    while rec.t() < horizon {
        let t_ell = rec.t() + 1;
        ledger.episode += 1;
        ledger.episode_start = t_ell;
        let alpha_log_t = spec.alpha * libm::log(t_ell as f64);
        let index = |w: &ArmWindow| {
            let s = w.last_count as f64;
            if kl {
                klucb_index(w.last_private_mean, s, alpha_log_t, eps)
            } else {
                ucb_index(w.last_private_mean, s, alpha_log_t, eps)
            }
        };
        let arm = first_max(ledger.arms.iter().map(index));
        let len = ledger.arms[arm].total_pulls;
        let mut sum = 0.0;
        let mut played = 0;
        while played < len && rec.t() < horizon {
            let r = bandit.pull(arm)?;
            rec.record(arm, r, bandit.gap(arm));
            sum += r;
            played += 1;
        }
        let complete = played == len;
        rec.episode(arm, t_ell, played, complete);
        let w = &mut ledger.arms[arm];
        w.total_pulls += played;
        if complete && rec.t() < horizon {
            w.last_count = len;
            w.last_private_mean = noisy_mean(sum / len as f64, len, eps, &mut noise[arm]);
            rec.private_mean(arm, t_ell, t_ell + len - 1, len);
        }
    }

    debug_assert!((0..k).all(|a| rec.pulls(a) == ledger.arms[a].total_pulls));
    Ok(rec.finish(meta(spec.kind, eps, spec.alpha, rng, horizon)))
}
