//! DP-SE: private successive elimination over epochs with fresh samples.
//!
//! Epoch `e` targets accuracy `2^-e`. Every surviving arm is pulled
//! [`dpse_epoch_length`] times (round robin), its epoch mean is released
//! with Laplace noise, and arms whose private mean trails the leader by more
//! than `2^-e` are eliminated. Earlier epochs are forgotten. Once one arm is
//! left it is played to the horizon.

use alloc::vec::Vec;

use super::{meta, PolicyKind};
use crate::env::Bandit;
use crate::error::{Error, Result};
use crate::privacy::{check_epsilon, noisy_mean};
use crate::rng::{RngStream, SeededRng, Substream};
use crate::trace::{Detail, Recorder, RunTrace};

/// Pulls per surviving arm in epoch `epoch` (1-based) with `survivors` arms:
/// `ceil(max(32 ln(8 m e^2 / beta) / gap^2, 8 ln(4 m e^2 / beta) / (eps gap)))`,
/// `gap = 2^-e`.
pub fn dpse_epoch_length(epoch: u32, survivors: usize, eps: f64, beta: f64) -> u64 {
    let gap = libm::exp2(-f64::from(epoch));
    let m_e2 = survivors as f64 * f64::from(epoch) * f64::from(epoch);
    let sampling = 32.0 * libm::log(8.0 * m_e2 / beta) / (gap * gap);
    let privacy = 8.0 * libm::log(4.0 * m_e2 / beta) / (eps * gap);
    libm::ceil(sampling.max(privacy)) as u64
}

pub fn run_dpse<B: Bandit>(
    bandit: &mut B,
    horizon: u64,
    eps: f64,
    beta: f64,
    rng: &SeededRng,
    detail: Detail,
) -> Result<RunTrace> {
    check_epsilon(eps)?;
    if !(beta > 0.0 && beta < 1.0) {
        return Err(Error::Parameter("dpse_beta must lie in (0, 1)"));
    }
    let k = bandit.num_arms();
    let mut noise: Vec<RngStream> = (0..k).map(|a| rng.stream(Substream::Noise(a))).collect();
    let mut rec = Recorder::new(k, horizon, bandit.best_mean(), detail);
    let mut active: Vec<usize> = (0..k).collect();
    let mut epoch = 1u32;

    while rec.t() < horizon && active.len() > 1 {
        let len = dpse_epoch_length(epoch, active.len(), eps, beta);
        let first = rec.t() + 1;
        let mut sums = alloc::vec![0.0; k];
        let mut complete = true;
        'epoch: for _ in 0..len {
            for &arm in &active {
                if rec.t() >= horizon {
                    complete = false;
                    break 'epoch;
                }
                let r = bandit.pull(arm)?;
                rec.record(arm, r, bandit.gap(arm));
                sums[arm] += r;
            }
        }
        if !complete || rec.t() >= horizon {
            break;
        }
        let last = rec.t();
        let private: Vec<f64> = active
            .iter()
            .map(|&arm| {
                rec.private_mean(arm, first, last, len);
                noisy_mean(sums[arm] / len as f64, len, eps, &mut noise[arm])
            })
            .collect();
        let leader = private.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let threshold = leader - libm::exp2(-f64::from(epoch));
        active = active.iter().zip(&private).filter(|(_, &m)| m >= threshold).map(|(&a, _)| a).collect();
        epoch += 1;
    }

    if let [survivor] = active[..] {
        let start = rec.t() + 1;
        while rec.t() < horizon {
            let r = bandit.pull(survivor)?;
            rec.record(survivor, r, bandit.gap(survivor));
        }
        if rec.t() >= start {
            rec.episode(survivor, start, rec.t() - start + 1, true);
        }
    }
    Ok(rec.finish(meta(PolicyKind::DpSe, eps, f64::NAN, rng, horizon)))
}
