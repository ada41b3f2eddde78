//! Bandit policies: the episodic private framework (AdaP-UCB, AdaP-KLUCB)
//! and the UCB, KL-UCB, DP-UCB and DP-SE baselines.

use core::fmt;
use core::str::FromStr;

use crate::env::{Bandit, Environment, StochasticBandit};
use crate::error::{Error, Result};
use crate::kl::kl_upper_inverse;
use crate::privacy::check_epsilon;
use crate::rng::SeededRng;
use crate::trace::{Detail, RunMeta, RunTrace};

mod classic;
mod dpse;
mod dpucb;
mod episodic;

pub use classic::{run_klucb, run_ucb};
pub use dpse::{dpse_epoch_length, run_dpse};
pub use dpucb::{dpucb_inflation, run_dpucb};
pub use episodic::{run_episodic, ArmWindow, EpisodeLedger};

/// Default exploration exponent used in the experiments.
pub const DEFAULT_ALPHA: f64 = 3.1;
/// Default tree-noise failure probability of DP-UCB.
pub const DEFAULT_DPUCB_GAMMA: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PolicyKind {
    AdaPUcb,
    AdaPKlUcb,
    Ucb,
    KlUcb,
    DpUcb,
    DpSe,
}

impl PolicyKind {
    pub const ALL: [PolicyKind; 6] = [
        PolicyKind::AdaPUcb,
        PolicyKind::AdaPKlUcb,
        PolicyKind::Ucb,
        PolicyKind::KlUcb,
        PolicyKind::DpUcb,
        PolicyKind::DpSe,
    ];

    pub fn name(self) -> &'static str {
        match self {
            PolicyKind::AdaPUcb => "adap-ucb",
            PolicyKind::AdaPKlUcb => "adap-klucb",
            PolicyKind::Ucb => "ucb",
            PolicyKind::KlUcb => "klucb",
            PolicyKind::DpUcb => "dp-ucb",
            PolicyKind::DpSe => "dp-se",
        }
    }

    pub fn is_private(self) -> bool {
        !matches!(self, PolicyKind::Ucb | PolicyKind::KlUcb)
    }
}

impl fmt::Display for PolicyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for PolicyKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        PolicyKind::ALL.into_iter().find(|k| k.name() == s).ok_or(Error::Parameter("unknown policy name"))
    }
}

/// Algorithm choice and hyperparameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolicySpec {
    pub kind: PolicyKind,
    /// Privacy budget; ignored by UCB and KL-UCB. `f64::INFINITY` disables noise.
    pub epsilon: f64,
    /// Confidence exponent.
    pub alpha: f64,
    pub dpucb_gamma: f64,
    /// DP-SE confidence; `None` means `1 / horizon`.
    pub dpse_beta: Option<f64>,
}

impl PolicySpec {
    pub fn new(kind: PolicyKind, epsilon: f64) -> Self {
        Self { kind, epsilon, alpha: DEFAULT_ALPHA, dpucb_gamma: DEFAULT_DPUCB_GAMMA, dpse_beta: None }
    }

    pub fn with_alpha(mut self, alpha: f64) -> Self {
        self.alpha = alpha;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.kind.is_private() {
            check_epsilon(self.epsilon)?;
        }
        if !(self.alpha > 0.0 && self.alpha.is_finite()) {
            return Err(Error::Parameter("alpha must be positive"));
        }
        if matches!(self.kind, PolicyKind::AdaPUcb | PolicyKind::AdaPKlUcb) && self.alpha <= 3.0 {
            log::warn!("alpha = {} <= 3: the regret guarantees of {} do not apply", self.alpha, self.kind);
        }
        if !(self.dpucb_gamma > 0.0 && self.dpucb_gamma < 1.0) {
            return Err(Error::Parameter("dpucb_gamma must lie in (0, 1)"));
        }
        if let Some(beta) = self.dpse_beta {
            if !(beta > 0.0 && beta < 1.0) {
                return Err(Error::Parameter("dpse_beta must lie in (0, 1)"));
            }
        }
        Ok(())
    }
}

/// Position of the first maximum. NaN is a contract violation.
pub fn select_argmax(indexes: &[f64]) -> Result<usize> {
    if indexes.is_empty() {
        return Err(Error::Parameter("argmax of an empty list"));
    }
    if indexes.iter().any(|x| x.is_nan()) {
        return Err(Error::Contract("NaN index"));
    }
    Ok(first_max(indexes.iter().copied()))
}

pub(crate) fn first_max(indexes: impl Iterator<Item = f64>) -> usize {
    let mut best = 0;
    let mut best_val = f64::NEG_INFINITY;
    for (i, v) in indexes.enumerate() {
        if v > best_val || i == 0 {
            best = i;
            best_val = v;
        }
    }
    best
}

/// `mu + sqrt(alpha ln t / (2 s)) + alpha ln t / (eps s)`, where `s` is the
/// number of samples behind the private mean `mu`.
pub fn adap_ucb_index(private_mean: f64, s: u64, t_ell: f64, alpha: f64, eps: f64) -> Result<f64> {
    if s == 0 {
        return Err(Error::Contract("index from an empty window"));
    }
    Ok(ucb_index(private_mean, s as f64, alpha * libm::log(t_ell), eps))
}

#[inline]
pub(crate) fn ucb_index(mean: f64, s: f64, alpha_log_t: f64, eps: f64) -> f64 {
    mean + libm::sqrt(alpha_log_t / (2.0 * s)) + alpha_log_t / (eps * s)
}

/// Largest `q` in `[0, 1]` with `d(clip(mu + alpha ln t / (eps s)), q) <= alpha ln t / s`.
pub fn adap_klucb_index(private_mean: f64, s: u64, t_ell: f64, alpha: f64, eps: f64) -> Result<f64> {
    if s == 0 {
        return Err(Error::Contract("index from an empty window"));
    }
    Ok(klucb_index(private_mean, s as f64, alpha * libm::log(t_ell), eps))
}

#[inline]
pub(crate) fn klucb_index(mean: f64, s: f64, alpha_log_t: f64, eps: f64) -> f64 {
    let shifted = (mean + alpha_log_t / (eps * s)).clamp(0.0, 1.0);
    kl_upper_inverse(shifted, alpha_log_t / s)
}

/// Runs `spec` against an arbitrary reward source.
pub fn run_policy<B: Bandit>(
    spec: &PolicySpec,
    bandit: &mut B,
    horizon: u64,
    rng: &SeededRng,
    detail: Detail,
) -> Result<RunTrace> {
    spec.validate()?;
    if horizon < bandit.num_arms() as u64 {
        return Err(Error::Parameter("horizon must be at least the number of arms"));
    }
    let mut trace = match spec.kind {
        PolicyKind::AdaPUcb | PolicyKind::AdaPKlUcb => run_episodic(spec, bandit, horizon, rng, detail),
        PolicyKind::Ucb => run_ucb(bandit, horizon, spec.alpha, rng, detail),
        PolicyKind::KlUcb => run_klucb(bandit, horizon, spec.alpha, rng, detail),
        PolicyKind::DpUcb => run_dpucb(bandit, horizon, spec.epsilon, spec.alpha, spec.dpucb_gamma, rng, detail),
        PolicyKind::DpSe => {
            let beta = spec.dpse_beta.unwrap_or(1.0 / horizon as f64);
            run_dpse(bandit, horizon, spec.epsilon, beta, rng, detail)
        }
    }?;
    // Report the requested cell even for knobs a policy ignores.
    trace.meta.epsilon = spec.epsilon;
    trace.meta.alpha = spec.alpha;
    Ok(trace)
}

/// Runs `spec` on a stochastic environment, recording its means in the trace.
pub fn simulate(
    spec: &PolicySpec,
    env: &Environment,
    horizon: u64,
    rng: &SeededRng,
    detail: Detail,
) -> Result<RunTrace> {
    let mut bandit = StochasticBandit::new(env, rng);
    let mut trace = run_policy(spec, &mut bandit, horizon, rng, detail)?;
    trace.meta.means = env.means();
    Ok(trace)
}

pub(crate) fn meta(kind: PolicyKind, eps: f64, alpha: f64, rng: &SeededRng, horizon: u64) -> RunMeta {
    RunMeta {
        policy: kind,
        epsilon: eps,
        alpha,
        seed: rng.seed(),
        run: rng.run(),
        horizon,
        means: alloc::vec::Vec::new(),
    }
}
