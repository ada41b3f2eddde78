//! Closed-form regret bounds for bandits under global differential privacy.
//!
//! Lower bounds: the minimax bound `max{sqrt(T(K-1))/27, (K-1)/(131 eps)}` and
//! the problem-dependent rate `sum_a gap_a / min(d_inf_a, 6 eps t_inf_a)`
//! (coefficient of `ln T`). Upper bounds: the gap-dependent and minimax
//! guarantees of AdaP-UCB. All logarithms are natural.

use alloc::vec::Vec;

use crate::error::{Error, Result};
pub use crate::kl::bernoulli_kl;
use crate::kl::kl;

/// Which term of a bound dominates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    /// The privacy term is the larger one.
    HighPrivacy,
    LowPrivacy,
}

impl Regime {
    pub fn label(self) -> &'static str {
        match self {
            Regime::HighPrivacy => "high-privacy",
            Regime::LowPrivacy => "low-privacy",
        }
    }
}

/// Distinguishability gaps of one Bernoulli arm.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ArmGaps {
    pub mean: f64,
    pub gap: f64,
    /// `d(mean, mu_star)`: infimum of KL to any Bernoulli with mean above `mu_star`.
    pub d_inf: f64,
    /// Infimum of total variation to any Bernoulli with mean above `mu_star`.
    pub t_inf: f64,
}

fn check_means(means: &[f64]) -> Result<f64> {
    if means.is_empty() || means.iter().any(|m| !(0.0..=1.0).contains(m)) {
        return Err(Error::Parameter("means must be a non-empty list in [0, 1]"));
    }
    Ok(means.iter().copied().fold(f64::NEG_INFINITY, f64::max))
}

/// Bernoulli specialisation: `d_inf = d(mu_a, mu_star)`, `t_inf = mu_star - mu_a`.
pub fn bernoulli_gaps(means: &[f64], mu_star: f64) -> Result<Vec<ArmGaps>> {
    check_means(means)?;
    if !(0.0..=1.0).contains(&mu_star) || means.iter().any(|&m| m > mu_star) {
        return Err(Error::Parameter("mu_star must be the largest mean"));
    }
    Ok(means
        .iter()
        .map(|&mean| {
            let gap = mu_star - mean;
            ArmGaps { mean, gap, d_inf: kl(mean, mu_star), t_inf: gap }
        })
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MinimaxLower {
    pub value: f64,
    /// `sqrt(T (K-1)) / 27`.
    pub non_private_term: f64,
    /// `(K-1) / (131 eps)`.
    pub private_term: f64,
    pub regime: Regime,
    /// Budget at which the two terms are equal: `(27/131) sqrt((K-1)/T)`.
    pub crossover: f64,
    /// `(131/27) sqrt((K-1)/T)`, the threshold quoted alongside the bound in
    /// the literature. It is not where the terms cross.
    pub stated_threshold: f64,
}

pub fn minimax_lower(k: usize, horizon: f64, eps: f64) -> Result<MinimaxLower> {
    if k < 2 {
        return Err(Error::Parameter("minimax bound needs K > 1"));
    }
    let km1 = (k - 1) as f64;
    if !(horizon >= km1) {
        return Err(Error::Parameter("minimax bound needs T >= K - 1"));
    }
    if !(eps > 0.0) {
        return Err(Error::Parameter("epsilon must be positive"));
    }
    let non_private_term = libm::sqrt(horizon * km1) / 27.0;
    let private_term = km1 / (131.0 * eps);
    let regime = if private_term > non_private_term { Regime::HighPrivacy } else { Regime::LowPrivacy };
    let ratio = libm::sqrt(km1 / horizon);
    Ok(MinimaxLower {
        value: non_private_term.max(private_term),
        non_private_term,
        private_term,
        regime,
        crossover: 27.0 / 131.0 * ratio,
        stated_threshold: 131.0 / 27.0 * ratio,
    })
}

/// Coefficient of `ln T` in the problem-dependent lower bound, Bernoulli arms.
pub fn problem_dependent_lower_rate(means: &[f64], eps: f64) -> Result<f64> {
    if !(eps > 0.0) {
        return Err(Error::Parameter("epsilon must be positive"));
    }
    let mu_star = check_means(means)?;
    Ok(bernoulli_gaps(means, mu_star)?
        .iter()
        .filter(|g| g.gap > 0.0)
        .map(|g| g.gap / g.d_inf.min(6.0 * eps * g.t_inf))
        .sum())
}

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha > 3.0 && alpha.is_finite() {
        Ok(())
    } else {
        Err(Error::Parameter("the AdaP-UCB upper bounds need alpha > 3"))
    }
}

/// `sum_{gap_a > 0} (16 alpha ln T / min(gap_a, eps) + 3 alpha / (alpha - 3))`.
pub fn adap_ucb_upper(means: &[f64], eps: f64, alpha: f64, horizon: f64) -> Result<f64> {
    check_alpha(alpha)?;
    if !(eps > 0.0) || !(horizon >= 1.0) {
        return Err(Error::Parameter("need eps > 0 and T >= 1"));
    }
    let mu_star = check_means(means)?;
    let log_t = libm::log(horizon);
    let tail = 3.0 * alpha / (alpha - 3.0);
    Ok(means
        .iter()
        .map(|m| mu_star - m)
        .filter(|&gap| gap > 0.0)
        .map(|gap| 16.0 * alpha * log_t / gap.min(eps) + tail)
        .sum())
}

/// `8 sqrt(alpha K T ln T) + 16 alpha K ln T / eps + 3 alpha / (alpha - 3) sum_a gap_a`.
pub fn minimax_upper(k: usize, horizon: f64, eps: f64, alpha: f64, gaps: &[f64]) -> Result<f64> {
    check_alpha(alpha)?;
    if k < 2 {
        return Err(Error::Parameter("minimax bound needs K > 1"));
    }
    if !(eps > 0.0) || !(horizon >= 1.0) {
        return Err(Error::Parameter("need eps > 0 and T >= 1"));
    }
    let k = k as f64;
    let log_t = libm::log(horizon);
    Ok(8.0 * libm::sqrt(alpha * k * horizon * log_t)
        + 16.0 * alpha * k * log_t / eps
        + 3.0 * alpha / (alpha - 3.0) * gaps.iter().sum::<f64>())
}

/// All bound values for one instance.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundReport {
    pub k: usize,
    pub horizon: f64,
    pub epsilon: f64,
    pub alpha: f64,
    pub arms: Vec<ArmGaps>,
    pub minimax_lower: MinimaxLower,
    pub pd_lower_rate: f64,
    pub adap_ucb_upper: f64,
    pub minimax_upper: f64,
}

impl BoundReport {
    pub fn new(means: &[f64], horizon: f64, eps: f64, alpha: f64) -> Result<Self> {
        let mu_star = check_means(means)?;
        let arms = bernoulli_gaps(means, mu_star)?;
        let gaps: Vec<f64> = arms.iter().map(|a| a.gap).collect();
        Ok(Self {
            k: means.len(),
            horizon,
            epsilon: eps,
            alpha,
            minimax_lower: minimax_lower(means.len(), horizon, eps)?,
            pd_lower_rate: problem_dependent_lower_rate(means, eps)?,
            adap_ucb_upper: adap_ucb_upper(means, eps, alpha, horizon)?,
            minimax_upper: minimax_upper(means.len(), horizon, eps, alpha, &gaps)?,
            arms,
        })
    }
}
