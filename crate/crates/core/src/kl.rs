//! Bernoulli relative entropy and its upper inversion.

use crate::error::{Error, Result};

/// Iteration cap of the bisection in [`kl_upper_inverse`].
pub const KL_MAX_ITER: usize = 100;

/// The bisection stops early once `budget - d(p, q)` is in `[0, KL_TOLERANCE]`.
pub const KL_TOLERANCE: f64 = 1e-12;

/// `d(p, q) = p ln(p/q) + (1-p) ln((1-p)/(1-q))` with the usual limits at
/// the boundary. Infinite divergences are returned as `f64::INFINITY`.
pub fn bernoulli_kl(p: f64, q: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&p) || !(0.0..=1.0).contains(&q) {
        return Err(Error::Parameter("Bernoulli parameters must lie in [0, 1]"));
    }
    Ok(kl(p, q))
}

pub(crate) fn kl(p: f64, q: f64) -> f64 {
    if p == q {
        return 0.0;
    }
    if p == 0.0 {
        return if q == 1.0 { f64::INFINITY } else { -libm::log1p(-q) };
    }
    if p == 1.0 {
        return if q == 0.0 { f64::INFINITY } else { -libm::log(q) };
    }
    if q == 0.0 || q == 1.0 {
        return f64::INFINITY;
    }
    let d = p * libm::log(p / q) + (1.0 - p) * libm::log((1.0 - p) / (1.0 - q));
    // Rounding can push tiny divergences below zero.
    d.max(0.0)
}

/// `max { q in [mean, 1] : d(mean, q) <= budget }` by bisection.
///
/// Returns exactly 1 only when `budget >= d(mean, 1)`, which for `mean < 1`
/// never happens since that divergence is infinite.
pub fn kl_upper_inverse(mean: f64, budget: f64) -> f64 {
    let mean = mean.clamp(0.0, 1.0);
    if mean >= 1.0 {
        return 1.0;
    }
    if !(budget > 0.0) {
        return mean;
    }
    let (mut lo, mut hi) = (mean, 1.0);
    for _ in 0..KL_MAX_ITER {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let d = kl(mean, mid);
        if d > budget {
            hi = mid;
        } else {
            lo = mid;
            if budget - d <= KL_TOLERANCE {
                break;
            }
        }
    }
    lo
}
