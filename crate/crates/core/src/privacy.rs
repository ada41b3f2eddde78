//! Noise mechanisms: Laplace sampling, the private mean of a reward window,
//! and the binary-tree counter used by the DP-UCB baseline.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::rng::RngStream;

/// Scale `b > 0` of a zero-mean Laplace distribution (variance `2 b^2`).
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct LaplaceScale(f64);

impl LaplaceScale {
    pub fn new(b: f64) -> Result<Self> {
        if b > 0.0 && b.is_finite() {
            Ok(Self(b))
        } else {
            Err(Error::Parameter("Laplace scale must be positive and finite"))
        }
    }

    /// Scale `sensitivity / eps` of the Laplace mechanism.
    pub fn for_sensitivity(sensitivity: f64, eps: f64) -> Result<Self> {
        Self::new(sensitivity / eps)
    }

    pub fn get(self) -> f64 {
        self.0
    }
}

/// Inverse-CDF draw from `Lap(b)`.
pub fn laplace_sample(scale: LaplaceScale, rng: &mut RngStream) -> f64 {
    laplace_raw(scale.0, rng)
}

/// Laplace draw that tolerates `b = 0` (the `eps = inf` limit) by returning 0.
/// Always consumes one uniform so stream positions do not depend on `b`.
pub(crate) fn laplace_raw(b: f64, rng: &mut RngStream) -> f64 {
    let u = rng.open01();
    if b == 0.0 {
        return 0.0;
    }
    if u < 0.5 {
        b * libm::log(2.0 * u)
    } else {
        -b * libm::log(2.0 * (1.0 - u))
    }
}

/// Validates a privacy budget. `f64::INFINITY` is accepted and means "no noise".
pub fn check_epsilon(eps: f64) -> Result<()> {
    if eps > 0.0 && !eps.is_nan() {
        Ok(())
    } else {
        Err(Error::Parameter("privacy budget epsilon must be positive"))
    }
}

/// Mean of `rewards` plus `Lap(1 / (n * eps))` noise, `n = rewards.len()`.
///
/// Rewards must lie in `[0, 1]`; otherwise the sensitivity `1/n` the noise is
/// calibrated to would be wrong. The output is not clipped.
pub fn private_window_mean(rewards: &[f64], eps: f64, rng: &mut RngStream) -> Result<f64> {
    check_epsilon(eps)?;
    if rewards.is_empty() {
        return Err(Error::Parameter("private mean of an empty window"));
    }
    if rewards.iter().any(|r| !(0.0..=1.0).contains(r)) {
        return Err(Error::Contract("window rewards must lie in [0, 1]"));
    }
    let n = rewards.len() as f64;
    let mean = rewards.iter().sum::<f64>() / n;
    Ok(noisy_mean(mean, rewards.len() as u64, eps, rng))
}

/// Same mechanism as [`private_window_mean`] from a precomputed window sum.
pub(crate) fn noisy_mean(mean: f64, count: u64, eps: f64, rng: &mut RngStream) -> f64 {
    mean + laplace_raw(1.0 / (count as f64 * eps), rng)
}

/// Binary-tree (p-sum) mechanism for private prefix sums of a stream of
/// rewards in `[0, 1]`.
///
/// Each dyadic block of the stream carries one `Lap(depth / eps)` sample, with
/// `depth = ceil(log2(capacity))`. The prefix sum at step `t` is assembled from
/// one block per set bit of `t`.
#[derive(Debug, Clone)]
pub struct TreeMechanism {
    capacity: u64,
    scale: f64,
    t: u64,
    exact: Vec<f64>,
    noisy: Vec<f64>,
    true_sum: f64,
    noise: RngStream,
}

impl TreeMechanism {
    pub fn new(capacity: u64, eps: f64, noise: RngStream) -> Result<Self> {
        check_epsilon(eps)?;
        if capacity == 0 {
            return Err(Error::Parameter("tree mechanism capacity must be positive"));
        }
        let levels = (u64::BITS - capacity.leading_zeros()) as usize;
        Ok(Self {
            capacity,
            scale: tree_depth(capacity) / eps,
            t: 0,
            exact: vec![0.0; levels],
            noisy: vec![0.0; levels],
            true_sum: 0.0,
            noise,
        })
    }

    /// Per-node Laplace scale.
    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn count(&self) -> u64 {
        self.t
    }

    pub fn true_sum(&self) -> f64 {
        self.true_sum
    }

    /// Number of noise samples inside the current prefix-sum estimate.
    pub fn noise_terms(&self) -> u32 {
        self.t.count_ones()
    }

    /// Appends `reward` and returns the noisy sum of everything seen so far.
    pub fn update(&mut self, reward: f64) -> Result<f64> {
        if self.t >= self.capacity {
            return Err(Error::Capacity { capacity: self.capacity });
        }
        if !(0.0..=1.0).contains(&reward) {
            return Err(Error::Contract("tree mechanism inputs must lie in [0, 1]"));
        }
        self.t += 1;
        self.true_sum += reward;
        let level = self.t.trailing_zeros() as usize;
        let merged = self.exact[..level].iter().sum::<f64>() + reward;
        for j in 0..level {
            self.exact[j] = 0.0;
            self.noisy[j] = 0.0;
        }
        self.exact[level] = merged;
        self.noisy[level] = merged + laplace_raw(self.scale, &mut self.noise);
        Ok(self.query())
    }

    pub fn query(&self) -> f64 {
        (0..self.noisy.len()).filter(|&j| self.t >> j & 1 == 1).map(|j| self.noisy[j]).sum()
    }
}

/// `ceil(log2(capacity))`, at least 1.
pub fn tree_depth(capacity: u64) -> f64 {
    let bits = u64::BITS - capacity.saturating_sub(1).leading_zeros();
    f64::from(bits.max(1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::{SeededRng, Substream};
    use approx::assert_abs_diff_eq;

    fn stream(tag: u32) -> RngStream {
        SeededRng::new(11, 0).stream(Substream::Aux(tag))
    }

    #[test]
    fn scale_validation() {
        assert!(LaplaceScale::new(0.0).is_err());
        assert!(LaplaceScale::new(-1.0).is_err());
        assert!(LaplaceScale::new(f64::INFINITY).is_err());
        assert_eq!(LaplaceScale::for_sensitivity(1.0, 4.0).unwrap().get(), 0.25);
    }

    #[test]
    fn laplace_tail_variance_median() {
        let b = LaplaceScale::new(1.0).unwrap();
        let mut rng = stream(0);
        let n = 1_000_000;
        let mut xs: Vec<f64> = (0..n).map(|_| laplace_sample(b, &mut rng)).collect();
        let tail = xs.iter().filter(|&&x| x > 1.0).count() as f64 / n as f64;
        // P(Lap(b) > b) = e^-1 / 2; 3 sigma binomial ~ 0.0012.
        assert_abs_diff_eq!(tail, 0.5 * (-1.0f64).exp(), epsilon = 0.002);
        let lower = xs.iter().filter(|&&x| x < -1.0).count() as f64 / n as f64;
        assert_abs_diff_eq!(lower, 0.5 * (-1.0f64).exp(), epsilon = 0.002);
        let mean = xs.iter().sum::<f64>() / n as f64;
        let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
        assert_abs_diff_eq!(var, 2.0, epsilon = 0.02);
        xs.sort_by(f64::total_cmp);
        assert_abs_diff_eq!(xs[n / 2], 0.0, epsilon = 3.0 / (n as f64).sqrt());
    }

    #[test]
    fn window_mean_zero_noise_limit() {
        let mut rng = stream(1);
        let m = private_window_mean(&[1.0, 1.0, 1.0, 1.0], f64::INFINITY, &mut rng).unwrap();
        assert_eq!(m, 1.0);
    }

    #[test]
    fn window_mean_is_unbiased() {
        let n = 8;
        let eps = 0.5;
        let ones = vec![1.0; n];
        let mut rng = stream(2);
        let draws = 100_000;
        let avg = (0..draws).map(|_| private_window_mean(&ones, eps, &mut rng).unwrap()).sum::<f64>() / draws as f64;
        let sd = core::f64::consts::SQRT_2 / (n as f64 * eps);
        assert_abs_diff_eq!(avg, 1.0, epsilon = 3.0 * sd / (draws as f64).sqrt());
    }

    #[test]
    fn window_sensitivity_is_one_over_n() {
        let a = [1.0, 0.0, 1.0, 1.0, 0.0];
        let mut b = a;
        b[1] = 1.0;
        let mean = |w: &[f64]| w.iter().sum::<f64>() / w.len() as f64;
        assert_abs_diff_eq!(mean(&b) - mean(&a), 1.0 / 5.0, epsilon = 1e-15);
    }

    #[test]
    fn window_errors() {
        let mut rng = stream(3);
        assert_eq!(private_window_mean(&[], 1.0, &mut rng), Err(Error::Parameter("private mean of an empty window")));
        assert!(matches!(private_window_mean(&[0.5, 1.2], 1.0, &mut rng), Err(Error::Contract(_))));
        assert!(private_window_mean(&[0.5], 0.0, &mut rng).is_err());
        assert!(private_window_mean(&[0.5], f64::NAN, &mut rng).is_err());
    }

    #[test]
    fn tree_exact_without_noise() {
        let mut tree = TreeMechanism::new(100, f64::INFINITY, stream(4)).unwrap();
        let mut sum = 0.0;
        for i in 0..100 {
            let r = ((i * 7) % 3) as f64 / 2.0;
            sum += r;
            assert_abs_diff_eq!(tree.update(r).unwrap(), sum, epsilon = 1e-9);
        }
        assert_eq!(tree.update(0.0), Err(Error::Capacity { capacity: 100 }));
    }

    #[test]
    fn tree_noise_term_counts() {
        let mut tree = TreeMechanism::new(64, 1.0, stream(5)).unwrap();
        tree.update(1.0).unwrap();
        assert_eq!(tree.noise_terms(), 1);
        for _ in 1..6 {
            tree.update(0.0).unwrap();
        }
        // 6 = 0b110
        assert_eq!(tree.noise_terms(), 2);
        for t in 7..=64u64 {
            tree.update(0.5).unwrap();
            let bound = (t as f64).log2().ceil() as u32 + 1;
            assert!(tree.noise_terms() <= bound);
        }
    }

    #[test]
    fn tree_depth_and_scale() {
        assert_eq!(tree_depth(1), 1.0);
        assert_eq!(tree_depth(2), 1.0);
        assert_eq!(tree_depth(1024), 10.0);
        assert_eq!(tree_depth(1025), 11.0);
        let tree = TreeMechanism::new(1024, 2.0, stream(6)).unwrap();
        assert_eq!(tree.scale(), 5.0);
    }

    #[test]
    fn tree_prefix_sums_unbiased() {
        // Fixed input; average over mechanism randomness.
        let inputs = [1.0, 0.0, 1.0, 1.0, 0.0, 1.0, 0.0];
        let reps = 20_000;
        let mut acc = 0.0;
        for rep in 0..reps {
            let noise = SeededRng::new(99, rep).stream(Substream::Noise(0));
            let mut tree = TreeMechanism::new(8, 1.0, noise).unwrap();
            let mut last = 0.0;
            for &r in &inputs {
                last = tree.update(r).unwrap();
            }
            acc += last;
        }
        // t = 7: three nodes of Lap(3) each, sd = sqrt(3 * 18).
        let sd = (3.0f64 * 18.0).sqrt();
        assert_abs_diff_eq!(acc / reps as f64, 4.0, epsilon = 4.0 * sd / (reps as f64).sqrt());
    }
}
