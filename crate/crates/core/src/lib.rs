//! Stochastic multi-armed bandits under global differential privacy.
//!
//! Policies, Laplace and tree mechanisms, regret bound calculators and a
//! Monte-Carlo privacy auditor. Everything here is `no_std` with `alloc`;
//! IO and the command line live in the `dpbandit` crate.
//!
//! ```
//! use dpbandit_core::{simulate, Detail, Environment, PolicyKind, PolicySpec, SeededRng};
//!
//! let env = Environment::bernoulli(&[0.75, 0.25]).unwrap();
//! let spec = PolicySpec::new(PolicyKind::AdaPUcb, 1.0);
//! let trace = simulate(&spec, &env, 1000, &SeededRng::new(7, 0), Detail::Checkpoints).unwrap();
//! assert_eq!(trace.pulls.iter().sum::<u64>(), 1000);
//! ```

#![no_std]
// `!(x > 0.0)` is how NaN gets rejected.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod audit;
pub mod bounds;
pub mod env;
pub mod error;
pub mod kl;
pub mod policies;
pub mod privacy;
pub mod rng;
pub mod trace;

pub use env::{ArmModel, Bandit, Environment, RewardTable, StochasticBandit};
pub use error::{Error, Result};
pub use kl::{bernoulli_kl, kl_upper_inverse};
pub use policies::{
    adap_klucb_index, adap_ucb_index, run_policy, select_argmax, simulate, PolicyKind, PolicySpec, DEFAULT_ALPHA,
};
pub use privacy::{laplace_sample, private_window_mean, LaplaceScale, TreeMechanism};
pub use rng::{RngStream, SeededRng, Substream};
pub use trace::{Checkpoint, Detail, RunMeta, RunTrace};
