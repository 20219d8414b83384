//! Algorithms for the secretary problem with independent sampling.
//!
//! Each of `n` adversarially chosen, pairwise distinct values is revealed
//! up front ("sampled") independently with probability `p`; the rest arrive
//! online and the goal is to stop at the largest online value. This crate
//! implements and cross-verifies the policies that are optimal for this
//! game:
//!
//! * [`aos`] — adversarial arrival order: the k-max threshold family
//!   (`k = ⌊1/(1-p)⌋`), its exact success guarantee `k p^k (1-p)`, analytic
//!   bounds, and the known-`n`/unknown-`p` variant.
//! * [`ros`] — uniformly random arrival order: the universal time-threshold
//!   sequence `t*` (with `t*_1 = 1/e`), the time-threshold policy and its
//!   guarantee, exact finite-`n` success probabilities, the
//!   backward-induction optimal policy, and the full-information limit
//!   constant `γ ≈ 0.5801`.
//! * [`lastzero`] — the finite-window conflict-graph engine for the
//!   last-zero game over Bernoulli bitstrings, which certifies optimality
//!   of the k-max family.
//! * [`sim`] — reproducible Monte Carlo trials and exact brute-force
//!   oracles used to pin every formula above.
//!
//! All randomness flows through counter-based streams keyed by
//! `(seed, domain, index)` (see [`rng`]), so results are identical across
//! worker counts and evaluation orders. The `parallel` feature (default)
//! runs the data-parallel inner loops on rayon; disabling it falls back to
//! the sequential lane with bit-identical output.

pub mod aos;
mod error;
pub mod exec;
pub mod instance;
pub mod lastzero;
pub mod quad;
pub mod rng;
pub mod ros;
pub mod sim;
pub mod sweep;

pub use error::{Error, Result};
