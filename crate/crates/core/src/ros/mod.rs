//! Random-order algorithms and analytics: the universal time-threshold
//! sequence and its policy, exact finite-size success probabilities, the
//! backward-induction optimal policy, and the full-information limit.

mod alg_t;
mod dp;
mod gamma;
mod seq_ell;
mod thresholds;

pub use alg_t::{
    alg_t_guarantee, alg_t_run, alg_t_success_prob, alg_t_term, binom_cdf,
    online_values_in_time_order,
};
pub use dp::{mixed_success, optimal_policy_dp, WinTable};
pub use gamma::{gamma_constants, GammaResult};
pub use seq_ell::{ell_star_finite, seq_ell_run, seq_ell_success_given_h, EllFunction};
pub use thresholds::{ell_tilde, solve_thresholds, threshold_equation_lhs, ThresholdSequence};
