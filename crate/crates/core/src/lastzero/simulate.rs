//! Direct simulation of the last-zero game for sizes beyond the
//! exhaustive cap. The policy sees only what the player would: the counts
//! revealed so far and the total number of ones.

use rand::Rng;

use crate::exec;
use crate::rng::{self, Domain};

/// What the player knows when the current card is revealed. Counts
/// include the current bit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LastZeroView {
    /// 1-based position of the current bit.
    pub position: usize,
    /// The current bit.
    pub bit: bool,
    /// Zeros revealed so far, current bit included.
    pub zeros_seen: usize,
    /// Ones revealed so far, current bit included.
    pub ones_seen: usize,
    /// Total ones in the whole sequence (announced up front).
    pub total_ones: usize,
}

/// Plays one Bernoulli(p) sequence of length `n` against `policy` and
/// reports whether the player stopped on the last zero. Stopping on a one
/// or never stopping loses; an all-ones sequence is unwinnable.
pub fn simulate_last_zero<F>(mut policy: F, n: usize, p: f64, seed: u64) -> bool
where
    F: FnMut(LastZeroView) -> bool,
{
    let mut stream = rng::stream(seed, Domain::Trial, 0);
    simulate_with(&mut policy, n, p, &mut stream)
}

fn simulate_with<F, R>(policy: &mut F, n: usize, p: f64, rng: &mut R) -> bool
where
    F: FnMut(LastZeroView) -> bool,
    R: Rng,
{
    let bits: Vec<bool> = (0..n).map(|_| rng.gen::<f64>() < p).collect();
    let total_ones = bits.iter().filter(|&&b| b).count();
    let last_zero = bits.iter().rposition(|&b| !b);
    let mut zeros_seen = 0;
    let mut ones_seen = 0;
    for (idx, &bit) in bits.iter().enumerate() {
        if bit {
            ones_seen += 1;
        } else {
            zeros_seen += 1;
        }
        let view = LastZeroView {
            position: idx + 1,
            bit,
            zeros_seen,
            ones_seen,
            total_ones,
        };
        if policy(view) {
            return !bit && last_zero == Some(idx);
        }
    }
    false
}

/// The last-zero translation of the k-max rule: stop on a zero as soon as
/// at most `k - 1` ones remain unseen. With fewer than `k` ones in total
/// this stops at the first zero.
pub fn kmax_stop_rule(k: usize) -> impl FnMut(LastZeroView) -> bool {
    move |view| !view.bit && view.total_ones - view.ones_seen <= k - 1
}

/// Empirical win rate over reproducible trials; trial `t` plays on the
/// `(seed, Trial, t)` stream, so the count is identical for any worker
/// count.
pub fn last_zero_win_rate<F, P>(make_policy: P, n: usize, p: f64, trials: u64, seed: u64) -> f64
where
    P: Fn() -> F + Sync,
    F: FnMut(LastZeroView) -> bool,
{
    let wins = exec::count_chunked(trials, |t| {
        let mut stream = rng::stream(seed, Domain::Trial, t);
        let mut policy = make_policy();
        simulate_with(&mut policy, n, p, &mut stream)
    });
    wins as f64 / trials as f64
}
