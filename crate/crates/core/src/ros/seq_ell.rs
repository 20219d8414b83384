//! The sequential position-rank policy: at observed position `i` (samples
//! included in the count), accept a running online maximum that beats the
//! `ell(i)`-th largest sample. `ell(i) = 0` means "accept nothing here",
//! which is how the optimal policy expresses its rejection phase.

use crate::aos::StopOutcome;
use crate::instance::RankView;
use crate::{Error, Result};

/// A non-decreasing acceptance-rank rule on positions `1..=n`.
/// `values[j-1]` is the rank bound at position `j`; entries range over
/// `0..=n`, with 0 meaning the position never accepts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EllFunction {
    n: usize,
    values: Vec<usize>,
}

impl EllFunction {
    pub fn new(values: Vec<usize>) -> Result<Self> {
        let n = values.len();
        if n == 0 {
            return Err(Error::SizeMismatch {
                context: "rank rule",
                expected: 1,
                got: 0,
            });
        }
        for (idx, w) in values.windows(2).enumerate() {
            if w[0] > w[1] {
                return Err(Error::NotNonDecreasing { position: idx + 2 });
            }
        }
        if values.iter().any(|&v| v > n) {
            return Err(Error::SizeMismatch {
                context: "rank rule entry above n",
                expected: n,
                got: *values.iter().max().expect("nonempty"),
            });
        }
        Ok(Self { n, values })
    }

    pub fn constant(n: usize, ell: usize) -> Result<Self> {
        Self::new(vec![ell; n])
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `ell(j)`, 1-based.
    pub fn at(&self, j: usize) -> usize {
        self.values[j - 1]
    }

    /// `min(ell(j), h+1)`: ranks beyond the sample count act as -inf
    /// thresholds, so clamping changes nothing behaviorally but keeps
    /// the success formula's products well defined.
    pub fn clamped(&self, j: usize, h: usize) -> usize {
        self.at(j).min(h + 1)
    }

    pub fn values(&self) -> &[usize] {
        &self.values
    }
}

/// Runs the policy over a rank stream whose positions `1..=h` were
/// samples. A running online maximum at position `i` is accepted exactly
/// when its overall rank is at most `ell(i)`; with distinct values that
/// is the same as beating the `ell(i)`-th largest sample.
pub fn seq_ell_run(ell: &EllFunction, h: usize, ranks: &[RankView]) -> StopOutcome {
    if ranks.is_empty() {
        return StopOutcome::VacuousWin;
    }
    for (idx, view) in ranks.iter().enumerate() {
        debug_assert_eq!(view.position, h + idx + 1, "rank stream positions");
        if view.online_rank_best && view.overall_rank <= ell.at(view.position) {
            return StopOutcome::Stopped(idx);
        }
    }
    StopOutcome::NoStop
}

/// Exact success probability of the policy conditional on `h` samples,
/// over a uniformly random rank order. Empty products are 1.
pub fn seq_ell_success_given_h(n: usize, h: usize, ell: &EllFunction) -> Result<f64> {
    if h >= n || ell.n() != n {
        return Err(Error::SizeMismatch {
            context: "sample count vs rule size",
            expected: n,
            got: if h >= n { h } else { ell.n() },
        });
    }
    // prod(d, denom) = prod_{j=0}^{d-1} (h - j)/(denom - j)
    let prod = |d: usize, denom: usize| -> f64 {
        (0..d)
            .map(|j| (h - j) as f64 / (denom - j) as f64)
            .product()
    };

    let nh = (n - h) as f64;
    let mut total = (1.0 - prod(ell.clamped(h + 1, h), n)) / nh;
    for i in h + 1..n {
        let ih = (i - h) as f64;
        let mut inner = 0.0;
        for r in h + 1..=i {
            let d = ell.clamped(r, h);
            inner += prod(d, i) / ih - prod(d, n) / nh;
        }
        total += inner / (n - i) as f64 - prod(ell.clamped(i + 1, h), n) / nh;
    }
    Ok(total)
}

/// The finite-size optimal acceptance rank at position `r`: the smallest
/// `s >= 0` with
///
/// ```text
///   sum_{i=r}^{n-1} (1/(n-i)) (1 - prod_{j=0}^{s} (n-j)/(i-j)) + 1 <= 0.
/// ```
///
/// The position-`n` summand of the underlying telescoping difference
/// vanishes and is excluded. `s = 0` reproduces the classical cutoff
/// (harmonic tail below 1); the rule grows toward `n/2` at late
/// positions and stabilizes to [`super::ell_tilde`] along rays `r = τn`.
pub fn ell_star_finite(n: usize, r: usize) -> Result<usize> {
    if r == 0 || r > n {
        return Err(Error::SizeMismatch {
            context: "position outside 1..=n",
            expected: n,
            got: r,
        });
    }
    // Running products over i, extended one factor per s increment. The
    // crossing can be an exact rational tie (e.g. late positions where
    // the condition telescopes to 2 - n/(r-s)), so it is accepted within
    // accumulated-rounding distance of zero.
    let mut prods: Vec<f64> = (r..n).map(|_| 1.0).collect();
    for s in 0..r {
        let mut cond = 1.0;
        for (offset, prod) in prods.iter_mut().enumerate() {
            let i = r + offset;
            *prod *= (n - s) as f64 / (i - s) as f64;
            cond += (1.0 - *prod) / (n - i) as f64;
        }
        if cond <= 1e-12 {
            return Ok(s);
        }
    }
    // Degenerate only for tiny n (e.g. n <= 2): accepting any running
    // maximum is never strictly suboptimal there.
    Ok(r)
}
