//! The universal time-threshold sequence.
//!
//! Threshold `t_i` is the unique root in (0, 1) of
//!
//! ```text
//!   ln(1/t) + sum_{j=1}^{i-1} ((1/t)^j - 1) / j = 1
//! ```
//!
//! The left-hand side is strictly decreasing in `t` and strictly
//! increasing in `i`, so the roots exist, are unique, and increase with
//! `i` starting from `t_1 = 1/e`. The sequence does not depend on the
//! sampling rate.

use crate::exec;
use crate::{Error, Result};

/// Samuels-constant first-order guess `t_i ≈ 1 - c/i`; only used to seed
/// the root search, never as a result.
const LIMIT_SLOPE: f64 = 0.804;

/// The increasing time thresholds driving the time-threshold policy.
#[derive(Debug, Clone, PartialEq)]
pub struct ThresholdSequence {
    thresholds: Vec<f64>,
}

impl ThresholdSequence {
    /// Wraps a caller-supplied sequence; must be strictly increasing
    /// inside (0, 1).
    pub fn from_values(thresholds: Vec<f64>) -> Result<Self> {
        for (i, &t) in thresholds.iter().enumerate() {
            let ok = t > 0.0 && t < 1.0 && (i == 0 || thresholds[i - 1] < t);
            if !ok {
                return Err(Error::NotNonDecreasing { position: i + 1 });
            }
        }
        Ok(Self { thresholds })
    }

    pub fn len(&self) -> usize {
        self.thresholds.len()
    }

    pub fn is_empty(&self) -> bool {
        self.thresholds.is_empty()
    }

    /// `t_i`, 1-based.
    pub fn t(&self, i: usize) -> f64 {
        self.thresholds[i - 1]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.thresholds
    }

    /// Number of thresholds at or below time `tau`: the sample-rank index
    /// the policy uses at that time.
    pub fn index_at(&self, tau: f64) -> usize {
        self.thresholds.partition_point(|&t| t <= tau)
    }

    pub(crate) fn require(&self, needed: usize) -> Result<()> {
        if self.len() < needed {
            Err(Error::TooFewThresholds {
                needed,
                have: self.len(),
            })
        } else {
            Ok(())
        }
    }
}

/// Left-hand side of the threshold equation for index `i` at `t`.
pub fn threshold_equation_lhs(i: usize, t: f64) -> f64 {
    debug_assert!(i >= 1 && t > 0.0 && t < 1.0);
    let x = 1.0 / t;
    let mut sum = -t.ln();
    let mut pw = 1.0;
    for j in 1..i {
        pw *= x;
        sum += (pw - 1.0) / j as f64;
    }
    sum
}

/// d/dt of the left-hand side: `-(1/t) * sum_{j=0}^{i-1} t^{-j}`.
fn threshold_equation_dlhs(i: usize, t: f64) -> f64 {
    let x = 1.0 / t;
    // Geometric sum (x^i - 1)/(x - 1); x > 1 strictly here.
    let geo = if x - 1.0 < 1e-12 {
        i as f64
    } else {
        (x.powi(i as i32) - 1.0) / (x - 1.0)
    };
    -x * geo
}

/// Root of the threshold equation for one index, to `|lhs - 1| < tol`.
///
/// Newton steps inside a maintained sign-change bracket, falling back to
/// bisection whenever a step leaves it, so convergence never depends on
/// the starting point.
fn solve_one(i: usize, tol: f64) -> Result<f64> {
    let mut lo = 1e-15;
    let mut hi = 1.0 - 1e-15;
    let mut t = if i == 1 {
        (-1.0f64).exp()
    } else {
        (1.0 - LIMIT_SLOPE / i as f64).clamp(lo, hi)
    };
    let mut residual = f64::MAX;
    for _ in 0..200 {
        let f = threshold_equation_lhs(i, t) - 1.0;
        residual = f.abs();
        if residual < tol {
            return Ok(t);
        }
        // lhs decreases in t: f > 0 means the root lies to the right.
        if f > 0.0 {
            lo = t;
        } else {
            hi = t;
        }
        if hi - lo <= f64::EPSILON * t {
            // Bracket exhausted at machine precision; accept if the
            // residual is within the evaluation noise for this index.
            if residual < tol.max(1e-11 * i as f64) {
                return Ok(t);
            }
            break;
        }
        let step = t - f / threshold_equation_dlhs(i, t);
        t = if step > lo && step < hi {
            step
        } else {
            0.5 * (lo + hi)
        };
    }
    Err(Error::NoConvergence {
        what: "threshold equation",
        index: i,
        residual,
    })
}

/// Solves the first `count` thresholds, each to residual below `tol`.
/// Roots are independent, so they are solved in parallel; the sequence is
/// then checked to be strictly increasing.
pub fn solve_thresholds(count: usize, tol: f64) -> Result<ThresholdSequence> {
    if count == 0 || tol <= 0.0 {
        return Err(Error::InvalidWindow(
            "count must be >= 1 and tol positive".into(),
        ));
    }
    let roots = exec::fold_chunked(
        count as u64,
        256,
        Vec::new,
        |acc: &mut Vec<Result<f64>>, idx| acc.push(solve_one(idx as usize + 1, tol)),
        |acc, part| acc.extend(part),
    );
    let thresholds = roots.into_iter().collect::<Result<Vec<f64>>>()?;
    ThresholdSequence::from_values(thresholds)
}

/// The limiting acceptance-rank rule: the smallest sample rank `s >= 0`
/// such that accepting a running online maximum ranked within the top
/// `s+1` is optimal from time `tau` on. Zero until `tau` reaches `1/e`
/// ("accept nothing yet"), and steps up by one exactly at each threshold:
/// `t_i = inf { tau : ell_tilde(tau) >= i }`.
pub fn ell_tilde(tau: f64) -> Result<usize> {
    if !(tau > 0.0 && tau < 1.0) {
        return Err(Error::InvalidProbability {
            p: tau,
            context: "[0, 1)",
        });
    }
    // Incremental evaluation of the threshold-equation left-hand side:
    // the condition for rank s is lhs(s + 1, tau) >= 1.
    let x = 1.0 / tau;
    let mut lhs = -tau.ln();
    if lhs >= 1.0 {
        return Ok(0);
    }
    let mut pw = 1.0;
    for s in 1..=MAX_ELL {
        pw *= x;
        lhs += (pw - 1.0) / s as f64;
        if lhs >= 1.0 {
            return Ok(s);
        }
    }
    Err(Error::NoConvergence {
        what: "limit rank rule",
        index: MAX_ELL,
        residual: 1.0 - lhs,
    })
}

/// The rank rule grows like `c/(1-tau)`; this cap admits `tau` up to
/// roughly `1 - 1e-5`.
const MAX_ELL: usize = 200_000;

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_threshold_is_one_over_e() {
        let seq = solve_thresholds(1, 1e-14).unwrap();
        assert!((seq.t(1) - (-1.0f64).exp()).abs() < 1e-12);
    }

    #[test]
    fn second_threshold_matches_bisection_oracle() {
        // Independent plain-bisection solve of ln(1/t) + (1/t - 1) = 1.
        let (mut lo, mut hi) = (0.4f64, 0.9f64);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            let f = (1.0 / mid).ln() + (1.0 / mid - 1.0) - 1.0;
            if f > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let oracle = 0.5 * (lo + hi);
        let seq = solve_thresholds(2, 1e-13).unwrap();
        assert!((seq.t(2) - oracle).abs() < 1e-12, "{} vs {oracle}", seq.t(2));
        assert!((oracle - 0.6423).abs() < 1e-4);
    }

    #[test]
    fn sequence_is_strictly_increasing_with_small_residuals() {
        let seq = solve_thresholds(250, 1e-11).unwrap();
        for i in 1..=seq.len() {
            let lhs = threshold_equation_lhs(i, seq.t(i));
            assert!((lhs - 1.0).abs() < 1e-10, "residual at {i}");
            if i > 1 {
                assert!(seq.t(i) > seq.t(i - 1));
            }
        }
    }

    #[test]
    fn tail_behaves_like_one_minus_c_over_i() {
        let seq = solve_thresholds(200, 1e-12).unwrap();
        let c = 0.8043522;
        let i = 200.0;
        assert!((i * (1.0 - seq.t(200)) - c).abs() < 0.05);
    }

    #[test]
    fn index_at_partitions_time() {
        let seq = solve_thresholds(5, 1e-12).unwrap();
        assert_eq!(seq.index_at(0.1), 0);
        assert_eq!(seq.index_at(seq.t(1)), 1);
        assert_eq!(seq.index_at(0.5), 1);
        assert_eq!(seq.index_at(0.99), 5);
    }

    #[test]
    fn rank_rule_steps_exactly_at_thresholds() {
        let seq = solve_thresholds(6, 1e-13).unwrap();
        for i in 1..=6usize {
            let t = seq.t(i);
            assert_eq!(ell_tilde(t - 1e-9).unwrap(), i - 1, "just below t_{i}");
            assert_eq!(ell_tilde(t + 1e-9).unwrap(), i, "just above t_{i}");
        }
        assert_eq!(ell_tilde(1e-6).unwrap(), 0);
    }

    #[test]
    fn rank_rule_matches_threshold_table_at_interior_point() {
        let seq = solve_thresholds(12, 1e-13).unwrap();
        let tau = 0.9;
        let by_table = (1..=12).filter(|&i| seq.t(i) <= tau).count();
        assert_eq!(ell_tilde(tau).unwrap(), by_table);
    }

    #[test]
    fn from_values_rejects_disorder() {
        assert!(ThresholdSequence::from_values(vec![0.3, 0.3]).is_err());
        assert!(ThresholdSequence::from_values(vec![0.0]).is_err());
        assert!(ThresholdSequence::from_values(vec![0.2, 0.5, 0.4]).is_err());
    }
}
