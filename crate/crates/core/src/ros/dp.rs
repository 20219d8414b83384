//! Backward induction for the optimal random-order policy.
//!
//! `W(j, r)` is the probability of eventually stopping at the online
//! maximum, given that after `j` observed values the best online value so
//! far ranks `r` among them and play continues optimally. The rank of the
//! next observation is uniform on `1..=j+1`, stopping at a state `(j, r)`
//! wins with probability `prod_{s=0}^{r-1} (j-s)/(n-s)`, and the optimal
//! policy accepts exactly when that stop value reaches `W(j, r)` — a
//! position-rank rule.

use super::seq_ell::{seq_ell_success_given_h, EllFunction};
use crate::aos::binomial_pmf;
use crate::{Error, Result};

/// Triangular table of continuation win probabilities, `1 <= r <= j <= n`.
#[derive(Debug, Clone, PartialEq)]
pub struct WinTable {
    n: usize,
    rows: Vec<Vec<f64>>,
}

impl WinTable {
    pub fn n(&self) -> usize {
        self.n
    }

    /// `W(j, r)`; requires `1 <= r <= j <= n`.
    pub fn win(&self, j: usize, r: usize) -> f64 {
        self.rows[j - 1][r - 1]
    }

    /// Probability of winning when stopping at state `(j, r)`: all `r`
    /// larger-or-equal ranks stay inside the first `j` arrivals.
    pub fn stop_value(&self, j: usize, r: usize) -> f64 {
        (0..r)
            .map(|s| (j - s) as f64 / (self.n - s) as f64)
            .product()
    }

    /// Rows `(j, r, W)` in lexicographic order, for table export.
    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        self.rows
            .iter()
            .enumerate()
            .flat_map(|(j0, row)| row.iter().enumerate().map(move |(r0, &w)| (j0 + 1, r0 + 1, w)))
    }
}

/// Computes the win table for size `n` and extracts the induced
/// acceptance-rank rule: `ell(j)` is the largest rank whose stop value
/// still matches the continuation value (accepting on ties), or 0 when
/// even rank 1 should wait.
pub fn optimal_policy_dp(n: usize) -> Result<(WinTable, EllFunction)> {
    if n == 0 {
        return Err(Error::SizeMismatch {
            context: "table size",
            expected: 1,
            got: 0,
        });
    }
    let mut rows: Vec<Vec<f64>> = (1..=n).map(|j| vec![0.0; j]).collect();
    // Backward from j = n (all zeros: no later step can win).
    for j in (1..n).rev() {
        // Stop values at step j+1 and the prefix sums of
        // max(stop, continue) over ranks 1..=r.
        let mut prefix = vec![0.0; j + 1];
        let mut stop = 1.0;
        let mut acc = 0.0;
        for r1 in 1..=j + 1 {
            stop *= (j + 2 - r1) as f64 / (n + 1 - r1) as f64;
            let cont = rows[j][r1 - 1];
            acc += cont.max(stop);
            prefix[r1 - 1] = acc;
        }
        let jf = (j + 1) as f64;
        for r in 1..=j {
            rows[j - 1][r - 1] = (jf - r as f64) / jf * rows[j][r - 1] + prefix[r - 1] / jf;
        }
    }
    let table = WinTable { n, rows };

    let mut ell = Vec::with_capacity(n);
    for j in 1..=n {
        let mut best = 0usize;
        let mut stop = 1.0;
        for r in 1..=j {
            stop *= (j + 1 - r) as f64 / (n + 1 - r) as f64;
            if stop >= table.win(j, r) {
                best = r;
            }
        }
        ell.push(best);
    }
    let ell = EllFunction::new(ell)?;
    Ok((table, ell))
}

/// Success probability of a position-rank rule under Bernoulli(p)
/// sampling: the conditional formula mixed over the sample count, plus
/// the all-sampled vacuous win.
pub fn mixed_success(n: usize, p: f64, ell: &EllFunction) -> Result<f64> {
    let mut total = p.powi(n as i32);
    for h in 0..n {
        total += binomial_pmf(n, h, p) * seq_ell_success_given_h(n, h, ell)?;
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_element_accepts_immediately() {
        let (table, ell) = optimal_policy_dp(1).unwrap();
        assert_eq!(ell.values(), &[1]);
        assert_eq!(table.win(1, 1), 0.0);
        assert!((mixed_success(1, 0.0, &ell).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn table_monotonicity() {
        // Non-decreasing in r everywhere. Non-increasing in j holds on
        // the acceptance region r <= ell(j) — the states the policy is
        // built from; outside it, waiting with a deeper current rank can
        // be strictly better, e.g. W(2,2) < W(3,2) at n = 40.
        for n in [5usize, 40, 200] {
            let (table, ell) = optimal_policy_dp(n).unwrap();
            for j in 1..=n {
                for r in 1..=j {
                    let w = table.win(j, r);
                    assert!((0.0..=1.0).contains(&w));
                    if r > 1 {
                        assert!(w >= table.win(j, r - 1) - 1e-14, "n={n} j={j} r={r}");
                    }
                    if j < n && r <= ell.at(j) {
                        assert!(w >= table.win(j + 1, r) - 1e-14, "n={n} j={j} r={r}");
                    }
                }
            }
        }
    }

    #[test]
    fn rule_is_non_decreasing_up_to_500() {
        for n in [2usize, 17, 100, 500] {
            let (_, ell) = optimal_policy_dp(n).unwrap();
            for j in 2..=n {
                assert!(ell.at(j) >= ell.at(j - 1), "n={n} j={j}");
            }
            assert_eq!(ell.at(n), n, "accept anything at the last step");
        }
    }

    #[test]
    fn rejection_phase_ends_near_n_over_e() {
        let n = 100;
        let (_, ell) = optimal_policy_dp(n).unwrap();
        let first_accept = (1..=n).find(|&j| ell.at(j) >= 1).unwrap();
        let cutoff = n as f64 / std::f64::consts::E;
        assert!(
            (first_accept as f64 - cutoff).abs() <= 2.0,
            "first acceptance at {first_accept}, expected near {cutoff}"
        );
    }

    #[test]
    fn dp_rule_beats_every_constant_rule() {
        let n = 6;
        let (_, ell) = optimal_policy_dp(n).unwrap();
        for &p in &[0.3, 0.5] {
            let dp_value = mixed_success(n, p, &ell).unwrap();
            for c in 0..=n {
                let other = EllFunction::constant(n, c).unwrap();
                let v = mixed_success(n, p, &other).unwrap();
                assert!(dp_value >= v - 1e-12, "p={p} c={c}: {dp_value} < {v}");
            }
        }
    }
}
