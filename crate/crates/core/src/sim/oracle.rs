//! Exact brute-force oracles: full enumeration of sampling outcomes for
//! the adversarial game and of rank orders for the random-order game.
//! These are the anti-drift anchors every closed form is tested against.

use super::PolicySpec;
use crate::exec;
use crate::ros::EllFunction;
use crate::{Error, Result};

/// Cap for the 2^n sampling-outcome enumeration.
pub const AOS_ORACLE_MAX_N: usize = 24;
/// Cap for the n! rank-order enumeration.
pub const ROS_ORACLE_MAX_N: usize = 8;

/// Exact win probability of an ordinal policy on the increasing
/// instance, broken down by sample count. `by_sample_count[h]` carries
/// the weighted wins of outcomes with exactly `h` samples; the all-
/// sampled outcome (`h = n`) is the vacuous win and contributes `p^n`.
#[derive(Debug, Clone, PartialEq)]
pub struct AosOracle {
    pub n: usize,
    pub p: f64,
    pub by_sample_count: Vec<f64>,
}

impl AosOracle {
    /// Total win probability, vacuous wins included.
    pub fn total(&self) -> f64 {
        self.by_sample_count.iter().sum()
    }

    /// Win probability excluding the all-sampled vacuity mass.
    pub fn non_vacuous(&self) -> f64 {
        self.by_sample_count[..self.n].iter().sum()
    }
}

/// Enumerates all 2^n sampling outcomes of the increasing instance and
/// replays `policy` on each, weighting by `p^|S| (1-p)^(n-|S|)`. The
/// increasing presentation order is the adversarial worst case, so this
/// pins guarantee formulas exactly.
pub fn oracle_aos_exact(policy: &PolicySpec, n: usize, p: f64) -> Result<AosOracle> {
    if n == 0 || n > AOS_ORACLE_MAX_N {
        return Err(Error::SizeCapExceeded {
            n,
            cap: AOS_ORACLE_MAX_N,
        });
    }
    let resolved = match policy {
        PolicySpec::KMax { k: None } => PolicySpec::KMax {
            k: Some(crate::aos::kmax_k(p)?),
        },
        PolicySpec::AlgT => {
            return Err(Error::UnknownPolicy(
                "alg-t is time-driven; the sampling-outcome oracle covers ordinal policies".into(),
            ))
        }
        other => other.clone(),
    };

    let by_sample_count = exec::fold_chunked(
        1u64 << n,
        exec::DEFAULT_CHUNK,
        || Ok(vec![0.0f64; n + 1]),
        |acc: &mut Result<Vec<f64>>, mask| {
            let Ok(buckets) = acc.as_mut() else { return };
            let mut samples = [0.0f64; AOS_ORACLE_MAX_N];
            let mut online = [0.0f64; AOS_ORACLE_MAX_N];
            let (mut hs, mut os) = (0usize, 0usize);
            for i in 0..n {
                let v = (i + 1) as f64;
                if mask >> i & 1 == 1 {
                    samples[hs] = v;
                    hs += 1;
                } else {
                    online[os] = v;
                    os += 1;
                }
            }
            match resolved.run_ordinal(n, &samples[..hs], &online[..os]) {
                Ok(outcome) => {
                    if outcome.is_win(&online[..os]) {
                        buckets[hs] += p.powi(hs as i32) * (1.0 - p).powi(os as i32);
                    }
                }
                Err(e) => *acc = Err(e),
            }
        },
        |acc, part| match (acc.as_mut(), part) {
            (Ok(buckets), Ok(other)) => {
                for (a, b) in buckets.iter_mut().zip(other) {
                    *a += b;
                }
            }
            (Ok(_), Err(e)) => *acc = Err(e),
            (Err(_), _) => {}
        },
    )?;
    Ok(AosOracle {
        n,
        p,
        by_sample_count,
    })
}

/// Exact success frequency of the position-rank rule over all n! rank
/// orders, with positions `1..=h` acting as the samples. Replays the
/// acceptance rule from raw values, independently of the library's rank
/// stream machinery.
pub fn oracle_ros_exact(ell: &EllFunction, n: usize, h: usize) -> Result<f64> {
    if n == 0 || n > ROS_ORACLE_MAX_N {
        return Err(Error::SizeCapExceeded {
            n,
            cap: ROS_ORACLE_MAX_N,
        });
    }
    if h >= n || ell.n() != n {
        return Err(Error::SizeMismatch {
            context: "oracle sample count vs rule",
            expected: n,
            got: if h >= n { h } else { ell.n() },
        });
    }
    let mut values: Vec<usize> = (1..=n).collect();
    let mut wins = 0u64;
    let mut total = 0u64;
    permute(&mut values, 0, &mut |perm| {
        total += 1;
        if replay_wins(perm, h, ell) {
            wins += 1;
        }
    });
    Ok(wins as f64 / total as f64)
}

fn replay_wins(perm: &[usize], h: usize, ell: &EllFunction) -> bool {
    let n = perm.len();
    let online_max = perm[h..].iter().copied().max().expect("h < n");
    let mut best_online = 0usize;
    for i in h..n {
        let v = perm[i];
        if v > best_online {
            best_online = v;
            // Overall rank among the first i+1 observed values.
            let rank = 1 + perm[..=i].iter().filter(|&&u| u > v).count();
            if rank <= ell.at(i + 1) {
                return v == online_max;
            }
        }
    }
    false
}

/// Heap's algorithm; calls `visit` on every permutation of `items`.
fn permute<F: FnMut(&[usize])>(items: &mut Vec<usize>, k: usize, visit: &mut F) {
    let n = items.len();
    if k == n {
        visit(items);
        return;
    }
    for i in k..n {
        items.swap(k, i);
        permute(items, k + 1, visit);
        items.swap(k, i);
    }
}
