//! The k-max threshold family for adversarial arrival order.
//!
//! With sampling rate `p`, the policy sets the k-th largest sampled value
//! as a threshold, `k = ⌊1/(1-p)⌋`, and stops at the first online value
//! above it. Its success guarantee is exactly `k p^k (1-p)`, sandwiched
//! between `p^{1/(1-p)}` and `((p-1)/ln p)·p^{-1/ln p}`, and no policy
//! does better. The known-`n`, unknown-`p` variant estimates `p` from the
//! sample count and uses `k = ⌊n/(n-h)⌋`.

use crate::instance::check_probability;
use crate::{Error, Result};

/// Where a run of a stopping policy ended.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StopOutcome {
    /// Stopped at this 0-based index of the online sequence.
    Stopped(usize),
    /// Scanned every online value without stopping.
    NoStop,
    /// The online set was empty; counted as a win by convention.
    VacuousWin,
}

impl StopOutcome {
    /// Whether the run wins against the given online values (stop at the
    /// maximum of V, or vacuous win on empty V).
    pub fn is_win(&self, online: &[f64]) -> bool {
        match *self {
            StopOutcome::VacuousWin => true,
            StopOutcome::NoStop => false,
            StopOutcome::Stopped(i) => {
                let max = online.iter().copied().fold(f64::NEG_INFINITY, f64::max);
                online[i] == max
            }
        }
    }
}

/// Fixed-threshold policy indexed by the k-th largest sample.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct KMaxPolicy {
    k: usize,
}

impl KMaxPolicy {
    pub fn new(k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidProbability {
                p: 0.0,
                context: "[0, 1)",
            });
        }
        Ok(Self { k })
    }

    /// The policy tuned for sampling rate `p`: `k = ⌊1/(1-p)⌋`.
    pub fn for_probability(p: f64) -> Result<Self> {
        Ok(Self { k: kmax_k(p)? })
    }

    pub fn k(&self) -> usize {
        self.k
    }
}

/// `⌊1/(1-p)⌋`. Rejects `p = 1`, where the online set is almost surely
/// empty and the index is undefined.
///
/// The floor is taken with a small slack so that breakpoints like
/// `p = 2/3` (whose nearest f64 sits just below the real number) land in
/// the mathematically intended interval.
pub fn kmax_k(p: f64) -> Result<usize> {
    check_probability(p, "[0, 1)")?;
    Ok(((1.0 / (1.0 - p)) + 1e-9).floor() as usize)
}

/// The k-th largest value of `samples`, or -inf when there are fewer than
/// `k` of them.
pub fn kth_largest(samples: &[f64], k: usize) -> f64 {
    debug_assert!(k >= 1);
    if samples.len() < k {
        return f64::NEG_INFINITY;
    }
    let mut sorted = samples.to_vec();
    sorted.sort_by(|a, b| b.total_cmp(a));
    sorted[k - 1]
}

/// Runs the k-max policy: stop at the first online value above the k-th
/// largest sample (threshold -inf when there are fewer than k samples).
pub fn kmax_run(policy: KMaxPolicy, samples: &[f64], online: &[f64]) -> StopOutcome {
    if online.is_empty() {
        return StopOutcome::VacuousWin;
    }
    let threshold = kth_largest(samples, policy.k);
    match online.iter().position(|&v| v > threshold) {
        Some(i) => StopOutcome::Stopped(i),
        None => StopOutcome::NoStop,
    }
}

/// The exact guarantee of the tuned k-max policy at sampling rate `p`,
/// together with the analytic envelope it lives in.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AosGuarantee {
    pub p: f64,
    pub k: usize,
    /// `k p^k (1-p)`
    pub guarantee: f64,
    /// `p^{1/(1-p)}`
    pub lower_bound: f64,
    /// `((p-1)/ln p)·p^{-1/ln p}`
    pub upper_bound: f64,
}

/// Evaluates `k p^k (1-p)` and its bounds. All three take their limiting
/// value 0 at `p = 0` explicitly; `p = 1` is rejected.
pub fn kmax_guarantee(p: f64) -> Result<AosGuarantee> {
    let k = kmax_k(p)?;
    if p == 0.0 {
        return Ok(AosGuarantee {
            p,
            k,
            guarantee: 0.0,
            lower_bound: 0.0,
            upper_bound: 0.0,
        });
    }
    Ok(AosGuarantee {
        p,
        k,
        guarantee: k as f64 * p.powi(k as i32) * (1.0 - p),
        lower_bound: p.powf(1.0 / (1.0 - p)),
        upper_bound: ((p - 1.0) / p.ln()) * p.powf(-1.0 / p.ln()),
    })
}

/// Runs the unknown-`p` variant: `k = ⌊n/(n-h)⌋` from the observed sample
/// count `h`, then the usual threshold rule. `h = n` is the vacuous win.
pub fn kmax_unknown_p_run(n: usize, samples: &[f64], online: &[f64]) -> Result<StopOutcome> {
    let h = samples.len();
    if h + online.len() != n {
        return Err(Error::SizeMismatch {
            context: "samples + online vs n",
            expected: n,
            got: h + online.len(),
        });
    }
    if h == n {
        return Ok(StopOutcome::VacuousWin);
    }
    let k = n / (n - h);
    Ok(kmax_run(KMaxPolicy { k }, samples, online))
}

/// The exact conditional win probability of the unknown-`p` policy given
/// `h` samples, on the worst-case increasing order, for `0 <= h <= n-1`.
///
/// With `k = ⌊n/(n-h)⌋ <= h` the policy wins exactly when one of the `k`
/// largest values is online and the `(k+1)`-th largest is sampled; over
/// the `C(n,h)` equally likely sample sets that counts
/// `k C(n-k-1, h-k) / C(n,h)`. With `h < k` the threshold is -inf and the
/// first online value is accepted, which wins only when it is the single
/// online value (`h = n-1`).
pub fn kmax_unknown_p_cond(n: usize, h: usize) -> f64 {
    cond_with(&ln_factorials(n), n, h)
}

fn cond_with(lf: &[f64], n: usize, h: usize) -> f64 {
    debug_assert!(h < n);
    let k = n / (n - h);
    if h < k {
        return if h + 1 == n { 1.0 } else { 0.0 };
    }
    if h - k > n - k - 1 {
        return 0.0;
    }
    // k C(n-k-1, h-k) / C(n,h), in log space.
    let ln_ratio = ln_binomial(lf, n - k - 1, h - k) - ln_binomial(lf, n, h);
    k as f64 * ln_ratio.exp()
}

/// One summand of the unknown-`p` success probability for `0 <= h <= n-1`:
/// the exact conditional law times the binomial weight of `h`.
pub fn kmax_unknown_p_term(n: usize, h: usize, p: f64) -> f64 {
    kmax_unknown_p_cond(n, h) * binomial_pmf(n, h, p)
}

/// One summand of the asymptotic mixture form,
/// `⌊n/(n-h)⌋ (h/n)^{⌊n/(n-h)⌋} ((n-h)/n) C(n,h) p^h (1-p)^{n-h}`,
/// which replaces the exact sample-set count by a product of per-position
/// marginals; the two agree as `n` grows.
pub fn kmax_unknown_p_term_mixture(n: usize, h: usize, p: f64) -> f64 {
    debug_assert!(h >= 1 && h < n);
    let k = n / (n - h);
    let cond = k as f64 * (h as f64 / n as f64).powi(k as i32) * ((n - h) as f64 / n as f64);
    cond * binomial_pmf(n, h, p)
}

/// Success probability of the unknown-`p` policy: exact conditional terms
/// mixed over the sample count, plus the all-sampled vacuous win `p^n`.
pub fn kmax_unknown_p_success(n: usize, p: f64) -> Result<f64> {
    check_probability(p, "[0, 1]")?;
    let lf = ln_factorials(n);
    let mut total = p.powi(n as i32);
    for h in 0..n {
        total += cond_with(&lf, n, h) * pmf_with(&lf, n, h, p);
    }
    Ok(total)
}

/// The asymptotic mixture variant: the marginal-product sum over
/// `1 <= h <= n-1` (its `h = 0` term vanishes) plus the `p^n` vacuity
/// mass. Reported alongside [`kmax_unknown_p_success`]; the exhaustive
/// oracle pins the exact variant, and the two converge for large `n`.
pub fn kmax_unknown_p_success_mixture(n: usize, p: f64) -> Result<f64> {
    check_probability(p, "[0, 1]")?;
    let mut total = p.powi(n as i32);
    for h in 1..n {
        total += kmax_unknown_p_term_mixture(n, h, p);
    }
    Ok(total)
}

/// `ln C(n, k)` from a log-factorial table.
fn ln_binomial(lf: &[f64], n: usize, k: usize) -> f64 {
    debug_assert!(k <= n);
    lf[n] - lf[k] - lf[n - k]
}

/// `C(n,h) p^h (1-p)^{n-h}`, switching to log space when direct products
/// would overflow.
pub fn binomial_pmf(n: usize, h: usize, p: f64) -> f64 {
    debug_assert!(h <= n);
    if n <= 100 {
        if p == 0.0 {
            return if h == 0 { 1.0 } else { 0.0 };
        }
        if p == 1.0 {
            return if h == n { 1.0 } else { 0.0 };
        }
        let mut c = 1.0;
        let h_small = h.min(n - h);
        for j in 0..h_small {
            c = c * (n - j) as f64 / (j + 1) as f64;
        }
        c * p.powi(h as i32) * (1.0 - p).powi((n - h) as i32)
    } else {
        pmf_with(&ln_factorials(n), n, h, p)
    }
}

fn pmf_with(lf: &[f64], n: usize, h: usize, p: f64) -> f64 {
    if p == 0.0 {
        return if h == 0 { 1.0 } else { 0.0 };
    }
    if p == 1.0 {
        return if h == n { 1.0 } else { 0.0 };
    }
    let ln_pmf = ln_binomial(lf, n, h) + h as f64 * p.ln() + (n - h) as f64 * (1.0 - p).ln();
    ln_pmf.exp()
}

/// Kahan-summed table of ln(k!) for k = 0..=n.
fn ln_factorials(n: usize) -> Vec<f64> {
    let mut table = Vec::with_capacity(n + 1);
    table.push(0.0);
    let mut sum = 0.0;
    let mut carry = 0.0;
    for k in 1..=n {
        let term = (k as f64).ln() - carry;
        let next = sum + term;
        carry = (next - sum) - term;
        sum = next;
        table.push(sum);
    }
    table
}
