//! The time-threshold policy and its analytics.
//!
//! Between thresholds `t_k` and `t_{k+1}` the policy accepts an arriving
//! online value when it is the running online maximum and exceeds the
//! k-th largest sample. Its limiting success guarantee is
//!
//! ```text
//!   sum_{i>=1} p^{i-1} ( 1 - M_i - ∫_{M_i}^1 sum_{j=1}^i (t - M_i)/t^j dt ),
//!   M_i = max(p, t_i),
//! ```
//!
//! and its exact size-`n` success probability subtracts a stop-too-early
//! correction whose integrand carries a binomial CDF factor.

use super::thresholds::ThresholdSequence;
use crate::aos::StopOutcome;
use crate::exec;
use crate::instance::{check_probability, ArrivalRealization, Instance};
use crate::quad::integrate_adaptive;
use crate::{Error, Result};

/// Runs the policy on one arrival realization. The returned index counts
/// online elements in arrival-time order; elements arriving before `t_1`
/// are never accepted, and an empty online set is the vacuous win.
pub fn alg_t_run(
    t: &ThresholdSequence,
    arrivals: &ArrivalRealization,
    instance: &Instance,
) -> Result<StopOutcome> {
    if arrivals.n() != instance.len() {
        return Err(Error::SizeMismatch {
            context: "arrivals vs instance",
            expected: instance.len(),
            got: arrivals.n(),
        });
    }
    let order = arrivals.arrival_order();
    let mut sorted_samples: Vec<f64> = order
        .iter()
        .filter(|&&e| arrivals.is_sampled(e))
        .map(|&e| instance.value(e))
        .collect();
    sorted_samples.sort_by(|a, b| b.total_cmp(a));

    let mut best_online = f64::NEG_INFINITY;
    let mut online_idx = 0usize;
    let mut any_online = false;
    for &element in &order {
        if arrivals.is_sampled(element) {
            continue;
        }
        any_online = true;
        let v = instance.value(element);
        let k = t.index_at(arrivals.times()[element]);
        if v > best_online {
            best_online = v;
            if k >= 1 {
                let threshold = sorted_samples
                    .get(k - 1)
                    .copied()
                    .unwrap_or(f64::NEG_INFINITY);
                if v > threshold {
                    return Ok(StopOutcome::Stopped(online_idx));
                }
            }
        }
        online_idx += 1;
    }
    if any_online {
        Ok(StopOutcome::NoStop)
    } else {
        Ok(StopOutcome::VacuousWin)
    }
}

/// The online values in arrival-time order; `alg_t_run`'s stop index
/// points into this sequence.
pub fn online_values_in_time_order(arrivals: &ArrivalRealization, instance: &Instance) -> Vec<f64> {
    arrivals
        .arrival_order()
        .into_iter()
        .filter(|&e| !arrivals.is_sampled(e))
        .map(|e| instance.value(e))
        .collect()
}

/// One bracketed term of the guarantee at threshold value `m`:
/// `1 - m - ∫_m^1 sum_{j=1}^i (t - m)/t^j dt`, with the inner integral in
/// closed form (log terms for j = 1, 2; power terms beyond).
pub fn alg_t_term(i: usize, m: f64) -> f64 {
    debug_assert!(i >= 1 && m > 0.0 && m <= 1.0);
    let mut integral = 0.0;
    let inv = 1.0 / m;
    // Running m^{1-j} starting at j = 1.
    let mut m_pow_1mj = 1.0;
    for j in 1..=i {
        let term = match j {
            1 => (1.0 - m) + m * m.ln(),
            2 => -m.ln() - (1.0 - m),
            _ => {
                let a = (1.0 - m_pow_1mj * m) / (2.0 - j as f64);
                let b = m * (1.0 - m_pow_1mj) / (1.0 - j as f64);
                a - b
            }
        };
        integral += term;
        m_pow_1mj *= inv;
    }
    1.0 - m - integral
}

/// The success guarantee of the policy under sampling rate `p`, truncated
/// where the geometric tail `p^I/(1-p)` drops below `tail_tol`. The
/// sequence must be materialized at least that far.
pub fn alg_t_guarantee(t: &ThresholdSequence, p: f64, tail_tol: f64) -> Result<f64> {
    check_probability(p, "[0, 1)")?;
    if tail_tol <= 0.0 {
        return Err(Error::InvalidWindow("tail_tol must be positive".into()));
    }
    let terms = if p == 0.0 {
        1
    } else {
        ((tail_tol * (1.0 - p)).ln() / p.ln()).ceil().max(1.0) as usize
    };
    t.require(terms)?;
    let sum = exec::fold_chunked(
        terms as u64,
        512,
        || 0.0f64,
        |acc, idx| {
            let i = idx as usize + 1;
            let m = p.max(t.t(i));
            *acc += p.powi(i as i32 - 1) * alg_t_term(i, m);
        },
        |acc, part| *acc += part,
    );
    Ok(sum)
}

/// Binomial CDF `P(Bin(m, t) <= x)`, summed from whichever tail is
/// shorter so it stays accurate for `t` near 0 or 1.
pub fn binom_cdf(m: usize, x: isize, t: f64) -> f64 {
    if x < 0 {
        return 0.0;
    }
    let x = x as usize;
    if x >= m {
        return 1.0;
    }
    if t <= 0.0 {
        return 1.0;
    }
    if t >= 1.0 {
        return 0.0; // x < m
    }
    if x * 2 <= m {
        let mut pmf = (1.0 - t).powi(m as i32);
        let mut total = pmf;
        for l in 0..x {
            pmf *= (m - l) as f64 / (l + 1) as f64 * t / (1.0 - t);
            total += pmf;
        }
        total.min(1.0)
    } else {
        let mut pmf = t.powi(m as i32);
        let mut upper = pmf;
        for l in (x + 2..=m).rev() {
            pmf *= l as f64 / (m - l + 1) as f64 * (1.0 - t) / t;
            upper += pmf;
        }
        (1.0 - upper).max(0.0)
    }
}

/// Exact success probability of the policy for instance size `n`:
/// the probability the online maximum is acceptable minus the
/// probability of stopping before seeing it, the latter integrated
/// numerically to `quad_tol`.
pub fn alg_t_success_prob(
    t: &ThresholdSequence,
    p: f64,
    n: usize,
    quad_tol: f64,
) -> Result<f64> {
    check_probability(p, "[0, 1]")?;
    t.require(n)?;

    let mut acceptable = p.powi(n as i32);
    for i in 1..=n {
        acceptable += p.powi(i as i32 - 1) * (1.0 - p.max(t.t(i)));
    }

    let stops_before = exec::fold_chunked(
        n.saturating_sub(1) as u64,
        8,
        || Ok(0.0f64),
        |acc: &mut Result<f64>, idx| {
            let i = idx as usize + 1;
            let m = p.max(t.t(i));
            let integral = integrate_adaptive(m, 1.0, quad_tol, "stop-before term", |tau| {
                let mut inner = 0.0;
                let mut tau_pow = tau;
                for j in 1..=i {
                    let cdf = binom_cdf(n - j, i as isize - j as isize + 1, tau);
                    inner += (tau - m) / tau_pow * (1.0 - cdf);
                    tau_pow *= tau;
                }
                inner
            });
            match (acc.as_mut(), integral) {
                (Ok(total), Ok(v)) => *total += p.powi(i as i32 - 1) * v,
                (Ok(_), Err(e)) => *acc = Err(e),
                (Err(_), _) => {}
            }
        },
        |acc, part| match (acc.as_mut(), part) {
            (Ok(total), Ok(v)) => *total += v,
            (Ok(_), Err(e)) => *acc = Err(e),
            (Err(_), _) => {}
        },
    )?;

    Ok(acceptable - stops_before)
}
