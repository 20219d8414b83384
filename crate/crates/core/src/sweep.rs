//! Guarantee curves over a grid of sampling rates: the adversarial-order
//! guarantee with its analytic envelope next to the random-order
//! guarantee, as plotted data.

use crate::aos::kmax_guarantee;
use crate::ros::{alg_t_guarantee, solve_thresholds};
use crate::{exec, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub p: f64,
    pub k: usize,
    pub aos_guarantee: f64,
    pub aos_lower: f64,
    pub aos_upper: f64,
    pub ros_guarantee: f64,
}

/// Evaluates both guarantees on the grid `p = step, 2·step, … < 1`.
/// The threshold sequence is solved once (it does not depend on `p`) at
/// the length the largest grid point needs.
pub fn guarantee_sweep(step: f64, tail_tol: f64) -> Result<Vec<SweepRow>> {
    if !(step > 0.0 && step <= 0.1) {
        return Err(Error::InvalidWindow(format!(
            "grid step {step} outside (0, 0.1]"
        )));
    }
    let count = (1.0 / step).ceil() as usize;
    let grid: Vec<f64> = (1..count)
        .map(|i| i as f64 * step)
        .filter(|&p| p < 1.0)
        .collect();
    let p_max = *grid.last().expect("non-empty grid");
    let terms_needed = ((tail_tol * (1.0 - p_max)).ln() / p_max.ln())
        .ceil()
        .max(1.0) as usize;
    let thresholds = solve_thresholds(terms_needed, 1e-10)?;

    let rows = exec::fold_chunked(
        grid.len() as u64,
        8,
        Vec::new,
        |acc: &mut Vec<Result<SweepRow>>, idx| {
            let p = grid[idx as usize];
            let row = kmax_guarantee(p).and_then(|aos| {
                Ok(SweepRow {
                    p,
                    k: aos.k,
                    aos_guarantee: aos.guarantee,
                    aos_lower: aos.lower_bound,
                    aos_upper: aos.upper_bound,
                    ros_guarantee: alg_t_guarantee(&thresholds, p, tail_tol)?,
                })
            });
            acc.push(row);
        },
        |acc, part| acc.extend(part),
    );
    rows.into_iter().collect()
}
