//! The full-information limit of the random-order guarantee.
//!
//! The companion constant `c` solves `∫_0^1 (e^{cx} - 1)/x dx = 1`; the
//! limiting success probability is then
//!
//! ```text
//!   gamma = e^{-c} + (e^c - 1 - c) * ∫_1^∞ x^{-1} e^{-cx} dx ≈ 0.5801
//! ```

use crate::quad::integrate_adaptive;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GammaResult {
    /// Solution of `∫_0^1 (e^{cx} - 1)/x dx = 1`.
    pub c: f64,
    /// The limiting success probability, ≈ 0.5801.
    pub gamma: f64,
}

/// `∫_0^1 (e^{cx} - 1)/x dx`; the integrand extends continuously to `c`
/// at `x = 0` and `exp_m1` keeps it stable near there.
pub fn exp_integral(c: f64, tol: f64) -> Result<f64> {
    integrate_adaptive(0.0, 1.0, tol, "exp integral", |x| {
        if x == 0.0 {
            c
        } else {
            (c * x).exp_m1() / x
        }
    })
}

/// `∫_1^∞ x^{-1} e^{-cx} dx`, truncated where the analytic tail bound
/// `e^{-cX}/(cX)` drops below `tol`.
fn decay_tail(c: f64, tol: f64) -> Result<f64> {
    let cutoff = ((1.0 / (c * tol.min(1e-6))).ln() / c).max(2.0);
    integrate_adaptive(1.0, cutoff, tol, "decay tail", |x| (-c * x).exp() / x)
}

/// Solves for `c` by bisection on the integral equation over [0.5, 1.5],
/// then evaluates `gamma`.
pub fn gamma_constants(tol: f64) -> Result<GammaResult> {
    if tol <= 0.0 {
        return Err(Error::InvalidWindow("tol must be positive".into()));
    }
    let quad_tol = (tol * 1e-2).min(1e-12);
    let residual = |c: f64| -> Result<f64> { Ok(exp_integral(c, quad_tol)? - 1.0) };

    let (mut lo, mut hi) = (0.5, 1.5);
    let (flo, fhi) = (residual(lo)?, residual(hi)?);
    if flo > 0.0 || fhi < 0.0 {
        return Err(Error::BracketFailure {
            what: "companion constant",
            lo,
            hi,
        });
    }
    let mut c = 0.5 * (lo + hi);
    for _ in 0..200 {
        c = 0.5 * (lo + hi);
        let f = residual(c)?;
        if f.abs() < tol && hi - lo < 1e-12 {
            break;
        }
        if f < 0.0 {
            lo = c;
        } else {
            hi = c;
        }
    }

    let tail = decay_tail(c, quad_tol)?;
    let gamma = (-c).exp() + (c.exp() - 1.0 - c) * tail;
    Ok(GammaResult { c, gamma })
}
