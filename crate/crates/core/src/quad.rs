//! Gauss-Legendre quadrature with panel-doubling refinement.

use crate::{Error, Result};

/// Nodes and weights of an `n`-point Gauss-Legendre rule on [-1, 1].
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    /// Computes the rule by Newton iteration on the Legendre polynomial,
    /// seeded with the Chebyshev-angle approximation to its roots.
    pub fn new(order: usize) -> Self {
        assert!(order >= 1, "quadrature order must be positive");
        let n = order;
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        for i in 0..n.div_ceil(2) {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-15 {
                    break;
                }
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            weights[i] = w;
            nodes[n - 1 - i] = x;
            weights[n - 1 - i] = w;
        }
        Self { nodes, weights }
    }

    /// ∫_a^b f(t) dt with this rule on a single panel.
    pub fn integrate<F: Fn(f64) -> f64>(&self, a: f64, b: f64, f: &F) -> f64 {
        let mid = 0.5 * (a + b);
        let half = 0.5 * (b - a);
        let mut sum = 0.0;
        for (&x, &w) in self.nodes.iter().zip(&self.weights) {
            sum += w * f(mid + half * x);
        }
        sum * half
    }

    /// Composite rule over `panels` equal panels.
    pub fn integrate_panels<F: Fn(f64) -> f64>(&self, a: f64, b: f64, panels: usize, f: &F) -> f64 {
        let h = (b - a) / panels as f64;
        let mut sum = 0.0;
        for k in 0..panels {
            sum += self.integrate(a + k as f64 * h, a + (k + 1) as f64 * h, f);
        }
        sum
    }
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Integrates `f` on [a, b] by doubling the panel count of a fixed-order
/// rule until two successive refinements agree to `tol`.
pub fn integrate_adaptive<F: Fn(f64) -> f64>(
    a: f64,
    b: f64,
    tol: f64,
    what: &'static str,
    f: F,
) -> Result<f64> {
    const MAX_DOUBLINGS: usize = 16;
    if a == b {
        return Ok(0.0);
    }
    let rule = GaussLegendre::new(16);
    let mut panels = 1;
    let mut prev = rule.integrate_panels(a, b, panels, &f);
    for _ in 0..MAX_DOUBLINGS {
        panels *= 2;
        let next = rule.integrate_panels(a, b, panels, &f);
        let err = (next - prev).abs();
        if err <= tol * (1.0 + next.abs()) {
            return Ok(next);
        }
        prev = next;
    }
    Err(Error::NoConvergence {
        what,
        index: panels,
        residual: f64::NAN,
    })
}
