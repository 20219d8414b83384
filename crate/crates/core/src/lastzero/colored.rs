//! Node weights for the colored variant of the last-zero game, where the
//! first `m` positions are red, the remaining `n - m` blue, and the
//! player (who knows `n` and both one-counts) aims for the last red zero.
//! Only the red bits matter positionally; blue bits enter through their
//! one-count, so a node is a pair (red string, blue one-count).

use super::BitInstance;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ColoredNode {
    /// The red prefix, length `m`.
    pub red_bits: BitInstance,
    /// Number of ones among the blue positions.
    pub blue_ones: usize,
    /// Total sequence length.
    pub n: usize,
}

impl ColoredNode {
    pub fn new(red_bits: BitInstance, blue_ones: usize, n: usize) -> Result<Self> {
        let m = red_bits.len();
        if m > n || blue_ones > n - m {
            return Err(Error::InvalidWindow(format!(
                "colored node needs m <= n and b <= n - m (m={m}, b={blue_ones}, n={n})"
            )));
        }
        Ok(Self {
            red_bits,
            blue_ones,
            n,
        })
    }

    pub fn m(&self) -> usize {
        self.red_bits.len()
    }
}

/// `p^{r+b} (1-p)^{n-r-b} C(n-m, b)` with `r` the number of red ones: the
/// probability mass of all length-`n` sequences with this red prefix and
/// `b` blue ones.
pub fn colored_weight(node: &ColoredNode, p: f64) -> f64 {
    let r = node.red_bits.norm();
    let b = node.blue_ones;
    let m = node.m();
    let free = node.n - m;
    p.powi((r + b) as i32)
        * (1.0 - p).powi((node.n - r - b) as i32)
        * binomial(free, b)
}

/// Weight ratio of a child (red prefix grown by one inserted zero) to its
/// parent: `(n - m - b) / (n - m)`.
pub fn colored_weight_ratio(node: &ColoredNode) -> Result<f64> {
    let m = node.m();
    if m >= node.n {
        return Err(Error::InvalidWindow(
            "child would exceed the total size".into(),
        ));
    }
    Ok((node.n - m - node.blue_ones) as f64 / (node.n - m) as f64)
}

fn binomial(n: usize, k: usize) -> f64 {
    let k = k.min(n - k);
    let mut c = 1.0;
    for j in 0..k {
        c = c * (n - j) as f64 / (j + 1) as f64;
    }
    c
}
