//! Finite-window conflict-graph engine for the last-zero game.
//!
//! An instance is a finite 0/1 string; the player sees the total number of
//! ones, then the bits one by one, and wins by stopping on the last zero.
//! Two instances of the same norm whose bits agree up to the last zero of
//! the smaller are *in conflict*: no deterministic player can win both.
//! The conflict graph links conflicting instances of consecutive sizes,
//! and window strategies over it certify what any policy can achieve.

mod colored;
mod simulate;
mod strategy;

pub use colored::{colored_weight, colored_weight_ratio, ColoredNode};
pub use simulate::{kmax_stop_rule, last_zero_win_rate, simulate_last_zero, LastZeroView};
pub use strategy::{
    fill_in, kmax_selection, random_valid_strategy, LocalOp, NodeSet, WindowStrategy,
};

use std::fmt;
use std::io::Write;

use crate::{Error, Result};

/// Hard cap on exhaustive conflict-graph work: 2^24 node encodings fit
/// comfortably in memory, larger sizes are simulation-only.
pub const MAX_LEN: usize = 24;

/// A finite bitstring of length `1..=MAX_LEN`, bit positions counted from
/// 1 in presentation order (position 1 is stored in the lowest bit).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitInstance {
    bits: u32,
    len: u8,
}

impl BitInstance {
    pub fn new(bits: u32, len: usize) -> Result<Self> {
        if len == 0 || len > MAX_LEN {
            return Err(Error::SizeCapExceeded { n: len, cap: MAX_LEN });
        }
        debug_assert!(len == 32 || bits >> len == 0, "stray bits beyond len");
        Ok(Self {
            bits: bits & mask(len),
            len: len as u8,
        })
    }

    pub fn from_str_bits(s: &str) -> Result<Self> {
        let mut bits = 0u32;
        let mut len = 0usize;
        for (i, ch) in s.chars().enumerate() {
            match ch {
                '0' => {}
                '1' => bits |= 1 << i,
                _ => {
                    return Err(Error::Parse {
                        line: 0,
                        reason: format!("invalid bit character {ch:?}"),
                    })
                }
            }
            len += 1;
        }
        Self::new(bits, len)
    }

    pub fn len(&self) -> usize {
        self.len as usize
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    /// Bit at 1-based position `q`.
    pub fn bit(&self, q: usize) -> bool {
        debug_assert!(q >= 1 && q <= self.len());
        self.bits >> (q - 1) & 1 == 1
    }

    /// Number of ones.
    pub fn norm(&self) -> usize {
        self.bits.count_ones() as usize
    }

    pub fn zeros(&self) -> usize {
        self.len() - self.norm()
    }

    /// 1-based position of the last zero, if any.
    pub fn last_zero(&self) -> Option<usize> {
        let inv = !self.bits & mask(self.len());
        if inv == 0 {
            None
        } else {
            Some(32 - inv.leading_zeros() as usize)
        }
    }

    /// Equality of the first `r` positions.
    fn prefix_eq(&self, other: &BitInstance, r: usize) -> bool {
        (self.bits ^ other.bits) & mask(r) == 0
    }
}

fn mask(len: usize) -> u32 {
    if len >= 32 {
        u32::MAX
    } else {
        (1u32 << len) - 1
    }
}

impl fmt::Display for BitInstance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for q in 1..=self.len() {
            f.write_str(if self.bit(q) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

/// Conflict test for instances of different sizes: same norm and equal
/// bits up to the last zero of the smaller. Arguments may come in either
/// order; instances without any zero are rejected (conflict undefined).
pub fn in_conflict(i1: &BitInstance, i2: &BitInstance) -> Result<bool> {
    for i in [i1, i2] {
        if i.last_zero().is_none() {
            return Err(Error::NoZero {
                instance: i.to_string(),
                context: "conflict is defined only for instances with a zero",
            });
        }
    }
    let (small, large) = if i1.len() <= i2.len() { (i1, i2) } else { (i2, i1) };
    if small.len() == large.len() {
        return Ok(false);
    }
    let r = small.last_zero().expect("checked above");
    Ok(small.norm() == large.norm() && small.prefix_eq(large, r))
}

/// All size-(n+1) instances in conflict with `i`: one per insertion point
/// of a new zero after the last zero. Empty for all-ones instances.
///
/// Panics if `i` is already at the size cap.
pub fn children(i: &BitInstance) -> Vec<BitInstance> {
    let Some(r) = i.last_zero() else {
        return Vec::new();
    };
    assert!(i.len() < MAX_LEN, "children would exceed the size cap");
    (r + 1..=i.len() + 1)
        .map(|q| BitInstance {
            bits: insert_zero(i.bits, q),
            len: i.len + 1,
        })
        .collect()
}

fn insert_zero(bits: u32, q: usize) -> u32 {
    let low = bits & mask(q - 1);
    let high = (bits >> (q - 1)) << q;
    low | high
}

/// The unique size-(n-1) instance in conflict with `i`, obtained by
/// removing its last zero. `None` when no such neighbor exists in the
/// graph: instances with at most one zero have no parent.
pub fn parent(i: &BitInstance) -> Option<BitInstance> {
    if i.zeros() < 2 {
        return None;
    }
    let r = i.last_zero().expect("has at least two zeros");
    let low = i.bits & mask(r - 1);
    let high = (i.bits >> r) << (r - 1);
    Some(BitInstance {
        bits: low | high,
        len: i.len - 1,
    })
}

/// Number of children: `i+1` for suffix `01^i`, zero for all-ones.
pub fn degree(i: &BitInstance) -> usize {
    match i.last_zero() {
        Some(r) => i.len() - r + 1,
        None => 0,
    }
}

/// `p^norm (1-p)^(n-norm)`: the probability that Bernoulli(p) sampling
/// produces exactly this instance.
pub fn node_weight(i: &BitInstance, p: f64) -> f64 {
    p.powi(i.norm() as i32) * (1.0 - p).powi(i.zeros() as i32)
}

fn check_cap(n: usize) -> Result<()> {
    if n == 0 || n > MAX_LEN {
        Err(Error::SizeCapExceeded { n, cap: MAX_LEN })
    } else {
        Ok(())
    }
}

/// Node counts by degree over all 2^n instances of size `n`
/// (index = degree, `counts[0]` is the lone all-ones instance).
pub fn degree_census(n: usize) -> Result<Vec<u64>> {
    check_cap(n)?;
    let census = crate::exec::fold_chunked(
        1u64 << n,
        crate::exec::DEFAULT_CHUNK,
        || vec![0u64; n + 1],
        |acc, bits| {
            let i = BitInstance {
                bits: bits as u32,
                len: n as u8,
            };
            acc[degree(&i)] += 1;
        },
        |acc, part| {
            for (a, b) in acc.iter_mut().zip(part) {
                *a += b;
            }
        },
    );
    Ok(census)
}

/// Total node weight by degree at size `n` (index = degree).
pub fn weight_census(n: usize, p: f64) -> Result<Vec<f64>> {
    check_cap(n)?;
    let census = crate::exec::fold_chunked(
        1u64 << n,
        crate::exec::DEFAULT_CHUNK,
        || vec![0.0f64; n + 1],
        |acc, bits| {
            let i = BitInstance {
                bits: bits as u32,
                len: n as u8,
            };
            acc[degree(&i)] += node_weight(&i, p);
        },
        |acc, part| {
            for (a, b) in acc.iter_mut().zip(part) {
                *a += b;
            }
        },
    );
    Ok(census)
}

/// `out[i][j]` = total weight of the degree-`j` children (size n+1) of
/// the degree-`i` nodes of size `n`.
pub fn child_weight_census(n: usize, p: f64) -> Result<Vec<Vec<f64>>> {
    check_cap(n + 1)?;
    let census = crate::exec::fold_chunked(
        1u64 << n,
        crate::exec::DEFAULT_CHUNK,
        || vec![vec![0.0f64; n + 2]; n + 1],
        |acc, bits| {
            let i = BitInstance {
                bits: bits as u32,
                len: n as u8,
            };
            let di = degree(&i);
            for child in children(&i) {
                acc[di][degree(&child)] += node_weight(&child, p);
            }
        },
        |acc, part| {
            for (row_a, row_b) in acc.iter_mut().zip(part) {
                for (a, b) in row_a.iter_mut().zip(row_b) {
                    *a += b;
                }
            }
        },
    );
    Ok(census)
}

/// Writes the conflict edges for sizes `n0..n1` as `parent child` lines,
/// instances rendered as 0/1 strings.
pub fn write_edge_list<W: Write>(mut out: W, n0: usize, n1: usize) -> std::io::Result<()> {
    for n in n0..n1 {
        for bits in 0..1u64 << n {
            let node = BitInstance {
                bits: bits as u32,
                len: n as u8,
            };
            for child in children(&node) {
                writeln!(out, "{node} {child}")?;
            }
        }
    }
    Ok(())
}

/// Same edges in DOT format for visualization tools.
pub fn write_dot<W: Write>(mut out: W, n0: usize, n1: usize) -> std::io::Result<()> {
    writeln!(out, "digraph conflict {{")?;
    writeln!(out, "  rankdir=LR;")?;
    for n in n0..n1 {
        for bits in 0..1u64 << n {
            let node = BitInstance {
                bits: bits as u32,
                len: n as u8,
            };
            for child in children(&node) {
                writeln!(out, "  \"{node}\" -> \"{child}\";")?;
            }
        }
    }
    writeln!(out, "}}")
}

/// True when a monotone path of conflict edges connects the two
/// instances. Independent of [`in_conflict`]: walks parent links only.
pub fn monotone_path_connected(i1: &BitInstance, i2: &BitInstance) -> bool {
    let (small, large) = if i1.len() <= i2.len() { (i1, i2) } else { (i2, i1) };
    if small.len() == large.len() {
        return false;
    }
    let mut cur = *large;
    while cur.len() > small.len() {
        match parent(&cur) {
            Some(p) => cur = p,
            None => return false,
        }
    }
    cur == *small
}
