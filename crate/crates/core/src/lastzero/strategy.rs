//! Window strategies over the conflict graph: which instances a player
//! wins at each size of a finite window, with removed descendants
//! materialized eagerly so validity checks are O(1) per node.

use rand::Rng;

use super::{children, degree, node_weight, parent, BitInstance, MAX_LEN};
use crate::aos::kmax_k;
use crate::rng::{self, Domain};
use crate::{Error, Result};

/// Dense bitset over the 2^len instances of one size.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NodeSet {
    len_bits: usize,
    blocks: Vec<u64>,
}

impl NodeSet {
    pub fn new(len_bits: usize) -> Self {
        let words = (1usize << len_bits).div_ceil(64);
        Self {
            len_bits,
            blocks: vec![0; words],
        }
    }

    pub fn insert(&mut self, bits: u32) {
        self.blocks[(bits / 64) as usize] |= 1u64 << (bits % 64);
    }

    pub fn remove(&mut self, bits: u32) {
        self.blocks[(bits / 64) as usize] &= !(1u64 << (bits % 64));
    }

    pub fn contains(&self, bits: u32) -> bool {
        self.blocks[(bits / 64) as usize] >> (bits % 64) & 1 == 1
    }

    pub fn count(&self) -> usize {
        self.blocks.iter().map(|b| b.count_ones() as usize).sum()
    }

    /// Set members as instances of this size, ascending by encoding.
    pub fn iter(&self) -> impl Iterator<Item = BitInstance> + '_ {
        let len = self.len_bits as u8;
        self.blocks.iter().enumerate().flat_map(move |(w, &block)| {
            let mut rem = block;
            std::iter::from_fn(move || {
                if rem == 0 {
                    return None;
                }
                let tz = rem.trailing_zeros();
                rem &= rem - 1;
                Some(BitInstance {
                    bits: (w as u32) * 64 + tz,
                    len,
                })
            })
        })
    }

    pub fn weight(&self, p: f64) -> f64 {
        self.iter().map(|i| node_weight(&i, p)).sum()
    }
}

/// Which local operator to apply to a node of a window strategy.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LocalOp {
    /// Deselect a selected high-degree node and select all its children.
    Split,
    /// Select an untouched low-degree node and remove all its descendants.
    Fill,
}

/// Per-size selected and removed node sets over a window of sizes.
///
/// Invariant: `removed(s)` is exactly the set of within-window descendants
/// of selected nodes of smaller sizes (plus any conflict history inherited
/// at the first size), and no instance is both selected and removed.
#[derive(Debug, Clone, PartialEq)]
pub struct WindowStrategy {
    start: usize,
    end: usize,
    selected: Vec<NodeSet>,
    removed: Vec<NodeSet>,
}

impl WindowStrategy {
    /// An empty strategy on the inclusive window `[start, end]`.
    pub fn empty(start: usize, end: usize) -> Result<Self> {
        if start == 0 || start > end || end > MAX_LEN {
            return Err(Error::InvalidWindow(format!(
                "window [{start}, {end}] must satisfy 1 <= start <= end <= {MAX_LEN}"
            )));
        }
        let selected = (start..=end).map(NodeSet::new).collect();
        let removed = (start..=end).map(NodeSet::new).collect();
        Ok(Self {
            start,
            end,
            selected,
            removed,
        })
    }

    pub fn start(&self) -> usize {
        self.start
    }

    pub fn end(&self) -> usize {
        self.end
    }

    pub fn sizes(&self) -> impl Iterator<Item = usize> {
        self.start..=self.end
    }

    fn idx(&self, size: usize) -> Result<usize> {
        if size < self.start || size > self.end {
            return Err(Error::InvalidWindow(format!(
                "size {size} outside window [{}, {}]",
                self.start, self.end
            )));
        }
        Ok(size - self.start)
    }

    pub fn selected(&self, size: usize) -> Result<&NodeSet> {
        Ok(&self.selected[self.idx(size)?])
    }

    pub fn removed(&self, size: usize) -> Result<&NodeSet> {
        Ok(&self.removed[self.idx(size)?])
    }

    pub fn is_selected(&self, node: &BitInstance) -> bool {
        self.idx(node.len())
            .map(|i| self.selected[i].contains(node.bits))
            .unwrap_or(false)
    }

    pub fn is_removed(&self, node: &BitInstance) -> bool {
        self.idx(node.len())
            .map(|i| self.removed[i].contains(node.bits))
            .unwrap_or(false)
    }

    /// Sum of selected-node weights at one size.
    pub fn performance(&self, size: usize, p: f64) -> Result<f64> {
        Ok(self.selected(size)?.weight(p))
    }

    /// Sum of selected-or-removed weights at one size.
    pub fn cover_ratio(&self, size: usize, p: f64) -> Result<f64> {
        Ok(self.selected(size)?.weight(p) + self.removed(size)?.weight(p))
    }

    /// Mean per-size performance over the whole window.
    pub fn average_performance(&self, p: f64) -> f64 {
        let total: f64 = self
            .sizes()
            .map(|s| self.performance(s, p).expect("size in window"))
            .sum();
        total / (self.end - self.start + 1) as f64
    }

    /// Recomputes `removed` for sizes after `from` out of the selected
    /// sets (and the removal state at `from` itself, which may encode
    /// pre-window history).
    fn propagate_removed(&mut self, from: usize) {
        for s in from..self.end {
            let i = s - self.start;
            let mut next = NodeSet::new(s + 1);
            for node in self.selected[i].iter().chain(self.removed[i].iter()) {
                for child in children(&node) {
                    next.insert(child.bits);
                }
            }
            self.removed[i + 1] = next;
        }
    }

    /// Checks the structural invariants: removal propagation is
    /// consistent and no selected node is removed.
    pub fn validate(&self) -> Result<()> {
        let mut check = self.clone();
        check.propagate_removed(self.start);
        if check.removed != self.removed {
            return Err(Error::InvalidWindow(
                "removed sets are not the descendants of the selected sets".into(),
            ));
        }
        for s in self.sizes() {
            let i = s - self.start;
            for node in self.selected[i].iter() {
                if self.removed[i].contains(node.bits) {
                    return Err(Error::InvalidWindow(format!(
                        "{node} is both selected and removed"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Exhaustive validity in the conflict-graph sense: no selected node
    /// has a selected ancestor inside the window.
    pub fn validate_paths(&self) -> Result<()> {
        for s in self.sizes() {
            let i = s - self.start;
            for node in self.selected[i].iter() {
                let mut cur = node;
                while let Some(up) = parent(&cur) {
                    if up.len() < self.start {
                        break;
                    }
                    if self.is_selected(&up) {
                        return Err(Error::InvalidWindow(format!(
                            "{up} and {node} are both selected on a monotone path"
                        )));
                    }
                    cur = up;
                }
            }
        }
        Ok(())
    }

    /// Applies a local operator, returning the modified strategy.
    ///
    /// `Split` requires a selected node of degree above `1/(1-p)` at a
    /// size below the window end; `Fill` requires an untouched node of
    /// degree in `1..=⌊1/(1-p)⌋`. Either move keeps the strategy valid
    /// and never lowers the window-average performance.
    pub fn apply_local_operator(
        &self,
        node: &BitInstance,
        op: LocalOp,
        p: f64,
    ) -> Result<WindowStrategy> {
        let k = kmax_k(p)?;
        let d = degree(node);
        let size = node.len();
        let mut out = self.clone();
        let i = out.idx(size)?;
        match op {
            LocalOp::Split => {
                if size >= self.end {
                    return Err(Error::LocalOperator {
                        operator: "split",
                        node: node.to_string(),
                        reason: format!("size {size} is the window end {}", self.end),
                    });
                }
                if !self.is_selected(node) {
                    return Err(Error::LocalOperator {
                        operator: "split",
                        node: node.to_string(),
                        reason: "node is not selected".into(),
                    });
                }
                if d <= k {
                    return Err(Error::LocalOperator {
                        operator: "split",
                        node: node.to_string(),
                        reason: format!("degree {d} does not exceed 1/(1-p) ≈ {k}"),
                    });
                }
                out.selected[i].remove(node.bits);
                out.propagate_removed(size);
                for child in children(node) {
                    out.selected[i + 1].insert(child.bits);
                }
                out.propagate_removed(size + 1);
            }
            LocalOp::Fill => {
                if d == 0 || d > k {
                    return Err(Error::LocalOperator {
                        operator: "fill",
                        node: node.to_string(),
                        reason: format!("degree {d} outside 1..=⌊1/(1-p)⌋ = {k}"),
                    });
                }
                if self.is_selected(node) || self.is_removed(node) {
                    return Err(Error::LocalOperator {
                        operator: "fill",
                        node: node.to_string(),
                        reason: "node is already selected or removed".into(),
                    });
                }
                out.selected[i].insert(node.bits);
                // All descendants become removed; any that were selected
                // are deselected.
                out.propagate_removed(size);
                for s in size + 1..=self.end {
                    let j = s - self.start;
                    let removed = out.removed[j].clone();
                    for victim in out.selected[j].iter().collect::<Vec<_>>() {
                        if removed.contains(victim.bits) {
                            out.selected[j].remove(victim.bits);
                        }
                    }
                    out.propagate_removed(s);
                }
            }
        }
        debug_assert!(out.validate().is_ok());
        Ok(out)
    }
}

/// Those instances of size `s` that the tuned k-max player wins: for
/// `s <= k`, the strings with exactly one zero; for larger sizes, the
/// strings whose position `s-k` is a one and whose last `k` positions
/// contain exactly one zero.
fn kmax_win(bits: u32, s: usize, k: usize) -> bool {
    let zeros_total = s as u32 - bits.count_ones();
    if s <= k {
        return zeros_total == 1;
    }
    let top = bits >> (s - k);
    let top_zeros = k as u32 - top.count_ones();
    bits >> (s - k - 1) & 1 == 1 && top_zeros == 1
}

/// The window strategy traced by the k-max player. The conflict history
/// of sizes below the window start is accounted for: `removed` at the
/// first size already contains the descendants of all earlier wins.
pub fn kmax_selection(window: (usize, usize), k: usize) -> Result<WindowStrategy> {
    if k == 0 {
        return Err(Error::InvalidWindow("k must be at least 1".into()));
    }
    let (start, end) = window;
    let mut strategy = WindowStrategy::empty(start, end)?;

    // Trace the win sets from size 1 so removals reaching the window are
    // exact. Win sets never collide with removals: the player cannot win
    // on two conflicting instances.
    let mut removed = NodeSet::new(1);
    for s in 1..=end {
        let mut wins = NodeSet::new(s);
        for bits in 0..1u32 << s {
            if kmax_win(bits, s, k) {
                debug_assert!(!removed.contains(bits), "win set hit a removed node");
                wins.insert(bits);
            }
        }
        if s >= start {
            let i = s - start;
            strategy.selected[i] = wins.clone();
            strategy.removed[i] = removed.clone();
        }
        if s < end {
            let mut next = NodeSet::new(s + 1);
            for node in wins.iter().chain(removed.iter()) {
                for child in children(&node) {
                    next.insert(child.bits);
                }
            }
            removed = next;
        }
    }
    debug_assert!(strategy.validate().is_ok());
    Ok(strategy)
}

/// The fill-in strategy on a fresh window: at every size but the last,
/// select all non-removed instances of degree up to `⌊1/(1-p)⌋`; at the
/// last size, select every non-removed instance that has a zero.
pub fn fill_in(window: (usize, usize), p: f64) -> Result<WindowStrategy> {
    let k = kmax_k(p)?;
    let (start, end) = window;
    let mut strategy = WindowStrategy::empty(start, end)?;
    for s in start..=end {
        let i = s - start;
        for bits in 0..1u32 << s {
            if strategy.removed[i].contains(bits) {
                continue;
            }
            let node = BitInstance { bits, len: s as u8 };
            let d = degree(&node);
            let eligible = if s < end { d >= 1 && d <= k } else { d >= 1 };
            if eligible {
                strategy.selected[i].insert(bits);
            }
        }
        if s < end {
            strategy.propagate_removed(s);
        }
    }
    debug_assert!(strategy.validate().is_ok());
    Ok(strategy)
}

/// A random valid strategy: size by size, each non-removed instance with
/// a zero is selected independently with probability 1/2 from the
/// `(seed, Generator, index)` stream.
pub fn random_valid_strategy(window: (usize, usize), seed: u64, index: u64) -> Result<WindowStrategy> {
    let (start, end) = window;
    let mut strategy = WindowStrategy::empty(start, end)?;
    let mut stream = rng::stream(seed, Domain::Generator, index);
    for s in start..=end {
        let i = s - start;
        for bits in 0..1u32 << s {
            let node = BitInstance { bits, len: s as u8 };
            if degree(&node) == 0 || strategy.removed[i].contains(bits) {
                continue;
            }
            if stream.gen::<bool>() {
                strategy.selected[i].insert(bits);
            }
        }
        if s < end {
            strategy.propagate_removed(s);
        }
    }
    Ok(strategy)
}
