use thiserror::Error;

/// Errors shared by every module in the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Instance values must be pairwise distinct; every guarantee in this
    /// crate assumes a strict total order on values.
    #[error("tied values at indices {first} and {second}: {value}")]
    TiedValues {
        first: usize,
        second: usize,
        value: f64,
    },

    /// The presentation order is not a permutation of 0..n.
    #[error("order is not a permutation of 0..{n}")]
    InvalidOrder { n: usize },

    /// A probability argument fell outside its admissible range.
    #[error("probability {p} outside {context}")]
    InvalidProbability { p: f64, context: &'static str },

    /// Mismatched input dimensions.
    #[error("size mismatch: {context} (expected {expected}, got {got})")]
    SizeMismatch {
        context: &'static str,
        expected: usize,
        got: usize,
    },

    /// An iterative numerical routine failed to reach its tolerance.
    #[error("no convergence in {what} (index {index}, residual {residual:.3e})")]
    NoConvergence {
        what: &'static str,
        index: usize,
        residual: f64,
    },

    /// Root bracketing failed before the iteration could start.
    #[error("bracket [{lo}, {hi}] does not enclose a root of {what}")]
    BracketFailure { what: &'static str, lo: f64, hi: f64 },

    /// A threshold sequence is too short for the requested computation.
    #[error("threshold sequence has {have} terms but {needed} are required")]
    TooFewThresholds { needed: usize, have: usize },

    /// Exhaustive enumeration was requested beyond its hard size cap.
    #[error("size {n} exceeds the exhaustive-enumeration cap {cap}")]
    SizeCapExceeded { n: usize, cap: usize },

    /// An operation on bit instances requires at least one zero bit.
    #[error("instance {instance} has no zero; {context}")]
    NoZero {
        instance: String,
        context: &'static str,
    },

    /// A window-strategy local operator was applied to an ineligible node.
    #[error("{operator} rejected on {node}: {reason}")]
    LocalOperator {
        operator: &'static str,
        node: String,
        reason: String,
    },

    /// A node lies outside the strategy window, or the window is malformed.
    #[error("invalid window use: {0}")]
    InvalidWindow(String),

    /// A non-decreasing position rule was required.
    #[error("rule is not non-decreasing at position {position}")]
    NotNonDecreasing { position: usize },

    /// Instance-file parsing failed.
    #[error("instance file, line {line}: {reason}")]
    Parse { line: usize, reason: String },

    /// An unknown policy name reached the simulation harness.
    #[error("unknown policy: {0}")]
    UnknownPolicy(String),
}

pub type Result<T> = std::result::Result<T, Error>;
