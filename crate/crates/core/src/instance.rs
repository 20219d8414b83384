//! Ground-truth data model: instances, sampling outcomes, arrival times,
//! and the ordinal (rank-only) view consumed by every policy.

use std::io::BufRead;
use std::path::Path;

use rand::Rng;

use crate::rng::{self, Domain};
use crate::{Error, Result};

/// An ordered list of pairwise distinct real values together with an
/// adversarial presentation order. All policies in this crate are ordinal,
/// so only the relative order of `values` ever matters.
#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    values: Vec<f64>,
    /// Permutation of `0..n`; `order[t]` is the element presented at step `t`.
    order: Vec<usize>,
}

impl Instance {
    /// Builds an instance presented in the given order. Tied values are
    /// rejected rather than perturbed: every guarantee assumes a strict
    /// order, and silent perturbation would hide caller bugs.
    pub fn with_order(values: Vec<f64>, order: Vec<usize>) -> Result<Self> {
        check_distinct(&values)?;
        let n = values.len();
        if order.len() != n {
            return Err(Error::InvalidOrder { n });
        }
        let mut seen = vec![false; n];
        for &i in &order {
            if i >= n || seen[i] {
                return Err(Error::InvalidOrder { n });
            }
            seen[i] = true;
        }
        Ok(Self { values, order })
    }

    /// Identity presentation order (element `i` arrives at step `i`).
    pub fn new(values: Vec<f64>) -> Result<Self> {
        let order = (0..values.len()).collect();
        Self::with_order(values, order)
    }

    /// Reads one decimal value per line; `#` starts a comment line and
    /// blank lines are skipped. Presentation order is file order.
    pub fn from_reader<R: BufRead>(reader: R) -> Result<Self> {
        let mut values = Vec::new();
        for (lineno, line) in reader.lines().enumerate() {
            let line = line.map_err(|e| Error::Parse {
                line: lineno + 1,
                reason: e.to_string(),
            })?;
            let trimmed = line.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let v: f64 = trimmed.parse().map_err(|_| Error::Parse {
                line: lineno + 1,
                reason: format!("not a decimal value: {trimmed:?}"),
            })?;
            if !v.is_finite() {
                return Err(Error::Parse {
                    line: lineno + 1,
                    reason: "value must be finite".into(),
                });
            }
            values.push(v);
        }
        Self::new(values)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let file = std::fs::File::open(path).map_err(|e| Error::Parse {
            line: 0,
            reason: format!("{}: {e}", path.display()),
        })?;
        Self::from_reader(std::io::BufReader::new(file))
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn order(&self) -> &[usize] {
        &self.order
    }

    pub fn value(&self, element: usize) -> f64 {
        self.values[element]
    }
}

fn check_distinct(values: &[f64]) -> Result<()> {
    let mut idx: Vec<usize> = (0..values.len()).collect();
    idx.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    for w in idx.windows(2) {
        if values[w[0]] == values[w[1]] {
            return Err(Error::TiedValues {
                first: w[0].min(w[1]),
                second: w[0].max(w[1]),
                value: values[w[0]],
            });
        }
    }
    Ok(())
}

/// The S/V partition of one sampling outcome: bit `i` set means element
/// `i` was sampled into the history set S.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SamplingOutcome {
    n: usize,
    sample_mask: Vec<bool>,
}

impl SamplingOutcome {
    pub fn from_mask(sample_mask: Vec<bool>) -> Self {
        Self {
            n: sample_mask.len(),
            sample_mask,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn is_sampled(&self, element: usize) -> bool {
        self.sample_mask[element]
    }

    pub fn mask(&self) -> &[bool] {
        &self.sample_mask
    }

    /// |S|
    pub fn sample_count(&self) -> usize {
        self.sample_mask.iter().filter(|&&b| b).count()
    }

    /// |V| = n - |S|
    pub fn online_count(&self) -> usize {
        self.n - self.sample_count()
    }
}

/// Independently samples each element with probability `p`. Element `i`'s
/// decision comes from its own `(seed, Element, i)` stream, so each bit is
/// a pure function of `(seed, p, i)` no matter how the call is scheduled.
pub fn sample(instance: &Instance, p: f64, seed: u64) -> Result<SamplingOutcome> {
    check_probability(p, "[0, 1]")?;
    let mask = (0..instance.len())
        .map(|i| rng::unit_uniform(seed, Domain::Element, i as u64) < p)
        .collect();
    Ok(SamplingOutcome::from_mask(mask))
}

/// Uniform arrival times on [0, 1]; element `i` is sampled exactly when
/// `times[i] < p`. Ties between times have probability zero; a realized
/// tie rejects the whole draw and redraws, keeping the uniform-random
/// order semantics exact.
#[derive(Debug, Clone, PartialEq)]
pub struct ArrivalRealization {
    times: Vec<f64>,
    p: f64,
}

impl ArrivalRealization {
    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn n(&self) -> usize {
        self.times.len()
    }

    pub fn is_sampled(&self, element: usize) -> bool {
        self.times[element] < self.p
    }

    /// The induced S/V partition, consistent with [`SamplingOutcome`].
    pub fn outcome(&self) -> SamplingOutcome {
        SamplingOutcome::from_mask((0..self.n()).map(|i| self.is_sampled(i)).collect())
    }

    /// Element indices in arrival-time order.
    pub fn arrival_order(&self) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.n()).collect();
        order.sort_by(|&a, &b| self.times[a].total_cmp(&self.times[b]));
        order
    }
}

impl ArrivalRealization {
    /// Wraps explicit times (all in [0, 1], no ties).
    pub fn fixed(times: Vec<f64>, p: f64) -> Result<Self> {
        check_probability(p, "[0, 1]")?;
        if times.iter().any(|t| !(0.0..=1.0).contains(t)) {
            return Err(Error::InvalidProbability {
                p: f64::NAN,
                context: "[0, 1]",
            });
        }
        let mut sorted = times.clone();
        sorted.sort_by(f64::total_cmp);
        for w in sorted.windows(2) {
            if w[0] == w[1] {
                return Err(Error::TiedValues {
                    first: 0,
                    second: 0,
                    value: w[0],
                });
            }
        }
        Ok(Self { times, p })
    }

    /// Couples a discrete sampling outcome back into the arrival-time
    /// model: sampled elements get uniform times in [0, p), online ones
    /// in [p, 1), so the induced partition reproduces the outcome and
    /// the online order is uniformly random.
    pub fn from_outcome<R: Rng>(outcome: &SamplingOutcome, p: f64, rng: &mut R) -> Self {
        loop {
            let times: Vec<f64> = (0..outcome.n())
                .map(|i| {
                    if outcome.is_sampled(i) {
                        rng.gen::<f64>() * p
                    } else {
                        p + rng.gen::<f64>() * (1.0 - p)
                    }
                })
                .collect();
            let mut sorted = times.clone();
            sorted.sort_by(f64::total_cmp);
            if sorted.windows(2).all(|w| w[0] != w[1]) {
                return Self { times, p };
            }
        }
    }
}

/// Draws `n` i.i.d. uniform arrival times from the `(seed, Arrival, 0)`
/// stream, redrawing on the null event of a tie.
pub fn draw_arrivals(n: usize, p: f64, seed: u64) -> Result<ArrivalRealization> {
    check_probability(p, "[0, 1]")?;
    let mut rng = rng::stream(seed, Domain::Arrival, 0);
    Ok(draw_arrivals_with(n, p, &mut rng))
}

/// Same draw fed from a caller-owned stream (used by the trial harness so
/// each trial stays on its own stream).
pub fn draw_arrivals_with<R: Rng>(n: usize, p: f64, rng: &mut R) -> ArrivalRealization {
    loop {
        let times: Vec<f64> = (0..n).map(|_| rng.gen::<f64>()).collect();
        let mut sorted = times.clone();
        sorted.sort_by(f64::total_cmp);
        if sorted.windows(2).all(|w| w[0] != w[1]) {
            return ArrivalRealization { times, p };
        }
    }
}

/// The ordinal view of one revealed online element.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RankView {
    /// Step index counting everything seen so far: the |S| samples plus
    /// the online elements revealed up to and including this one.
    pub position: usize,
    /// Whether this value is the largest online value seen so far.
    pub online_rank_best: bool,
    /// Rank of this value among all values seen so far (1 = largest).
    pub overall_rank: usize,
}

/// Materializes the rank stream a policy sees: samples are revealed up
/// front as history, then the online elements of `arrival_order` one by
/// one. One `RankView` per online element, from strict comparisons only.
///
/// `arrival_order` must be a permutation of the elements; sampled elements
/// may appear anywhere in it (they are skipped as already-revealed
/// history), online elements are processed in the order given.
pub fn rank_stream(
    instance: &Instance,
    outcome: &SamplingOutcome,
    arrival_order: &[usize],
) -> Result<Vec<RankView>> {
    let n = instance.len();
    if outcome.n() != n {
        return Err(Error::SizeMismatch {
            context: "sampling outcome vs instance",
            expected: n,
            got: outcome.n(),
        });
    }
    let mut seen = vec![false; n];
    for &i in arrival_order {
        if i >= n || seen[i] {
            return Err(Error::InvalidOrder { n });
        }
        seen[i] = true;
    }
    if arrival_order.len() != n {
        return Err(Error::InvalidOrder { n });
    }

    let mut seen_values: Vec<f64> = (0..n)
        .filter(|&i| outcome.is_sampled(i))
        .map(|i| instance.value(i))
        .collect();
    let mut best_online: Option<f64> = None;
    let mut views = Vec::with_capacity(outcome.online_count());

    for &element in arrival_order {
        if outcome.is_sampled(element) {
            continue;
        }
        let v = instance.value(element);
        if seen_values.iter().any(|&s| s == v) {
            return Err(Error::TiedValues {
                first: element,
                second: element,
                value: v,
            });
        }
        let larger = seen_values.iter().filter(|&&s| s > v).count();
        let online_rank_best = best_online.map_or(true, |b| v > b);
        if online_rank_best {
            best_online = Some(v);
        }
        seen_values.push(v);
        views.push(RankView {
            position: seen_values.len(),
            online_rank_best,
            overall_rank: larger + 1,
        });
    }
    Ok(views)
}

pub(crate) fn check_probability(p: f64, context: &'static str) -> Result<()> {
    let ok = match context {
        "[0, 1]" => (0.0..=1.0).contains(&p),
        "[0, 1)" => (0.0..1.0).contains(&p),
        _ => unreachable!("unknown probability range {context}"),
    };
    if ok && p.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidProbability { p, context })
    }
}
