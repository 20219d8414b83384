//! Reproducible Monte Carlo trials and the exact enumeration oracles
//! used to pin every closed-form result in the crate.

mod oracle;

pub use oracle::{oracle_aos_exact, oracle_ros_exact, AosOracle};

use serde::Serialize;

use crate::aos::{kmax_run, kmax_unknown_p_run, KMaxPolicy, StopOutcome};
use crate::instance::{check_probability, draw_arrivals_with, ArrivalRealization, Instance};
use crate::ros::{alg_t_run, online_values_in_time_order, solve_thresholds, ThresholdSequence};
use crate::rng::{self, Domain};
use crate::{exec, Error, Result};

/// How trial instances are produced. Deterministic kinds reuse one
/// instance for every trial; `UniformRandom` draws fresh values from the
/// trial's own stream.
#[derive(Debug, Clone)]
pub enum GeneratorSpec {
    /// Values 1..=n presented in increasing order (the adversarial worst
    /// case for threshold policies).
    Increasing { n: usize },
    /// Strictly increasing positive values for the first `drop_point`
    /// elements, then arbitrary negative values: the reduction instance
    /// for players who know the total size.
    IncreasingThenDrop { n: usize, drop_point: usize },
    /// Fresh i.i.d. uniform values each trial.
    UniformRandom { n: usize },
    /// A fixed instance, e.g. parsed from a file.
    Fixed { instance: Instance },
}

impl GeneratorSpec {
    pub fn n(&self) -> usize {
        match self {
            GeneratorSpec::Increasing { n }
            | GeneratorSpec::IncreasingThenDrop { n, .. }
            | GeneratorSpec::UniformRandom { n } => *n,
            GeneratorSpec::Fixed { instance } => instance.len(),
        }
    }

    pub fn label(&self) -> String {
        match self {
            GeneratorSpec::Increasing { .. } => "increasing".into(),
            GeneratorSpec::IncreasingThenDrop { drop_point, .. } => {
                format!("increasing-then-drop({drop_point})")
            }
            GeneratorSpec::UniformRandom { .. } => "uniform-random".into(),
            GeneratorSpec::Fixed { .. } => "from-file".into(),
        }
    }

    fn validate(&self) -> Result<()> {
        match self {
            GeneratorSpec::IncreasingThenDrop { n, drop_point } => {
                if *drop_point == 0 || drop_point > n {
                    return Err(Error::SizeMismatch {
                        context: "drop point outside 1..=n",
                        expected: *n,
                        got: *drop_point,
                    });
                }
            }
            GeneratorSpec::Increasing { n } | GeneratorSpec::UniformRandom { n } => {
                if *n == 0 {
                    return Err(Error::SizeMismatch {
                        context: "generator size",
                        expected: 1,
                        got: 0,
                    });
                }
            }
            GeneratorSpec::Fixed { .. } => {}
        }
        Ok(())
    }

    /// The instance shared by all trials, unless values are per-trial.
    fn fixed_instance(&self) -> Result<Option<Instance>> {
        Ok(match self {
            GeneratorSpec::Increasing { n } => {
                Some(Instance::new((1..=*n).map(|v| v as f64).collect())?)
            }
            GeneratorSpec::IncreasingThenDrop { n, drop_point } => {
                let m = *drop_point;
                let values = (1..=m)
                    .map(|v| v as f64)
                    .chain((1..=*n - m).map(|v| -(v as f64)))
                    .collect();
                Some(Instance::new(values)?)
            }
            GeneratorSpec::UniformRandom { .. } => None,
            GeneratorSpec::Fixed { instance } => Some(instance.clone()),
        })
    }

    fn draw_instance<R: rand::Rng>(&self, rng: &mut R) -> Instance {
        let n = self.n();
        loop {
            let values: Vec<f64> = (0..n).map(|_| rng.gen::<f64>()).collect();
            if let Ok(inst) = Instance::new(values) {
                return inst;
            }
        }
    }
}

/// The stopping policies the harness knows by name.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PolicySpec {
    /// Threshold at the k-th largest sample; `k = None` derives it from p.
    KMax { k: Option<usize> },
    /// Known n, unknown p: `k = ⌊n/(n-h)⌋` from the realized sample count.
    KMaxUnknownP,
    /// The time-threshold policy on the universal sequence.
    AlgT,
    /// Accept the first online value regardless of rank.
    AcceptFirst,
}

impl PolicySpec {
    pub fn parse(name: &str) -> Result<Self> {
        match name {
            "k-max" => Ok(PolicySpec::KMax { k: None }),
            "k-max-unknown-p" => Ok(PolicySpec::KMaxUnknownP),
            "alg-t" => Ok(PolicySpec::AlgT),
            "accept-first" => Ok(PolicySpec::AcceptFirst),
            other => Err(Error::UnknownPolicy(other.into())),
        }
    }

    pub fn label(&self) -> String {
        match self {
            PolicySpec::KMax { k: None } => "k-max".into(),
            PolicySpec::KMax { k: Some(k) } => format!("k-max(k={k})"),
            PolicySpec::KMaxUnknownP => "k-max-unknown-p".into(),
            PolicySpec::AlgT => "alg-t".into(),
            PolicySpec::AcceptFirst => "accept-first".into(),
        }
    }

    /// Runs the policy on an ordinal (samples, online) split; the online
    /// values are in presentation order.
    pub(crate) fn run_ordinal(
        &self,
        n: usize,
        samples: &[f64],
        online: &[f64],
    ) -> Result<StopOutcome> {
        match self {
            PolicySpec::KMax { k: Some(k) } => {
                Ok(kmax_run(KMaxPolicy::new(*k)?, samples, online))
            }
            PolicySpec::KMaxUnknownP => kmax_unknown_p_run(n, samples, online),
            PolicySpec::AcceptFirst => Ok(if online.is_empty() {
                StopOutcome::VacuousWin
            } else {
                StopOutcome::Stopped(0)
            }),
            PolicySpec::KMax { k: None } | PolicySpec::AlgT => Err(Error::UnknownPolicy(
                "policy needs p or arrival times; resolve it first".into(),
            )),
        }
    }
}

/// Outcome summary of a reproducible trial run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrialReport {
    pub policy: String,
    pub generator: String,
    pub n: usize,
    pub p: f64,
    pub trials: u64,
    pub wins: u64,
    pub estimate: f64,
    /// 3-sigma normal-approximation half width; reported only from 10^4
    /// trials up, where the approximation is honest.
    pub ci_halfwidth: Option<f64>,
    pub seed: u64,
}

/// Runs `trials` independent games. Trial `t` draws everything it needs
/// from the `(seed, Trial, t)` stream, so the win count is identical for
/// any worker count and evaluation order. Vacuous wins (empty online set)
/// count as wins.
pub fn run_trials(
    policy: &PolicySpec,
    gen: &GeneratorSpec,
    p: f64,
    trials: u64,
    seed: u64,
) -> Result<TrialReport> {
    check_probability(p, "[0, 1]")?;
    gen.validate()?;
    if trials == 0 {
        return Err(Error::SizeMismatch {
            context: "trial count",
            expected: 1,
            got: 0,
        });
    }
    let n = gen.n();

    // Resolve parameters once so every trial is cheap.
    let resolved = match policy {
        PolicySpec::KMax { k: None } => PolicySpec::KMax {
            k: Some(crate::aos::kmax_k(p)?),
        },
        other => other.clone(),
    };
    let thresholds: Option<ThresholdSequence> = match resolved {
        // Sample-rank indices above n behave as -inf thresholds, so n
        // materialized terms reproduce the infinite sequence exactly.
        PolicySpec::AlgT => Some(solve_thresholds(n, 1e-10)?),
        _ => None,
    };
    let shared = gen.fixed_instance()?;

    let wins = exec::fold_chunked(
        trials,
        exec::DEFAULT_CHUNK,
        || Ok(0u64),
        |acc: &mut Result<u64>, t| {
            if acc.is_err() {
                return;
            }
            let mut stream = rng::stream(seed, Domain::Trial, t);
            let local;
            let instance = match &shared {
                Some(inst) => inst,
                None => {
                    local = gen.draw_instance(&mut stream);
                    &local
                }
            };
            let win = run_one_trial(&resolved, thresholds.as_ref(), instance, p, &mut stream);
            match (acc.as_mut(), win) {
                (Ok(count), Ok(true)) => *count += 1,
                (Ok(_), Ok(false)) => {}
                (Ok(_), Err(e)) => *acc = Err(e),
                (Err(_), _) => {}
            }
        },
        |acc, part| match (acc.as_mut(), part) {
            (Ok(count), Ok(c)) => *count += c,
            (Ok(_), Err(e)) => *acc = Err(e),
            (Err(_), _) => {}
        },
    )?;

    let estimate = wins as f64 / trials as f64;
    let ci_halfwidth = (trials >= 10_000)
        .then(|| 3.0 * (estimate * (1.0 - estimate) / trials as f64).sqrt());
    Ok(TrialReport {
        policy: policy.label(),
        generator: gen.label(),
        n,
        p,
        trials,
        wins,
        estimate,
        ci_halfwidth,
        seed,
    })
}

fn run_one_trial<R: rand::Rng>(
    policy: &PolicySpec,
    thresholds: Option<&ThresholdSequence>,
    instance: &Instance,
    p: f64,
    stream: &mut R,
) -> Result<bool> {
    match policy {
        PolicySpec::AlgT => {
            let arrivals = draw_arrivals_with(instance.len(), p, stream);
            let online = online_values_in_time_order(&arrivals, instance);
            let outcome = alg_t_run(thresholds.expect("resolved"), &arrivals, instance)?;
            Ok(outcome.is_win(&online))
        }
        ordinal => {
            let n = instance.len();
            let mask: Vec<bool> = (0..n).map(|_| stream.gen::<f64>() < p).collect();
            let mut samples = Vec::new();
            let mut online = Vec::new();
            for &element in instance.order() {
                let v = instance.value(element);
                if mask[element] {
                    samples.push(v);
                } else {
                    online.push(v);
                }
            }
            let outcome = ordinal.run_ordinal(n, &samples, &online)?;
            Ok(outcome.is_win(&online))
        }
    }
}

/// Replays the arrival-time coupling explicitly (sampled elements get
/// times in [0, p), online ones in [p, 1)); exposed for callers that
/// start from a discrete sampling outcome.
pub fn arrivals_for_outcome(
    outcome: &crate::instance::SamplingOutcome,
    p: f64,
    seed: u64,
) -> ArrivalRealization {
    let mut stream = rng::stream(seed, Domain::Arrival, 1);
    ArrivalRealization::from_outcome(outcome, p, &mut stream)
}
