//! Train-after-test (prequential) evaluation.
//!
//! Every sample is classified first; only afterwards is its label released to
//! the learner, immediately or after a configurable delay. Accuracy and the
//! time-averaged rule count are maintained with their recursive forms and can
//! be recomputed from the per-step records.

mod experiments;

pub use experiments::{
    multi_channel_experiment, normalized_stream, rank_corpus, single_channel_experiment, ChannelResult,
    MultiChannelRow, MultiChannelTable, SingleChannelTable,
};

use std::collections::{BTreeSet, VecDeque};
use std::fmt;
use std::time::{Duration, Instant};

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::granule::Label;
use crate::rule_base::{RuleBase, RuleEvent};

/// One element of an evaluation stream.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StreamSample {
    /// Time index; must increase strictly along the stream.
    pub h: u64,
    pub features: Vec<f64>,
    /// Ground truth used for scoring.
    pub truth: Label,
    /// Whether the learner ever gets to see `truth`.
    pub label_visible: bool,
}

/// Steps between a sample's estimate and the release of its label.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LabelDelay {
    #[default]
    Immediate,
    Steps(u64),
    Never,
}

impl LabelDelay {
    fn steps(self) -> Option<u64> {
        match self {
            LabelDelay::Immediate => Some(0),
            LabelDelay::Steps(d) => Some(d),
            LabelDelay::Never => None,
        }
    }
}

impl fmt::Display for LabelDelay {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.steps() {
            Some(d) => write!(f, "{d}"),
            None => f.write_str("never"),
        }
    }
}

impl std::str::FromStr for LabelDelay {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "never" | "inf" | "infinity" => Ok(LabelDelay::Never),
            other => match other.parse::<u64>() {
                Ok(0) => Ok(LabelDelay::Immediate),
                Ok(d) => Ok(LabelDelay::Steps(d)),
                Err(_) => Err(Error::InvalidParameter(format!("bad label delay {s:?}"))),
            },
        }
    }
}

impl Serialize for LabelDelay {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self.steps() {
            Some(d) => s.serialize_u64(d),
            None => s.serialize_str("never"),
        }
    }
}

impl<'de> Deserialize<'de> for LabelDelay {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Int(u64),
            Text(String),
        }
        match Repr::deserialize(d)? {
            Repr::Int(v) => Ok(if v == 0 {
                LabelDelay::Immediate
            } else {
                LabelDelay::Steps(v)
            }),
            Repr::Text(t) => t.parse().map_err(serde::de::Error::custom),
        }
    }
}

/// Anything that can be evaluated train-after-test.
pub trait StreamClassifier {
    fn predict(&self, x: &[f64]) -> Result<Option<Label>>;
    fn learn(&mut self, x: &[f64], y: Option<Label>) -> Result<Vec<RuleEvent>>;
    fn rule_count(&self) -> usize;
    /// Current activation threshold, if the model has one.
    fn threshold(&self) -> Option<f64> {
        None
    }
    fn fingerprint(&self) -> u64;
}

impl StreamClassifier for RuleBase {
    fn predict(&self, x: &[f64]) -> Result<Option<Label>> {
        Ok(self.classify(x)?.label)
    }

    fn learn(&mut self, x: &[f64], y: Option<Label>) -> Result<Vec<RuleEvent>> {
        Ok(self.learn_step(x, y)?.events)
    }

    fn rule_count(&self) -> usize {
        self.len()
    }

    fn threshold(&self) -> Option<f64> {
        Some(self.rho())
    }

    fn fingerprint(&self) -> u64 {
        RuleBase::fingerprint(self)
    }
}

/// Uniform random guessing over a fixed label set; ignores training data.
#[derive(Debug, Clone)]
pub struct RandomGuess {
    labels: Vec<Label>,
    rng: std::cell::RefCell<rand_chacha::ChaCha8Rng>,
}

impl RandomGuess {
    pub fn new(labels: Vec<Label>, seed: u64) -> Self {
        use rand::SeedableRng;
        Self {
            labels,
            rng: std::cell::RefCell::new(rand_chacha::ChaCha8Rng::seed_from_u64(seed)),
        }
    }
}

impl StreamClassifier for RandomGuess {
    fn predict(&self, _x: &[f64]) -> Result<Option<Label>> {
        use rand::seq::SliceRandom;
        Ok(self.labels.choose(&mut *self.rng.borrow_mut()).copied())
    }

    fn learn(&mut self, _x: &[f64], _y: Option<Label>) -> Result<Vec<RuleEvent>> {
        Ok(Vec::new())
    }

    fn rule_count(&self) -> usize {
        0
    }

    fn fingerprint(&self) -> u64 {
        0
    }
}

/// `((h - 1) / h) * acc + tau / h`.
pub fn recursive_accuracy(acc_old: f64, h: u64, tau: bool) -> f64 {
    recursive_mean(acc_old, h, if tau { 1.0 } else { 0.0 })
}

/// `((h - 1) / h) * c_avg + c / h`.
pub fn recursive_compactness(c_avg_old: f64, h: u64, c_now: usize) -> f64 {
    recursive_mean(c_avg_old, h, c_now as f64)
}

fn recursive_mean(old: f64, h: u64, value: f64) -> f64 {
    assert!(h >= 1, "recursive metrics start at h = 1");
    let h = h as f64;
    (h - 1.0) / h * old + value / h
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StepRecord {
    /// 1-based position in the evaluated stream.
    pub h: u64,
    /// Time index of the sample as it appeared in the input.
    pub sample_h: u64,
    pub estimate: Option<Label>,
    pub truth: Label,
    pub correct: bool,
    pub accuracy: f64,
    /// Rule count after this step's learning.
    pub rules: usize,
    pub c_avg: f64,
    pub rho: Option<f64>,
    /// Wall-clock nanoseconds spent classifying and learning in this step.
    pub latency_ns: u64,
    /// Samples that received a learning step here (more than one when delayed
    /// labels arrive together).
    pub learned: usize,
    pub events: Vec<RuleEvent>,
    /// Model fingerprint when the estimate was made.
    pub model_before: u64,
    /// Model fingerprint after this step's learning.
    pub model_after: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub records: Vec<StepRecord>,
    pub accuracy: f64,
    pub c_avg: f64,
    pub classifier_time: Duration,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LatencyStats {
    pub samples: usize,
    pub mean_ms: f64,
    pub p50_ms: f64,
    pub p99_ms: f64,
    pub max_ms: f64,
    pub total_s: f64,
}

/// One row of a structural-evolution trace.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct TraceRow {
    pub h: u64,
    pub rules: usize,
    pub event: &'static str,
}

impl EvalReport {
    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    /// Fraction correct, recomputed from the records.
    pub fn batch_accuracy(&self) -> f64 {
        if self.records.is_empty() {
            return 0.0;
        }
        self.records.iter().filter(|r| r.correct).count() as f64 / self.records.len() as f64
    }

    /// Mean rule count, recomputed from the records.
    pub fn batch_c_avg(&self) -> f64 {
        if self.records.is_empty() {
            return 0.0;
        }
        self.records.iter().map(|r| r.rules as f64).sum::<f64>() / self.records.len() as f64
    }

    /// Fraction correct among records with `h` in `range` (1-based).
    pub fn window_accuracy(&self, range: std::ops::RangeInclusive<u64>) -> f64 {
        let sel: Vec<_> = self.records.iter().filter(|r| range.contains(&r.h)).collect();
        if sel.is_empty() {
            return 0.0;
        }
        sel.iter().filter(|r| r.correct).count() as f64 / sel.len() as f64
    }

    pub fn events(&self) -> impl Iterator<Item = (u64, &RuleEvent)> {
        self.records.iter().flat_map(|r| r.events.iter().map(move |e| (r.h, e)))
    }

    /// `(h, c, event)` rows. Steps without a structural change emit `none`;
    /// label assignments are not structural and are omitted.
    pub fn structural_trace(&self) -> Vec<TraceRow> {
        let mut rows = Vec::with_capacity(self.records.len());
        for r in &self.records {
            let before = rows.len();
            for e in &r.events {
                if !matches!(e, RuleEvent::Labeled { .. }) {
                    rows.push(TraceRow {
                        h: r.h,
                        rules: r.rules,
                        event: e.kind(),
                    });
                }
            }
            if rows.len() == before {
                rows.push(TraceRow {
                    h: r.h,
                    rules: r.rules,
                    event: "none",
                });
            }
        }
        rows
    }

    pub fn latency(&self) -> LatencyStats {
        let mut ns: Vec<u64> = self.records.iter().map(|r| r.latency_ns).collect();
        ns.sort_unstable();
        let n = ns.len();
        let ms = |v: u64| v as f64 / 1e6;
        let pick = |q: f64| -> f64 {
            if n == 0 {
                0.0
            } else {
                ms(ns[((q * n as f64).ceil() as usize).clamp(1, n) - 1])
            }
        };
        let total: u64 = ns.iter().sum();
        LatencyStats {
            samples: n,
            mean_ms: if n == 0 { 0.0 } else { ms(total) / n as f64 },
            p50_ms: pick(0.5),
            p99_ms: pick(0.99),
            max_ms: ns.last().map_or(0.0, |&v| ms(v)),
            total_s: total as f64 / 1e9,
        }
    }
}

/// Ids of granules that were created without a label.
pub fn created_unlabeled(report: &EvalReport) -> BTreeSet<u64> {
    report
        .events()
        .filter_map(|(_, e)| match e {
            RuleEvent::Created { id, label: None } => Some(*id),
            _ => None,
        })
        .collect()
}

/// Replays the create/merge/delete counts from a structural trace.
pub fn replay_rule_count(rows: &[TraceRow], initial: usize) -> i64 {
    rows.iter().fold(initial as i64, |c, r| match r.event {
        "create" => c + 1,
        "merge" | "delete" => c - 1,
        _ => c,
    })
}

/// Runs `model` over `samples` train-after-test.
///
/// For each sample: estimate, score, then learn. Samples whose label is hidden
/// (or whose delay is `Never`) are learned unsupervised at once; labeled ones
/// wait in a queue until their delay elapses and then get one supervised step.
pub fn run_stream<M: StreamClassifier>(
    model: &mut M,
    samples: &[StreamSample],
    label_delay: LabelDelay,
) -> Result<EvalReport> {
    for w in samples.windows(2) {
        if w[1].h <= w[0].h {
            return Err(Error::OutOfOrder {
                previous: w[0].h,
                got: w[1].h,
            });
        }
    }

    let mut records = Vec::with_capacity(samples.len());
    let mut pending: VecDeque<(u64, usize)> = VecDeque::new();
    let (mut acc, mut c_avg) = (0.0, 0.0);
    let mut busy = Duration::ZERO;

    for (k, s) in samples.iter().enumerate() {
        let h = k as u64 + 1;
        let model_before = model.fingerprint();

        let t0 = Instant::now();
        let estimate = model.predict(&s.features)?;
        let mut events = Vec::new();
        let mut learned = 0;
        match (s.label_visible, label_delay.steps()) {
            (true, Some(d)) => pending.push_back((h + d, k)),
            _ => {
                events.extend(model.learn(&s.features, None)?);
                learned += 1;
            }
        }
        while let Some(&(due, idx)) = pending.front() {
            if due > h {
                break;
            }
            pending.pop_front();
            let p = &samples[idx];
            events.extend(model.learn(&p.features, Some(p.truth))?);
            learned += 1;
        }
        let elapsed = t0.elapsed();
        busy += elapsed;

        let correct = estimate == Some(s.truth);
        let rules = model.rule_count();
        acc = recursive_accuracy(acc, h, correct);
        c_avg = recursive_compactness(c_avg, h, rules);
        records.push(StepRecord {
            h,
            sample_h: s.h,
            estimate,
            truth: s.truth,
            correct,
            accuracy: acc,
            rules,
            c_avg,
            rho: model.threshold(),
            latency_ns: elapsed.as_nanos() as u64,
            learned,
            events,
            model_before,
            model_after: model.fingerprint(),
        });
    }

    Ok(EvalReport {
        records,
        accuracy: acc,
        c_avg,
        classifier_time: busy,
    })
}
