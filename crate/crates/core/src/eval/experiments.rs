use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{run_stream, EvalReport, StreamSample};
use crate::config::RunConfig;
use crate::corpus::FeatureCorpus;
use crate::error::{Error, Result};
use crate::features::NormalizerState;
use crate::ranking::{hemisphere, leave_n_out_schedule, rank_features, FeatureScore, Hemisphere};
use crate::rule_base::RuleBase;

/// Causally normalized stream over the given feature columns. Label
/// visibility is drawn from the config seed, so every run over the same corpus
/// and config hides the same labels.
pub fn normalized_stream(corpus: &FeatureCorpus, columns: &[usize], cfg: &RunConfig) -> Result<Vec<StreamSample>> {
    let dim = corpus.layout.dim();
    if let Some(&bad) = columns.iter().find(|&&c| c >= dim) {
        return Err(Error::InvalidParameter(format!("feature column {bad} out of range")));
    }
    let mut norm = NormalizerState::new(columns.len());
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    corpus
        .samples
        .iter()
        .enumerate()
        .map(|(h, s)| {
            let raw: Vec<f64> = columns.iter().map(|&c| s.features[c]).collect();
            let visible = rng.gen::<f64>() < cfg.label_visibility;
            Ok(StreamSample {
                h: h as u64,
                features: norm.normalize(&raw)?,
                truth: s.label,
                label_visible: visible,
            })
        })
        .collect()
}

/// Ranks features on the leading `calibration_fraction` of the corpus.
pub fn rank_corpus(corpus: &FeatureCorpus, columns: &[usize], cfg: &RunConfig) -> Result<Vec<FeatureScore>> {
    let n = ((corpus.len() as f64) * cfg.calibration_fraction).ceil() as usize;
    let prefix = &corpus.samples[..n.min(corpus.len())];
    let samples: Vec<Vec<f64>> = prefix
        .iter()
        .map(|s| columns.iter().map(|&c| s.features[c]).collect())
        .collect();
    let labels: Vec<_> = prefix.iter().map(|s| s.label).collect();
    let mut scores = rank_features(&samples, &labels)?;
    for s in &mut scores {
        s.feature = columns[s.feature];
    }
    Ok(scores)
}

fn evaluate(corpus: &FeatureCorpus, columns: &[usize], cfg: &RunConfig) -> Result<(EvalReport, RuleBase)> {
    let stream = normalized_stream(corpus, columns, cfg)?;
    let mut model = RuleBase::new(columns.len(), cfg.model)?;
    let report = run_stream(&mut model, &stream, cfg.label_delay)?;
    Ok((report, model))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChannelResult {
    pub channel: String,
    pub hemisphere: Hemisphere,
    pub accuracy: f64,
    pub c_avg: f64,
    pub cpu_seconds: f64,
    pub samples: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SingleChannelTable {
    pub window_seconds: f64,
    pub rows: Vec<ChannelResult>,
    /// Requested channels absent from the corpus.
    pub missing: Vec<String>,
    /// `(accuracy, c_avg)` averaged over left-hemisphere channels.
    pub left_average: Option<(f64, f64)>,
    pub right_average: Option<(f64, f64)>,
}

fn average(rows: &[&ChannelResult]) -> Option<(f64, f64)> {
    if rows.is_empty() {
        return None;
    }
    let n = rows.len() as f64;
    Some((
        rows.iter().map(|r| r.accuracy).sum::<f64>() / n,
        rows.iter().map(|r| r.c_avg).sum::<f64>() / n,
    ))
}

/// One independent model per channel over that channel's 10 features.
pub fn single_channel_experiment(corpus: &FeatureCorpus, cfg: &RunConfig) -> Result<SingleChannelTable> {
    let layout = &corpus.layout;
    let wanted: Vec<String> = cfg.channels.clone().unwrap_or_else(|| layout.channels.clone());
    let mut missing = Vec::new();
    let mut picked = Vec::new();
    for ch in wanted {
        match layout.channels.iter().position(|c| c.eq_ignore_ascii_case(&ch)) {
            Some(i) => picked.push(i),
            None => missing.push(ch),
        }
    }

    let run = |&c: &usize| -> Result<ChannelResult> {
        let (_, cols) = layout.select_channel(c);
        let (report, _) = evaluate(corpus, &cols, cfg)?;
        Ok(ChannelResult {
            channel: layout.channels[c].clone(),
            hemisphere: hemisphere(&layout.channels[c]),
            accuracy: report.accuracy,
            c_avg: report.c_avg,
            cpu_seconds: report.classifier_time.as_secs_f64(),
            samples: report.len(),
        })
    };
    let rows: Vec<ChannelResult> = if cfg.parallel {
        picked.par_iter().map(run).collect::<Result<_>>()?
    } else {
        picked.iter().map(run).collect::<Result<_>>()?
    };

    let side = |h: Hemisphere| average(&rows.iter().filter(|r| r.hemisphere == h).collect::<Vec<_>>());
    Ok(SingleChannelTable {
        window_seconds: corpus.window_seconds,
        left_average: side(Hemisphere::Left),
        right_average: side(Hemisphere::Right),
        rows,
        missing,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MultiChannelRow {
    pub features: usize,
    pub accuracy: f64,
    pub c_avg: f64,
    pub cpu_seconds: f64,
    pub ms_per_sample: f64,
}

#[derive(Debug, Clone)]
pub struct MultiChannelTable {
    pub rows: Vec<MultiChannelRow>,
    /// Full reports, parallel to `rows`.
    pub reports: Vec<EvalReport>,
    /// Final model of each run, parallel to `rows`.
    pub models: Vec<RuleBase>,
    pub subsets: Vec<Vec<usize>>,
}

impl MultiChannelTable {
    /// Index of the most accurate run.
    pub fn best(&self) -> Option<usize> {
        (0..self.rows.len()).max_by(|&a, &b| {
            self.rows[a]
                .accuracy
                .partial_cmp(&self.rows[b].accuracy)
                .unwrap_or(std::cmp::Ordering::Equal)
                .then(b.cmp(&a))
        })
    }
}

/// One model per leave-n-out subset of the ranked features.
pub fn multi_channel_experiment(
    corpus: &FeatureCorpus,
    ranking: &[FeatureScore],
    cfg: &RunConfig,
) -> Result<MultiChannelTable> {
    let dim = ranking.len();
    let subsets = if cfg.leave_out < dim {
        leave_n_out_schedule(ranking, cfg.leave_out, dim, cfg.min_features)?
    } else {
        let mut all: Vec<usize> = ranking.iter().map(|s| s.feature).collect();
        all.sort_unstable();
        vec![all]
    };
    let subsets: Vec<Vec<usize>> = subsets.into_iter().filter(|s| !s.is_empty()).collect();

    let run = |cols: &Vec<usize>| evaluate(corpus, cols, cfg);
    let results: Vec<(EvalReport, RuleBase)> = if cfg.parallel {
        subsets.par_iter().map(run).collect::<Result<_>>()?
    } else {
        subsets.iter().map(run).collect::<Result<_>>()?
    };

    let mut rows = Vec::new();
    let mut reports = Vec::new();
    let mut models = Vec::new();
    for (cols, (report, model)) in subsets.iter().zip(results) {
        let cpu = report.classifier_time.as_secs_f64();
        rows.push(MultiChannelRow {
            features: cols.len(),
            accuracy: report.accuracy,
            c_avg: report.c_avg,
            cpu_seconds: cpu,
            ms_per_sample: if report.is_empty() {
                0.0
            } else {
                1e3 * cpu / report.len() as f64
            },
        });
        reports.push(report);
        models.push(model);
    }
    Ok(MultiChannelTable {
        rows,
        reports,
        models,
        subsets,
    })
}
