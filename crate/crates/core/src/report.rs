//! CSV and JSON report writers.
//!
//! Every command that produces results also writes `summary.json`, which
//! carries the full [`RunConfig`] used so the run can be repeated.

use std::fs::File;
use std::io::BufWriter;
use std::path::Path;

use serde::Serialize;

use crate::config::RunConfig;
use crate::error::{Error, Result};
use crate::eval::{EvalReport, LatencyStats, MultiChannelTable, SingleChannelTable, TraceRow};
use crate::features::FeatureLayout;
use crate::ranking::{BandCorrelation, FeatureScore};

fn writer(path: &Path) -> Result<csv::Writer<BufWriter<File>>> {
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    Ok(csv::Writer::from_writer(BufWriter::new(file)))
}

fn write_rows<T: Serialize>(path: &Path, rows: impl IntoIterator<Item = T>) -> Result<()> {
    let mut w = writer(path)?;
    for r in rows {
        w.serialize(r)?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

#[derive(Serialize)]
struct StepRow<'a> {
    h: u64,
    sample_h: u64,
    estimate: Option<u32>,
    truth: u32,
    correct: bool,
    accuracy: f64,
    rules: usize,
    c_avg: f64,
    rho: Option<f64>,
    latency_ms: f64,
    learned: usize,
    events: &'a str,
}

/// Per-step records, one row per stream sample. Events of a step are joined
/// with `;`.
pub fn write_eval_csv(path: &Path, report: &EvalReport) -> Result<()> {
    let mut w = writer(path)?;
    for r in &report.records {
        let events: Vec<&str> = r.events.iter().map(|e| e.kind()).collect();
        w.serialize(StepRow {
            h: r.h,
            sample_h: r.sample_h,
            estimate: r.estimate.map(|l| l.0),
            truth: r.truth.0,
            correct: r.correct,
            accuracy: r.accuracy,
            rules: r.rules,
            c_avg: r.c_avg,
            rho: r.rho,
            latency_ms: r.latency_ns as f64 / 1e6,
            learned: r.learned,
            events: &events.join(";"),
        })?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

/// Structural-evolution plot data: `h,rules,event`.
pub fn write_trace_csv(path: &Path, rows: &[TraceRow]) -> Result<()> {
    write_rows(path, rows)
}

#[derive(Serialize)]
struct ChannelRow<'a> {
    channel: &'a str,
    hemisphere: &'a str,
    accuracy: f64,
    c_avg: f64,
    cpu_seconds: f64,
    samples: usize,
}

/// One row per channel followed by `left_average` / `right_average` rows.
pub fn write_single_channel_csv(path: &Path, table: &SingleChannelTable) -> Result<()> {
    let mut rows: Vec<ChannelRow> = table
        .rows
        .iter()
        .map(|r| ChannelRow {
            channel: &r.channel,
            hemisphere: match r.hemisphere {
                crate::ranking::Hemisphere::Left => "left",
                crate::ranking::Hemisphere::Right => "right",
                crate::ranking::Hemisphere::Midline => "midline",
            },
            accuracy: r.accuracy,
            c_avg: r.c_avg,
            cpu_seconds: r.cpu_seconds,
            samples: r.samples,
        })
        .collect();
    for (name, avg) in [
        ("left_average", table.left_average),
        ("right_average", table.right_average),
    ] {
        if let Some((accuracy, c_avg)) = avg {
            rows.push(ChannelRow {
                channel: name,
                hemisphere: "",
                accuracy,
                c_avg,
                cpu_seconds: 0.0,
                samples: 0,
            });
        }
    }
    write_rows(path, rows)
}

#[derive(Serialize)]
struct SubsetRow {
    features: usize,
    accuracy: f64,
    c_avg: f64,
    cpu_seconds: f64,
}

/// `features,accuracy,c_avg,cpu_seconds`, largest subset first.
pub fn write_multi_channel_csv(path: &Path, table: &MultiChannelTable) -> Result<()> {
    write_rows(
        path,
        table.rows.iter().map(|r| SubsetRow {
            features: r.features,
            accuracy: r.accuracy,
            c_avg: r.c_avg,
            cpu_seconds: r.cpu_seconds,
        }),
    )
}

#[derive(Serialize)]
struct RankRow<'a> {
    rank: usize,
    feature: String,
    channel: &'a str,
    band: String,
    statistic: &'a str,
    relevance: f64,
    redundancy: f64,
    score: f64,
}

pub fn write_ranking_csv(path: &Path, ranking: &[FeatureScore], layout: &FeatureLayout) -> Result<()> {
    write_rows(
        path,
        ranking.iter().map(|s| {
            let info = layout.info(s.feature);
            RankRow {
                rank: s.rank,
                feature: layout.name(s.feature),
                channel: info.channel,
                band: info.band.to_string(),
                statistic: info.stat.name(),
                relevance: s.relevance,
                redundancy: s.redundancy,
                score: s.score,
            }
        }),
    )
}

#[derive(Serialize)]
struct BandRow {
    band: String,
    global: f64,
    left: f64,
    right: f64,
}

/// Per-band correlation sums: `band,global,left,right`.
pub fn write_band_csv(path: &Path, bands: &[BandCorrelation]) -> Result<()> {
    write_rows(
        path,
        bands.iter().map(|b| BandRow {
            band: b.band.to_string(),
            global: b.global,
            left: b.left,
            right: b.right,
        }),
    )
}

/// Machine-readable run summary.
#[derive(Debug, Clone, Serialize)]
pub struct Summary {
    pub command: String,
    pub config: RunConfig,
    /// Seconds spent reading input and extracting features.
    pub preprocessing_seconds: f64,
    /// Seconds spent inside classify + learn.
    pub classifier_seconds: f64,
    pub results: serde_json::Value,
    pub warnings: Vec<String>,
}

impl Summary {
    pub fn new(command: &str, config: &RunConfig) -> Self {
        Self {
            command: command.to_string(),
            config: config.clone(),
            preprocessing_seconds: 0.0,
            classifier_seconds: 0.0,
            results: serde_json::Value::Null,
            warnings: Vec::new(),
        }
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        let file = File::create(path).map_err(|e| Error::io(path, e))?;
        serde_json::to_writer_pretty(BufWriter::new(file), self)?;
        Ok(())
    }
}

/// Headline numbers of one evaluation, for summaries.
#[derive(Debug, Clone, Serialize)]
pub struct RunResult {
    pub samples: usize,
    pub accuracy: f64,
    pub c_avg: f64,
    pub final_rules: usize,
    pub latency: LatencyStats,
}

impl RunResult {
    pub fn of(report: &EvalReport) -> Self {
        Self {
            samples: report.len(),
            accuracy: report.accuracy,
            c_avg: report.c_avg,
            final_rules: report.records.last().map_or(0, |r| r.rules),
            latency: report.latency(),
        }
    }
}
