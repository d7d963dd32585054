//! Dataset ingestion and the processed-sample file format.
//!
//! A corpus is described by a TOML manifest listing one CSV per player per
//! game, in stream order:
//!
//! ```toml
//! sampling_rate_hz = 128
//! channels = ["Af3", "Af4", "F3", "F4", "F7", "F8", "Fc5", "Fc6",
//!             "T7", "T8", "P7", "P8", "O1", "O2"]
//!
//! [[recordings]]
//! player = "S01"
//! game = "train_sim_world"
//! label = 1
//! path = "S01/G1.csv"   # relative to the manifest
//! ```
//!
//! Each recording CSV has a header row; columns are matched to manifest
//! channels by name (case-insensitive) and other columns are ignored. Rows are
//! time points at the manifest sampling rate.

use std::fs::File;
use std::io::{BufReader, BufWriter};
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::features::{FeatureExtractor, FeatureLayout, Recording};
use crate::granule::Label;

/// Emotion classes of the games corpus.
pub fn class_name(label: Label) -> Option<&'static str> {
    match label.0 {
        1 => Some("boredom"),
        2 => Some("calmness"),
        3 => Some("horror"),
        4 => Some("joy"),
        _ => None,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ManifestEntry {
    pub player: String,
    pub game: String,
    pub label: Label,
    pub path: PathBuf,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CorpusManifest {
    #[serde(default = "default_fs")]
    pub sampling_rate_hz: f64,
    pub channels: Vec<String>,
    pub recordings: Vec<ManifestEntry>,
    #[serde(skip)]
    pub base_dir: PathBuf,
}

fn default_fs() -> f64 {
    crate::features::DEFAULT_FS_HZ
}

impl CorpusManifest {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let mut m: CorpusManifest =
            toml::from_str(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        m.base_dir = path.parent().map(Path::to_path_buf).unwrap_or_default();
        m.validate()?;
        Ok(m)
    }

    pub fn validate(&self) -> Result<()> {
        if self.channels.is_empty() {
            return Err(Error::Config("manifest lists no channels".into()));
        }
        if !(self.sampling_rate_hz.is_finite() && self.sampling_rate_hz > 0.0) {
            return Err(Error::Config(format!("bad sampling rate {}", self.sampling_rate_hz)));
        }
        for r in &self.recordings {
            if class_name(r.label).is_none() {
                return Err(Error::Config(format!(
                    "recording {}/{}: label {} is not one of 1..=4",
                    r.player, r.game, r.label
                )));
            }
        }
        Ok(())
    }

    pub fn resolve(&self, entry: &ManifestEntry) -> PathBuf {
        if entry.path.is_absolute() {
            entry.path.clone()
        } else {
            self.base_dir.join(&entry.path)
        }
    }
}

/// One player's recording for one game.
#[derive(Debug, Clone, PartialEq)]
pub struct CorpusSegment {
    pub player: String,
    pub game: String,
    pub label: Label,
    pub recording: Recording,
}

/// Reads every recording listed in the manifest, in manifest order.
pub fn ingest_corpus(manifest_path: &Path) -> Result<(CorpusManifest, Vec<CorpusSegment>)> {
    let manifest = CorpusManifest::load(manifest_path)?;
    let segments = manifest
        .recordings
        .par_iter()
        .map(|e| {
            let recording = read_recording_csv(&manifest.resolve(e), &manifest.channels, manifest.sampling_rate_hz)?;
            Ok(CorpusSegment {
                player: e.player.clone(),
                game: e.game.clone(),
                label: e.label,
                recording,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((manifest, segments))
}

/// Reads the named channel columns of a recording CSV.
pub fn read_recording_csv(path: &Path, channels: &[String], fs_hz: f64) -> Result<Recording> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(BufReader::new(file));
    let header = rdr.headers()?.clone();
    let cols = channels
        .iter()
        .map(|ch| {
            header
                .iter()
                .position(|h| h.eq_ignore_ascii_case(ch))
                .ok_or_else(|| Error::parse(path, 1, format!("missing channel column {ch:?}")))
        })
        .collect::<Result<Vec<_>>>()?;

    let mut data = vec![Vec::new(); channels.len()];
    for rec in rdr.records() {
        let rec = rec.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line());
            Error::parse(path, line, e.to_string())
        })?;
        let line = rec.position().map_or(0, |p| p.line());
        for (c, &col) in cols.iter().enumerate() {
            let cell = rec
                .get(col)
                .ok_or_else(|| Error::parse(path, line, format!("row has no column {col}")))?;
            let v: f64 = cell.parse().map_err(|_| {
                Error::parse(
                    path,
                    line,
                    format!("non-numeric value {cell:?} in column {:?}", channels[c]),
                )
            })?;
            if !v.is_finite() {
                return Err(Error::parse(
                    path,
                    line,
                    format!("non-finite value in column {:?}", channels[c]),
                ));
            }
            data[c].push(v);
        }
    }
    Recording::new(fs_hz, channels.to_vec(), data)
}

/// Writes a recording as CSV using shortest round-trip float formatting, so
/// reading it back reproduces every value exactly.
pub fn write_recording_csv(path: &Path, rec: &Recording) -> Result<()> {
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = csv::Writer::from_writer(BufWriter::new(file));
    w.write_record(&rec.channels)?;
    for t in 0..rec.len() {
        w.write_record(rec.data.iter().map(|d| d[t].to_string()))?;
    }
    w.flush().map_err(|e| Error::io(path, e))?;
    Ok(())
}

/// One feature vector with its provenance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProcessedSample {
    pub player: String,
    pub game: String,
    /// Window index within the recording.
    pub window: usize,
    pub label: Label,
    pub features: Vec<f64>,
}

/// Raw band features for a whole corpus, in stream order.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureCorpus {
    pub window_seconds: f64,
    pub layout: FeatureLayout,
    pub samples: Vec<ProcessedSample>,
}

const META_COLUMNS: [&str; 5] = ["player", "game", "window", "window_seconds", "label"];

impl FeatureCorpus {
    pub fn from_segments(
        segments: &[CorpusSegment],
        extractor: &FeatureExtractor,
        window_seconds: f64,
    ) -> Result<Self> {
        let channels = segments
            .first()
            .map(|s| s.recording.channels.clone())
            .unwrap_or_default();
        let mut samples = Vec::new();
        for seg in segments {
            if seg.recording.channels != channels {
                return Err(Error::InvalidParameter(format!(
                    "recording {}/{} has a different channel schema",
                    seg.player, seg.game
                )));
            }
            for (window, features) in extractor
                .extract_recording(&seg.recording, window_seconds)?
                .into_iter()
                .enumerate()
            {
                samples.push(ProcessedSample {
                    player: seg.player.clone(),
                    game: seg.game.clone(),
                    window,
                    label: seg.label,
                    features,
                });
            }
        }
        Ok(Self {
            window_seconds,
            layout: extractor.layout(channels),
            samples,
        })
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn labels(&self) -> Vec<Label> {
        self.samples.iter().map(|s| s.label).collect()
    }

    pub fn features(&self) -> Vec<Vec<f64>> {
        self.samples.iter().map(|s| s.features.clone()).collect()
    }

    /// Processed-sample CSV: metadata columns, then one column per feature.
    pub fn write_csv(&self, path: &Path) -> Result<()> {
        let file = File::create(path).map_err(|e| Error::io(path, e))?;
        let mut w = csv::Writer::from_writer(BufWriter::new(file));
        let mut header: Vec<String> = META_COLUMNS.iter().map(|s| s.to_string()).collect();
        header.extend(self.layout.names());
        w.write_record(&header)?;
        for s in &self.samples {
            let mut row = vec![
                s.player.clone(),
                s.game.clone(),
                s.window.to_string(),
                self.window_seconds.to_string(),
                s.label.to_string(),
            ];
            row.extend(s.features.iter().map(f64::to_string));
            w.write_record(&row)?;
        }
        w.flush().map_err(|e| Error::io(path, e))?;
        Ok(())
    }

    pub fn read_csv(path: &Path) -> Result<Self> {
        let file = File::open(path).map_err(|e| Error::io(path, e))?;
        let mut rdr = csv::ReaderBuilder::new()
            .trim(csv::Trim::All)
            .from_reader(BufReader::new(file));
        let header: Vec<String> = rdr.headers()?.iter().map(str::to_string).collect();
        if header.len() <= META_COLUMNS.len() || header[..META_COLUMNS.len()] != META_COLUMNS {
            return Err(Error::parse(
                path,
                1,
                format!("header must start with {}", META_COLUMNS.join(",")),
            ));
        }
        let layout = FeatureLayout::from_names(&header[META_COLUMNS.len()..])
            .map_err(|e| Error::parse(path, 1, e.to_string()))?;
        let mut samples = Vec::new();
        let mut window_seconds = None;
        for rec in rdr.records() {
            let rec = rec.map_err(|e| Error::parse(path, e.position().map_or(0, |p| p.line()), e.to_string()))?;
            let line = rec.position().map_or(0, |p| p.line());
            let num = |i: usize| -> Result<f64> {
                let cell = &rec[i];
                match cell.parse::<f64>() {
                    Ok(v) if v.is_finite() => Ok(v),
                    _ => Err(Error::parse(
                        path,
                        line,
                        format!("bad value {cell:?} in column {:?}", header[i]),
                    )),
                }
            };
            let ws = num(3)?;
            if *window_seconds.get_or_insert(ws) != ws {
                return Err(Error::parse(path, line, "mixed window lengths in one file"));
            }
            let window = rec[2]
                .parse()
                .map_err(|_| Error::parse(path, line, "bad window index"))?;
            let label = rec[4]
                .parse()
                .map(Label)
                .map_err(|_| Error::parse(path, line, format!("bad label {:?}", &rec[4])))?;
            let features = (META_COLUMNS.len()..header.len())
                .map(num)
                .collect::<Result<Vec<_>>>()?;
            samples.push(ProcessedSample {
                player: rec[0].to_string(),
                game: rec[1].to_string(),
                window,
                label,
                features,
            });
        }
        Ok(Self {
            window_seconds: window_seconds.unwrap_or(0.0),
            layout,
            samples,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    fn write(path: &Path, text: &str) {
        let mut f = File::create(path).unwrap();
        f.write_all(text.as_bytes()).unwrap();
    }

    #[test]
    fn reads_named_columns_in_manifest_order() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("r.csv");
        write(&p, "time,AF4,AF3\n0,1.5,2.5\n1,-1,3e-2\n");
        let rec = read_recording_csv(&p, &["Af3".into(), "Af4".into()], 128.0).unwrap();
        assert_eq!(rec.data, vec![vec![2.5, 0.03], vec![1.5, -1.0]]);
    }

    #[test]
    fn non_numeric_cell_reports_line() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("r.csv");
        write(&p, "Af3\n1\n2\nabc\n");
        let err = read_recording_csv(&p, &["Af3".into()], 128.0).unwrap_err();
        match err {
            Error::Parse { line, message, .. } => {
                assert_eq!(line, 4);
                assert!(message.contains("abc"));
            }
            other => panic!("unexpected {other}"),
        }
        write(&p, "Af3\n1\nNaN\n");
        assert!(matches!(
            read_recording_csv(&p, &["Af3".into()], 128.0),
            Err(Error::Parse { line: 3, .. })
        ));
    }

    #[test]
    fn missing_channel_and_file() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("r.csv");
        write(&p, "Af3\n1\n");
        assert!(read_recording_csv(&p, &["O1".into()], 128.0).is_err());
        assert!(matches!(
            read_recording_csv(&dir.path().join("nope.csv"), &["O1".into()], 128.0),
            Err(Error::Io { .. })
        ));
    }

    #[test]
    fn manifest_rejects_unknown_class() {
        let dir = tempfile::tempdir().unwrap();
        let m = dir.path().join("m.toml");
        write(
            &m,
            "channels = [\"Af3\"]\n[[recordings]]\nplayer = \"a\"\ngame = \"g\"\nlabel = 7\npath = \"x.csv\"\n",
        );
        assert!(CorpusManifest::load(&m).is_err());
    }

    #[test]
    fn processed_csv_roundtrip() {
        let layout = FeatureLayout::new(vec!["Af3".into()]);
        let corpus = FeatureCorpus {
            window_seconds: 10.0,
            layout,
            samples: vec![ProcessedSample {
                player: "S01".into(),
                game: "g1".into(),
                window: 3,
                label: Label(2),
                features: (0..10).map(|k| k as f64 / 3.0).collect(),
            }],
        };
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("f.csv");
        corpus.write_csv(&p).unwrap();
        assert_eq!(FeatureCorpus::read_csv(&p).unwrap(), corpus);
    }

    #[test]
    fn class_names() {
        assert_eq!(class_name(Label(1)), Some("boredom"));
        assert_eq!(class_name(Label(4)), Some("joy"));
        assert_eq!(class_name(Label(0)), None);
    }
}
