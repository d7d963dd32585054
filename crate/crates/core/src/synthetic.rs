//! Seeded synthetic streams: axis-aligned Gaussian clusters in the unit
//! hypercube, optional center drift, label masking and label shuffling.

use std::f64::consts::PI;
use std::path::{Path, PathBuf};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::corpus::write_recording_csv;
use crate::error::{Error, Result};
use crate::eval::StreamSample;
use crate::features::Recording;
use crate::granule::Label;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ClassOrder {
    /// Classes take turns: 1, 2, ..., k, 1, 2, ...
    #[default]
    RoundRobin,
    /// All samples of class 1, then class 2, ...
    Blocked,
}

/// Shift added to every cluster center from sample index `at` (0-based) on.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Drift {
    pub at: u64,
    pub shift: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SyntheticSpec {
    /// One center per class; class `k` (0-based) is labeled `k + 1`.
    pub centers: Vec<Vec<f64>>,
    /// Per-class standard deviation, shared by all dimensions.
    pub dispersions: Vec<f64>,
    pub samples_per_class: usize,
    #[serde(default)]
    pub order: ClassOrder,
    #[serde(default)]
    pub drift: Vec<Drift>,
    /// Probability that a sample's label is revealed to the learner.
    pub label_visibility: f64,
    /// Permute ground-truth labels across the stream, destroying any relation
    /// between features and classes.
    #[serde(default)]
    pub shuffle_labels: bool,
    pub seed: u64,
}

impl SyntheticSpec {
    pub fn classes(&self) -> usize {
        self.centers.len()
    }

    pub fn dims(&self) -> usize {
        self.centers.first().map_or(0, Vec::len)
    }

    pub fn len(&self) -> usize {
        self.classes() * self.samples_per_class
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidParameter(m.to_string()));
        let dims = self.dims();
        if self.centers.is_empty() || dims == 0 {
            return bad("need at least one class and one dimension");
        }
        if self.centers.iter().any(|c| c.len() != dims) {
            return bad("all centers must share a dimension");
        }
        if self.dispersions.len() != self.classes() {
            return bad("need one dispersion per class");
        }
        if self.dispersions.iter().any(|d| !(d.is_finite() && *d >= 0.0)) {
            return bad("dispersions must be finite and non-negative");
        }
        if self.drift.iter().any(|d| d.shift.len() != dims) {
            return bad("drift shift must match the dimension");
        }
        if !(0.0..=1.0).contains(&self.label_visibility) {
            return bad("label_visibility must lie in [0, 1]");
        }
        Ok(())
    }

    /// Center of class `k` at sample index `h`, with all drifts applied.
    pub fn center_at(&self, k: usize, h: u64) -> Vec<f64> {
        let mut c = self.centers[k].clone();
        for d in self.drift.iter().filter(|d| h >= d.at) {
            for (cj, sj) in c.iter_mut().zip(&d.shift) {
                *cj += sj;
            }
        }
        c
    }
}

/// Draws the stream described by `spec`. The same spec always yields the
/// same stream.
pub fn generate_synthetic(spec: &SyntheticSpec) -> Result<Vec<StreamSample>> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let k = spec.classes();
    let n = spec.len();
    let normals: Vec<Normal<f64>> = spec
        .dispersions
        .iter()
        .map(|&d| Normal::new(0.0, d).expect("validated dispersion"))
        .collect();

    let mut out = Vec::with_capacity(n);
    for h in 0..n {
        let class = match spec.order {
            ClassOrder::RoundRobin => h % k,
            ClassOrder::Blocked => h / spec.samples_per_class,
        };
        let features = spec
            .center_at(class, h as u64)
            .into_iter()
            .map(|c| (c + normals[class].sample(&mut rng)).clamp(0.0, 1.0))
            .collect();
        let label_visible = rng.gen::<f64>() < spec.label_visibility;
        out.push(StreamSample {
            h: h as u64,
            features,
            truth: Label(class as u32 + 1),
            label_visible,
        });
    }
    if spec.shuffle_labels {
        let mut truths: Vec<Label> = out.iter().map(|s| s.truth).collect();
        truths.shuffle(&mut rng);
        for (s, t) in out.iter_mut().zip(truths) {
            s.truth = t;
        }
    }
    Ok(out)
}

/// Named stream setups used by the acceptance checks and the CLI.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Preset {
    /// 4 well-separated classes in 10 dimensions, 2000 samples, all labeled.
    Separable4,
    /// `Separable4` with only 20% of labels revealed.
    SemiSupervised,
    /// `Separable4` with every center shifted by 0.3 from sample 1000 on.
    Drift,
    /// 4 classes, 10,000 samples, labels shuffled across the stream.
    ShuffledLabels,
}

impl Preset {
    pub const ALL: [Preset; 4] = [
        Preset::Separable4,
        Preset::SemiSupervised,
        Preset::Drift,
        Preset::ShuffledLabels,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Preset::Separable4 => "separable4",
            Preset::SemiSupervised => "semi20",
            Preset::Drift => "drift",
            Preset::ShuffledLabels => "shuffled",
        }
    }

    pub fn parse(s: &str) -> Option<Preset> {
        Preset::ALL.into_iter().find(|p| p.name() == s)
    }

    pub fn spec(self, seed: u64) -> SyntheticSpec {
        let base = SyntheticSpec {
            centers: separable_centers(),
            dispersions: vec![0.03; 4],
            samples_per_class: 500,
            order: ClassOrder::RoundRobin,
            drift: Vec::new(),
            label_visibility: 1.0,
            shuffle_labels: false,
            seed,
        };
        match self {
            Preset::Separable4 => base,
            Preset::SemiSupervised => SyntheticSpec {
                label_visibility: 0.2,
                ..base
            },
            Preset::Drift => SyntheticSpec {
                drift: vec![Drift {
                    at: 1000,
                    shift: vec![0.3; 10],
                }],
                ..base
            },
            Preset::ShuffledLabels => SyntheticSpec {
                samples_per_class: 2500,
                shuffle_labels: true,
                ..base
            },
        }
    }
}

/// Four 10-dimensional centers on the `{0.2, 0.6}` lattice. Every pair
/// differs by 0.4 in at least four coordinates (Euclidean distance >= 0.8),
/// and the whole set stays inside the unit cube after a +0.3 shift.
pub fn separable_centers() -> Vec<Vec<f64>> {
    let codes = [
        "0000011111", //
        "1111100000",
        "0101010101",
        "1010101010",
    ];
    codes
        .iter()
        .map(|c| c.bytes().map(|b| if b == b'1' { 0.6 } else { 0.2 }).collect())
        .collect()
}

/// Rhythm (Hz) that marks each class in the demo corpus: delta, theta, alpha
/// and beta for classes 1 to 4.
pub const DEMO_RHYTHMS_HZ: [f64; 4] = [3.0, 6.0, 10.0, 20.0];

/// Writes a small raw corpus in the manifest layout under `dir` and returns
/// the manifest path.
///
/// Each of `players` players gets one recording of `seconds` seconds per class
/// at 128 Hz over the channels `Af3, Af4, O1, O2`. Every channel carries
/// Gaussian noise; the occipital pair also carries the class rhythm, stronger
/// on `O1` than on `O2`. The frontal pair is pure noise.
pub fn write_demo_corpus(dir: &Path, players: usize, seconds: f64, seed: u64) -> Result<PathBuf> {
    let fs = 128.0;
    let channels: Vec<String> = ["Af3", "Af4", "O1", "O2"].iter().map(|s| s.to_string()).collect();
    let gains = [0.0, 0.0, 1.0, 0.6];
    let n = (seconds * fs) as usize;
    let noise = Normal::new(0.0, 0.5).expect("constant dispersion");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut manifest = String::from("sampling_rate_hz = 128\nchannels = [\"Af3\", \"Af4\", \"O1\", \"O2\"]\n");
    for p in 1..=players {
        let player = format!("P{p:02}");
        let pdir = dir.join(&player);
        std::fs::create_dir_all(&pdir).map_err(|e| Error::io(&pdir, e))?;
        for (k, &freq) in DEMO_RHYTHMS_HZ.iter().enumerate() {
            let phase = rng.gen_range(0.0..2.0 * PI);
            let data = gains
                .iter()
                .map(|&g| {
                    (0..n)
                        .map(|t| g * (2.0 * PI * freq * t as f64 / fs + phase).sin() + noise.sample(&mut rng))
                        .collect()
                })
                .collect();
            let rec = Recording::new(fs, channels.clone(), data)?;
            let rel = format!("{player}/G{}.csv", k + 1);
            write_recording_csv(&dir.join(&rel), &rec)?;
            manifest.push_str(&format!(
                "\n[[recordings]]\nplayer = \"{player}\"\ngame = \"G{}\"\nlabel = {}\npath = \"{rel}\"\n",
                k + 1,
                k + 1
            ));
        }
    }
    let path = dir.join("manifest.toml");
    std::fs::write(&path, manifest).map_err(|e| Error::io(&path, e))?;
    Ok(path)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dist(a: &[f64], b: &[f64]) -> f64 {
        a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum::<f64>().sqrt()
    }

    #[test]
    fn preset_centers_are_separated() {
        let c = separable_centers();
        for i in 0..4 {
            for j in i + 1..4 {
                assert!(dist(&c[i], &c[j]) >= 0.4);
            }
        }
    }

    #[test]
    fn deterministic_for_seed() {
        let s = Preset::Separable4.spec(3);
        assert_eq!(generate_synthetic(&s).unwrap(), generate_synthetic(&s).unwrap());
        let other = Preset::Separable4.spec(4);
        assert_ne!(generate_synthetic(&s).unwrap(), generate_synthetic(&other).unwrap());
    }

    #[test]
    fn round_robin_and_clipping() {
        let s = generate_synthetic(&Preset::Separable4.spec(1)).unwrap();
        assert_eq!(s.len(), 2000);
        for (h, x) in s.iter().enumerate() {
            assert_eq!(x.truth, Label((h % 4) as u32 + 1));
            assert!(x.features.iter().all(|v| (0.0..=1.0).contains(v)));
            assert!(x.label_visible);
        }
    }

    #[test]
    fn blocked_order() {
        let mut spec = Preset::Separable4.spec(1);
        spec.order = ClassOrder::Blocked;
        spec.samples_per_class = 3;
        let s = generate_synthetic(&spec).unwrap();
        let labels: Vec<u32> = s.iter().map(|x| x.truth.0).collect();
        assert_eq!(labels, vec![1, 1, 1, 2, 2, 2, 3, 3, 3, 4, 4, 4]);
    }

    #[test]
    fn zero_visibility_masks_all() {
        let mut spec = Preset::Separable4.spec(1);
        spec.label_visibility = 0.0;
        assert!(generate_synthetic(&spec).unwrap().iter().all(|x| !x.label_visible));
    }

    #[test]
    fn partial_visibility_ratio() {
        let s = generate_synthetic(&Preset::SemiSupervised.spec(5)).unwrap();
        let frac = s.iter().filter(|x| x.label_visible).count() as f64 / s.len() as f64;
        assert!((frac - 0.2).abs() < 0.03, "{frac}");
    }

    #[test]
    fn drift_moves_centers() {
        let spec = Preset::Drift.spec(1);
        assert_eq!(spec.center_at(0, 999), separable_centers()[0]);
        let shifted = spec.center_at(0, 1000);
        assert!((shifted[0] - 0.5).abs() < 1e-12 && (shifted[9] - 0.9).abs() < 1e-12);
    }

    #[test]
    fn shuffled_labels_keep_class_counts() {
        let s = generate_synthetic(&Preset::ShuffledLabels.spec(2)).unwrap();
        assert_eq!(s.len(), 10_000);
        for k in 1..=4 {
            assert_eq!(s.iter().filter(|x| x.truth == Label(k)).count(), 2500);
        }
    }

    #[test]
    fn demo_corpus_ingests() {
        let dir = tempfile::tempdir().unwrap();
        let manifest = write_demo_corpus(dir.path(), 2, 20.0, 1).unwrap();
        let (m, segs) = crate::corpus::ingest_corpus(&manifest).unwrap();
        assert_eq!(m.recordings.len(), 8);
        assert_eq!(segs.len(), 8);
        assert!(segs.iter().all(|s| s.recording.len() == 2560));
        assert_eq!(segs[5].label, Label(2));
    }

    #[test]
    fn invalid_specs() {
        let mut s = Preset::Separable4.spec(1);
        s.dispersions.pop();
        assert!(generate_synthetic(&s).is_err());
        let mut s = Preset::Separable4.spec(1);
        s.centers[1].push(0.5);
        assert!(s.validate().is_err());
    }
}
