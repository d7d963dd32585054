//! Windowed spectral features: each channel window becomes `(max, mean)` of
//! its spectrum in five EEG bands, giving 10 features per channel.
//!
//! Feature order is channel-major, then band (Delta..Gamma), then statistic
//! (max before mean): feature `10 * c + 2 * b + s`.

mod bands;
mod normalize;
mod spectrum;
mod window;

pub use bands::{band_features, band_of, default_bands, Band, BandDefinition, BandStat, SpectrumScale};
pub use normalize::NormalizerState;
pub use spectrum::{magnitude_spectrum, Spectrum, SpectrumAnalyzer, Taper};
pub use window::{window_len, window_stream, RawWindow, Recording, DEFAULT_FS_HZ};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Channel/band/statistic provenance of every feature column.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureLayout {
    pub channels: Vec<String>,
    pub bands: Vec<Band>,
}

/// Provenance of one feature column.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FeatureInfo<'a> {
    pub channel: &'a str,
    pub band: Band,
    pub stat: BandStat,
}

impl FeatureLayout {
    pub fn new(channels: Vec<String>) -> Self {
        Self {
            channels,
            bands: Band::ALL.to_vec(),
        }
    }

    pub fn per_channel(&self) -> usize {
        2 * self.bands.len()
    }

    pub fn dim(&self) -> usize {
        self.channels.len() * self.per_channel()
    }

    pub fn index(&self, channel: usize, band: usize, stat: BandStat) -> usize {
        channel * self.per_channel() + 2 * band + usize::from(stat == BandStat::Mean)
    }

    pub fn info(&self, feature: usize) -> FeatureInfo<'_> {
        let c = feature / self.per_channel();
        let r = feature % self.per_channel();
        FeatureInfo {
            channel: &self.channels[c],
            band: self.bands[r / 2],
            stat: if r.is_multiple_of(2) {
                BandStat::Max
            } else {
                BandStat::Mean
            },
        }
    }

    /// Column name such as `Af3_alpha_max`.
    pub fn name(&self, feature: usize) -> String {
        let i = self.info(feature);
        format!("{}_{}_{}", i.channel, i.band, i.stat)
    }

    pub fn names(&self) -> Vec<String> {
        (0..self.dim()).map(|f| self.name(f)).collect()
    }

    /// Parses column names produced by [`FeatureLayout::name`], which must
    /// appear in canonical order.
    pub fn from_names(names: &[String]) -> Result<Self> {
        let mut channels: Vec<String> = Vec::new();
        for n in names {
            let mut parts = n.rsplitn(3, '_');
            let (_, _, ch) = (parts.next(), parts.next(), parts.next());
            let ch = ch.ok_or_else(|| Error::InvalidParameter(format!("bad feature column {n:?}")))?;
            if channels.last().map(String::as_str) != Some(ch) {
                channels.push(ch.to_string());
            }
        }
        let layout = FeatureLayout::new(channels);
        if layout.names() != names {
            return Err(Error::InvalidParameter(
                "feature columns are not in channel/band/statistic order".into(),
            ));
        }
        Ok(layout)
    }

    /// Sub-layout with the given channels, and the feature indices they map to.
    pub fn select_channel(&self, channel: usize) -> (FeatureLayout, Vec<usize>) {
        let start = channel * self.per_channel();
        (
            FeatureLayout {
                channels: vec![self.channels[channel].clone()],
                bands: self.bands.clone(),
            },
            (start..start + self.per_channel()).collect(),
        )
    }
}

/// Turns window sets into raw (un-normalized) band feature vectors.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct FeatureExtractor {
    pub bands: Vec<BandDefinition>,
    pub scale: SpectrumScale,
    pub taper: Taper,
}

impl Default for FeatureExtractor {
    fn default() -> Self {
        Self {
            bands: default_bands(),
            scale: SpectrumScale::Magnitude,
            taper: Taper::Rectangular,
        }
    }
}

impl FeatureExtractor {
    /// Features of one time-aligned window set, channels in the given order.
    pub fn extract(&self, analyzer: &mut SpectrumAnalyzer, set: &[RawWindow]) -> Result<Vec<f64>> {
        let mut out = Vec::with_capacity(set.len() * 2 * self.bands.len());
        for w in set {
            let s = analyzer.analyze(&w.samples, w.fs_hz)?;
            out.extend(band_features(&s, &self.bands, self.scale));
        }
        Ok(out)
    }

    /// Windows a recording and extracts one feature vector per window, in
    /// time order. Windows are processed in parallel.
    pub fn extract_recording(&self, rec: &Recording, window_seconds: f64) -> Result<Vec<Vec<f64>>> {
        let windows = window_stream(rec, window_seconds)?;
        windows
            .par_iter()
            .map_init(|| SpectrumAnalyzer::new(self.taper), |an, set| self.extract(an, set))
            .collect()
    }

    pub fn layout(&self, channels: Vec<String>) -> FeatureLayout {
        FeatureLayout {
            channels,
            bands: self.bands.iter().map(|b| b.band).collect(),
        }
    }
}
