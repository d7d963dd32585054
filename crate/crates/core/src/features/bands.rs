use std::fmt;

use serde::{Deserialize, Serialize};

use super::spectrum::Spectrum;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Band {
    Delta,
    Theta,
    Alpha,
    Beta,
    Gamma,
}

impl Band {
    pub const ALL: [Band; 5] = [Band::Delta, Band::Theta, Band::Alpha, Band::Beta, Band::Gamma];

    pub fn name(self) -> &'static str {
        match self {
            Band::Delta => "delta",
            Band::Theta => "theta",
            Band::Alpha => "alpha",
            Band::Beta => "beta",
            Band::Gamma => "gamma",
        }
    }

    pub fn parse(s: &str) -> Option<Band> {
        Band::ALL.into_iter().find(|b| b.name().eq_ignore_ascii_case(s))
    }
}

impl fmt::Display for Band {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Frequency range of one band. Ranges are half-open `[lo, hi)` except for
/// the last band of a set, which is closed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BandDefinition {
    pub band: Band,
    pub lo_hz: f64,
    pub hi_hz: f64,
}

/// Delta [1,4), Theta [4,8), Alpha [8,13), Beta [13,30), Gamma [30,64].
pub fn default_bands() -> Vec<BandDefinition> {
    let edges = [1.0, 4.0, 8.0, 13.0, 30.0, 64.0];
    Band::ALL
        .iter()
        .enumerate()
        .map(|(i, &band)| BandDefinition {
            band,
            lo_hz: edges[i],
            hi_hz: edges[i + 1],
        })
        .collect()
}

/// Whether band amplitudes are read as magnitude or squared magnitude.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpectrumScale {
    #[default]
    Magnitude,
    Power,
}

/// The two per-band statistics, in feature order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BandStat {
    Max,
    Mean,
}

impl BandStat {
    pub fn name(self) -> &'static str {
        match self {
            BandStat::Max => "max",
            BandStat::Mean => "mean",
        }
    }
}

impl fmt::Display for BandStat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Index of the band containing `freq`, if any.
pub fn band_of(freq: f64, bands: &[BandDefinition]) -> Option<usize> {
    let last = bands.len().checked_sub(1)?;
    bands
        .iter()
        .enumerate()
        .position(|(i, b)| freq >= b.lo_hz && (freq < b.hi_hz || (i == last && freq == b.hi_hz)))
}

/// `(max, mean)` per band, flattened in band order. A band with no bins
/// contributes `(0, 0)`.
pub fn band_features(spectrum: &Spectrum, bands: &[BandDefinition], scale: SpectrumScale) -> Vec<f64> {
    let mut max = vec![0.0_f64; bands.len()];
    let mut sum = vec![0.0_f64; bands.len()];
    let mut count = vec![0usize; bands.len()];
    for (k, &m) in spectrum.magnitudes.iter().enumerate().skip(1) {
        let Some(b) = band_of(spectrum.frequency(k), bands) else {
            continue;
        };
        let v = match scale {
            SpectrumScale::Magnitude => m,
            SpectrumScale::Power => m * m,
        };
        max[b] = max[b].max(v);
        sum[b] += v;
        count[b] += 1;
    }
    let mut out = Vec::with_capacity(2 * bands.len());
    for b in 0..bands.len() {
        out.push(max[b]);
        out.push(if count[b] == 0 { 0.0 } else { sum[b] / count[b] as f64 });
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_edges() {
        let b = default_bands();
        let got: Vec<_> = b.iter().map(|d| (d.band, d.lo_hz, d.hi_hz)).collect();
        assert_eq!(
            got,
            vec![
                (Band::Delta, 1.0, 4.0),
                (Band::Theta, 4.0, 8.0),
                (Band::Alpha, 8.0, 13.0),
                (Band::Beta, 13.0, 30.0),
                (Band::Gamma, 30.0, 64.0),
            ]
        );
        for w in b.windows(2) {
            assert_eq!(w[0].hi_hz, w[1].lo_hz);
        }
    }

    #[test]
    fn shared_edges_go_to_upper_band() {
        let b = default_bands();
        assert_eq!(band_of(4.0, &b), Some(1));
        assert_eq!(band_of(8.0, &b), Some(2));
        assert_eq!(band_of(13.0, &b), Some(3));
        assert_eq!(band_of(30.0, &b), Some(4));
        assert_eq!(band_of(64.0, &b), Some(4));
        assert_eq!(band_of(0.5, &b), None);
        assert_eq!(band_of(64.1, &b), None);
    }

    #[test]
    fn every_bin_in_range_has_one_band() {
        let b = default_bands();
        for n in [128usize, 1280, 3840, 200] {
            let df = 128.0 / n as f64;
            for k in 1..=n / 2 {
                let f = k as f64 * df;
                let hits = (0..b.len())
                    .filter(|&i| {
                        let d = &b[i];
                        f >= d.lo_hz && (f < d.hi_hz || (i == b.len() - 1 && f <= d.hi_hz))
                    })
                    .count();
                if (1.0..=64.0).contains(&f) {
                    assert_eq!(hits, 1, "f = {f}");
                    assert!(band_of(f, &b).is_some());
                } else {
                    assert_eq!(hits, 0);
                }
            }
        }
    }

    #[test]
    fn zero_spectrum_gives_zero_features() {
        let s = Spectrum {
            bin_hz: 0.1,
            magnitudes: vec![0.0; 641],
            n: 1280,
        };
        assert_eq!(
            band_features(&s, &default_bands(), SpectrumScale::Magnitude),
            vec![0.0; 10]
        );
    }

    #[test]
    fn empty_band_is_zero() {
        // 1 Hz resolution but only up to 3 Hz
        let s = Spectrum {
            bin_hz: 1.0,
            magnitudes: vec![1.0, 2.0, 3.0, 4.0],
            n: 6,
        };
        let f = band_features(&s, &default_bands(), SpectrumScale::Magnitude);
        assert_eq!(&f[..2], &[4.0, 3.0]);
        assert!(f[2..].iter().all(|&v| v == 0.0));
    }

    #[test]
    fn power_scale_squares() {
        let s = Spectrum {
            bin_hz: 1.0,
            magnitudes: vec![9.0, 2.0, 3.0, 4.0],
            n: 6,
        };
        let f = band_features(&s, &default_bands(), SpectrumScale::Power);
        assert_eq!(&f[..2], &[16.0, 29.0 / 3.0]);
    }
}
