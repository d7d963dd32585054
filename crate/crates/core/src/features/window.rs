use serde::{Deserialize, Serialize};

use crate::error::{check_finite, Error, Result};

/// Default EEG sampling rate.
pub const DEFAULT_FS_HZ: f64 = 128.0;

/// One channel's samples over one time window.
#[derive(Debug, Clone, PartialEq)]
pub struct RawWindow {
    pub channel_id: String,
    pub samples: Vec<f64>,
    pub fs_hz: f64,
}

impl RawWindow {
    pub fn new(channel_id: impl Into<String>, samples: Vec<f64>, fs_hz: f64) -> Result<Self> {
        check_finite(&samples)?;
        if !(fs_hz.is_finite() && fs_hz > 0.0) {
            return Err(Error::InvalidParameter(format!("sampling rate {fs_hz}")));
        }
        Ok(Self {
            channel_id: channel_id.into(),
            samples,
            fs_hz,
        })
    }
}

/// A multichannel recording with one sample sequence per channel.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Recording {
    pub fs_hz: f64,
    pub channels: Vec<String>,
    /// `data[c][t]`: channel-major.
    pub data: Vec<Vec<f64>>,
}

impl Recording {
    pub fn new(fs_hz: f64, channels: Vec<String>, data: Vec<Vec<f64>>) -> Result<Self> {
        if channels.len() != data.len() {
            return Err(Error::DimensionMismatch {
                expected: channels.len(),
                got: data.len(),
            });
        }
        if let Some(first) = data.first() {
            for d in &data {
                if d.len() != first.len() {
                    return Err(Error::InvalidParameter(format!(
                        "channels differ in length ({} vs {})",
                        first.len(),
                        d.len()
                    )));
                }
            }
        }
        if !(fs_hz.is_finite() && fs_hz > 0.0) {
            return Err(Error::InvalidParameter(format!("sampling rate {fs_hz}")));
        }
        Ok(Self { fs_hz, channels, data })
    }

    /// Number of time points per channel.
    pub fn len(&self) -> usize {
        self.data.first().map_or(0, Vec::len)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Window length in samples, `round(window_seconds * fs_hz)`.
pub fn window_len(window_seconds: f64, fs_hz: f64) -> usize {
    (window_seconds * fs_hz).round() as usize
}

/// Splits a recording into consecutive, non-overlapping, time-aligned windows.
/// A trailing partial window is dropped; a recording shorter than one window
/// yields nothing.
pub fn window_stream(rec: &Recording, window_seconds: f64) -> Result<Vec<Vec<RawWindow>>> {
    if !(window_seconds.is_finite() && window_seconds > 0.0) {
        return Err(Error::InvalidParameter(format!("window length {window_seconds} s")));
    }
    let n = window_len(window_seconds, rec.fs_hz);
    if n < 2 {
        return Err(Error::InvalidParameter(format!(
            "window of {window_seconds} s holds fewer than 2 samples"
        )));
    }
    let count = rec.len() / n;
    let mut out = Vec::with_capacity(count);
    for w in 0..count {
        let span = w * n..(w + 1) * n;
        let set = rec
            .channels
            .iter()
            .zip(&rec.data)
            .map(|(name, d)| RawWindow::new(name.clone(), d[span.clone()].to_vec(), rec.fs_hz))
            .collect::<Result<Vec<_>>>()?;
        out.push(set);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rec(len: usize, channels: usize) -> Recording {
        Recording::new(
            DEFAULT_FS_HZ,
            (0..channels).map(|c| format!("C{c}")).collect(),
            (0..channels)
                .map(|c| (0..len).map(|t| (t * (c + 1)) as f64).collect())
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn five_minutes_in_ten_second_windows() {
        let r = rec(300 * 128, 2);
        let w = window_stream(&r, 10.0).unwrap();
        assert_eq!(w.len(), 30);
        assert!(w
            .iter()
            .all(|set| set.len() == 2 && set.iter().all(|c| c.samples.len() == 1280)));
    }

    #[test]
    fn window_counts_match_corpus_sizes() {
        // per recording: 300 s; 28 players x 4 games
        let per = |ws: f64| 300 * 128 / window_len(ws, 128.0);
        assert_eq!(per(300.0) * 112, 112);
        assert_eq!(per(60.0) * 112, 560);
        assert_eq!(per(30.0) * 112, 1120);
        assert_eq!(per(10.0) * 112, 3360);
    }

    #[test]
    fn windows_are_aligned_and_contiguous() {
        let r = rec(1000, 3);
        let w = window_stream(&r, 2.0).unwrap();
        assert_eq!(w.len(), 3);
        for (k, set) in w.iter().enumerate() {
            for (c, win) in set.iter().enumerate() {
                assert_eq!(win.channel_id, format!("C{c}"));
                assert_eq!(win.samples[0], (k * 256 * (c + 1)) as f64);
            }
        }
    }

    #[test]
    fn short_stream_is_empty() {
        let r = rec(100, 1);
        assert!(window_stream(&r, 1.0).unwrap().is_empty());
    }

    #[test]
    fn mismatched_channels_rejected() {
        let r = Recording::new(128.0, vec!["a".into(), "b".into()], vec![vec![0.0; 4], vec![0.0; 5]]);
        assert!(r.is_err());
    }

    #[test]
    fn nan_rejected() {
        assert!(RawWindow::new("x", vec![0.0, f64::NAN], 128.0).is_err());
    }
}
