use std::f64::consts::PI;
use std::sync::Arc;

use rustfft::num_complex::Complex;
use rustfft::{Fft, FftPlanner};
use serde::{Deserialize, Serialize};

use super::window::RawWindow;
use crate::error::{check_finite, Error, Result};

/// Taper applied to a window before the transform.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Taper {
    #[default]
    Rectangular,
    Hann,
}

/// One-sided DFT magnitudes `|X_k|` for `k = 0..=N/2`, unnormalized.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    pub bin_hz: f64,
    pub magnitudes: Vec<f64>,
    /// Length of the transformed window.
    pub n: usize,
}

impl Spectrum {
    pub fn frequency(&self, k: usize) -> f64 {
        k as f64 * self.bin_hz
    }

    pub fn frequencies(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.magnitudes.len()).map(|k| self.frequency(k))
    }

    /// `sum_k |X_k|^2` over the full two-sided spectrum, reconstructed from
    /// the one-sided half by conjugate symmetry.
    pub fn two_sided_energy(&self) -> f64 {
        let last = self.magnitudes.len() - 1;
        self.magnitudes
            .iter()
            .enumerate()
            .map(|(k, m)| {
                let mirrored = k != 0 && !(self.n.is_multiple_of(2) && k == last);
                if mirrored {
                    2.0 * m * m
                } else {
                    m * m
                }
            })
            .sum()
    }
}

/// Reusable FFT front end; plans are cached per window length.
pub struct SpectrumAnalyzer {
    planner: FftPlanner<f64>,
    cached: Option<(usize, Arc<dyn Fft<f64>>)>,
    taper: Taper,
    buf: Vec<Complex<f64>>,
}

impl Default for SpectrumAnalyzer {
    fn default() -> Self {
        Self::new(Taper::Rectangular)
    }
}

impl SpectrumAnalyzer {
    pub fn new(taper: Taper) -> Self {
        Self {
            planner: FftPlanner::new(),
            cached: None,
            taper,
            buf: Vec::new(),
        }
    }

    pub fn analyze(&mut self, samples: &[f64], fs_hz: f64) -> Result<Spectrum> {
        let n = samples.len();
        if n < 2 {
            return Err(Error::InvalidParameter(format!("window of {n} samples")));
        }
        check_finite(samples)?;
        let fft = match &self.cached {
            Some((len, fft)) if *len == n => Arc::clone(fft),
            _ => {
                let fft = self.planner.plan_fft_forward(n);
                self.cached = Some((n, Arc::clone(&fft)));
                fft
            }
        };
        self.buf.clear();
        match self.taper {
            Taper::Rectangular => self.buf.extend(samples.iter().map(|&s| Complex::new(s, 0.0))),
            Taper::Hann => self.buf.extend(samples.iter().enumerate().map(|(t, &s)| {
                let w = 0.5 - 0.5 * (2.0 * PI * t as f64 / n as f64).cos();
                Complex::new(s * w, 0.0)
            })),
        }
        fft.process(&mut self.buf);
        Ok(Spectrum {
            bin_hz: fs_hz / n as f64,
            magnitudes: self.buf[..=n / 2].iter().map(|c| c.norm()).collect(),
            n,
        })
    }
}

/// Magnitude spectrum of a single window with no taper.
pub fn magnitude_spectrum(w: &RawWindow) -> Result<Spectrum> {
    SpectrumAnalyzer::default().analyze(&w.samples, w.fs_hz)
}
