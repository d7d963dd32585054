//! Run configuration, loaded from TOML and overridable from the command line.
//!
//! ```toml
//! window_seconds = 10.0
//! seed = 7
//! label_delay = 0          # steps, or "never"
//! label_visibility = 1.0
//! leave_out = 5
//! min_features = 10
//! calibration_fraction = 1.0
//! band_stat = "mean"
//!
//! [model]
//! rho0 = 0.1
//! delta = 0.1
//! h_r = 200                # or "inf"
//! rho_min = 0.01
//! rho_max = 1.0
//!
//! [extractor]
//! scale = "magnitude"      # or "power"
//! taper = "rectangular"    # or "hann"
//! ```

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::eval::LabelDelay;
use crate::features::{BandStat, FeatureExtractor};
use crate::rule_base::HyperParams;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub window_seconds: f64,
    /// Restrict experiments to these channels (all when absent).
    pub channels: Option<Vec<String>>,
    /// Restrict multi-channel runs to these feature columns (all when absent).
    pub features: Option<Vec<String>>,
    pub model: HyperParams,
    pub label_delay: LabelDelay,
    /// Fraction of samples whose label is ever revealed.
    pub label_visibility: f64,
    pub seed: u64,
    /// Features dropped per leave-n-out round.
    pub leave_out: usize,
    /// Smallest subset evaluated by the leave-n-out schedule.
    pub min_features: usize,
    /// Leading fraction of the stream used to rank features.
    pub calibration_fraction: f64,
    /// Band statistic summed in the band/class correlation summary.
    pub band_stat: BandStat,
    pub extractor: FeatureExtractor,
    /// Run independent experiments (channels, subsets) concurrently.
    pub parallel: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            window_seconds: 10.0,
            channels: None,
            features: None,
            model: HyperParams::default(),
            label_delay: LabelDelay::Immediate,
            label_visibility: 1.0,
            seed: 7,
            leave_out: 5,
            min_features: 10,
            calibration_fraction: 1.0,
            band_stat: BandStat::Mean,
            extractor: FeatureExtractor::default(),
            parallel: true,
        }
    }
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: RunConfig = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_toml(&text)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config is always representable as TOML")
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Config(m));
        self.model.validate().map_err(|e| Error::Config(e.to_string()))?;
        if !(self.window_seconds.is_finite() && self.window_seconds > 0.0) {
            return bad(format!("window_seconds must be positive, got {}", self.window_seconds));
        }
        if !(0.0..=1.0).contains(&self.label_visibility) {
            return bad(format!(
                "label_visibility must lie in [0, 1], got {}",
                self.label_visibility
            ));
        }
        if !(self.calibration_fraction > 0.0 && self.calibration_fraction <= 1.0) {
            return bad(format!(
                "calibration_fraction must lie in (0, 1], got {}",
                self.calibration_fraction
            ));
        }
        if self.leave_out == 0 {
            return bad("leave_out must be at least 1".into());
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::features::{SpectrumScale, Taper};
    use crate::rule_base::InactivityHorizon;

    #[test]
    fn default_values() {
        let c = RunConfig::default();
        assert_eq!(c.window_seconds, 10.0);
        assert_eq!(c.model, HyperParams::default());
        assert_eq!(c.leave_out, 5);
        assert_eq!(c.label_delay, LabelDelay::Immediate);
        assert_eq!(c.extractor.bands.len(), 5);
    }

    #[test]
    fn parses_partial_file() {
        let c = RunConfig::from_toml(
            r#"
            window_seconds = 30
            label_delay = "never"
            [model]
            h_r = "inf"
            delta = 0.05
            [extractor]
            scale = "power"
            taper = "hann"
            "#,
        )
        .unwrap();
        assert_eq!(c.window_seconds, 30.0);
        assert_eq!(c.label_delay, LabelDelay::Never);
        assert_eq!(c.model.h_r, InactivityHorizon::Infinite);
        assert_eq!(c.model.delta, 0.05);
        assert_eq!(c.model.rho0, 0.1);
        assert_eq!(c.extractor.scale, SpectrumScale::Power);
        assert_eq!(c.extractor.taper, Taper::Hann);
    }

    #[test]
    fn toml_roundtrip() {
        let c = RunConfig {
            channels: Some(vec!["Af3".into()]),
            label_delay: LabelDelay::Steps(3),
            ..RunConfig::default()
        };
        let back = RunConfig::from_toml(&c.to_toml()).unwrap();
        assert_eq!(back, c);
    }

    #[test]
    fn rejects_bad_values() {
        assert!(RunConfig::from_toml("label_visibility = 1.5").is_err());
        assert!(RunConfig::from_toml("window_seconds = -1").is_err());
        assert!(RunConfig::from_toml("[model]\nrho0 = 0").is_err());
        assert!(RunConfig::from_toml("unknown_key = 1").is_err());
    }
}
