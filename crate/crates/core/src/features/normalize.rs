use serde::{Deserialize, Serialize};

use crate::error::{check_dim, Result};

/// Causal running min-max scaler into the unit hypercube.
///
/// Each call first widens the running range with the incoming vector, then
/// maps `v -> (v - min) / (max - min + eps)` and clips to `[0, 1]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NormalizerState {
    min: Vec<f64>,
    max: Vec<f64>,
    eps: f64,
    seen: u64,
}

impl NormalizerState {
    pub const DEFAULT_EPS: f64 = 1e-9;

    pub fn new(dim: usize) -> Self {
        Self::with_eps(dim, Self::DEFAULT_EPS)
    }

    pub fn with_eps(dim: usize, eps: f64) -> Self {
        Self {
            min: vec![f64::INFINITY; dim],
            max: vec![f64::NEG_INFINITY; dim],
            eps,
            seen: 0,
        }
    }

    pub fn dim(&self) -> usize {
        self.min.len()
    }

    pub fn seen(&self) -> u64 {
        self.seen
    }

    pub fn range(&self, j: usize) -> (f64, f64) {
        (self.min[j], self.max[j])
    }

    pub fn normalize(&mut self, f: &[f64]) -> Result<Vec<f64>> {
        check_dim(self.dim(), f.len())?;
        self.seen += 1;
        Ok(f.iter()
            .enumerate()
            .map(|(j, &v)| {
                self.min[j] = self.min[j].min(v);
                self.max[j] = self.max[j].max(v);
                ((v - self.min[j]) / (self.max[j] - self.min[j] + self.eps)).clamp(0.0, 1.0)
            })
            .collect())
    }
}
