//! The evolving rule base: readout, the semi-supervised learning step, the
//! adaptive activation threshold, merging and deletion of granules.

use std::collections::hash_map::DefaultHasher;
use std::fmt;
use std::hash::{Hash, Hasher};

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{check_dim, check_finite, Error, Result};
use crate::granule::{distance_unchecked, labels_compatible, merge_pair, Granule, Label};

/// Number of idle steps after which a granule is deleted.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InactivityHorizon {
    Steps(u64),
    Infinite,
}

impl InactivityHorizon {
    pub fn expired(&self, inactivity: u64) -> bool {
        match *self {
            InactivityHorizon::Steps(h) => inactivity >= h,
            InactivityHorizon::Infinite => false,
        }
    }
}

impl fmt::Display for InactivityHorizon {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InactivityHorizon::Steps(h) => write!(f, "{h}"),
            InactivityHorizon::Infinite => f.write_str("inf"),
        }
    }
}

impl std::str::FromStr for InactivityHorizon {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "inf" | "infinity" | "none" => Ok(InactivityHorizon::Infinite),
            other => other
                .parse::<u64>()
                .map(InactivityHorizon::Steps)
                .map_err(|_| Error::InvalidParameter(format!("bad inactivity horizon {s:?}"))),
        }
    }
}

// serialized as an integer, or the string "inf"
impl Serialize for InactivityHorizon {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            InactivityHorizon::Steps(h) => s.serialize_u64(*h),
            InactivityHorizon::Infinite => s.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for InactivityHorizon {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Int(u64),
            Text(String),
        }
        match Repr::deserialize(d)? {
            Repr::Int(h) => Ok(InactivityHorizon::Steps(h)),
            Repr::Text(t) => t.parse().map_err(serde::de::Error::custom),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct HyperParams {
    /// Initial activation threshold.
    pub rho0: f64,
    /// Merge distance threshold.
    pub delta: f64,
    pub h_r: InactivityHorizon,
    pub rho_min: f64,
    pub rho_max: f64,
}

impl Default for HyperParams {
    fn default() -> Self {
        Self {
            rho0: 0.1,
            delta: 0.1,
            h_r: InactivityHorizon::Steps(200),
            rho_min: 0.01,
            rho_max: 1.0,
        }
    }
}

impl HyperParams {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidParameter(m));
        if !(self.rho_min > 0.0 && self.rho_min <= self.rho_max && self.rho_max <= 1.0) {
            return bad(format!(
                "rho bounds must satisfy 0 < rho_min <= rho_max <= 1, got [{}, {}]",
                self.rho_min, self.rho_max
            ));
        }
        if !(self.rho0 > 0.0 && self.rho0 <= 1.0) {
            return bad(format!("rho0 must lie in (0, 1], got {}", self.rho0));
        }
        if !(self.delta.is_finite() && self.delta > 0.0) {
            return bad(format!("delta must be positive, got {}", self.delta));
        }
        if self.h_r == InactivityHorizon::Steps(0) {
            return bad("h_r must be at least 1".into());
        }
        Ok(())
    }
}

/// Readout of the rule base for one input.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassEstimate {
    pub label: Option<Label>,
    pub winning_rule: Option<usize>,
    pub activation: f64,
}

impl ClassEstimate {
    const NONE: ClassEstimate = ClassEstimate {
        label: None,
        winning_rule: None,
        activation: 0.0,
    };
}

/// Structural change recorded during a learning step. Granules are referred
/// to by id.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "event", rename_all = "snake_case")]
pub enum RuleEvent {
    Created { id: u64, label: Option<Label> },
    Labeled { id: u64, label: Label },
    Merged { kept: u64, removed: u64, distance: f64 },
    Deleted { id: u64 },
}

impl RuleEvent {
    pub fn kind(&self) -> &'static str {
        match self {
            RuleEvent::Created { .. } => "create",
            RuleEvent::Labeled { .. } => "label",
            RuleEvent::Merged { .. } => "merge",
            RuleEvent::Deleted { .. } => "delete",
        }
    }
}

/// What happened during one [`RuleBase::learn_step`].
#[derive(Debug, Clone, PartialEq)]
pub struct StepTrace {
    pub step: u64,
    /// Id of the granule that absorbed the sample, if any.
    pub adapted: Option<u64>,
    pub events: Vec<RuleEvent>,
    pub rho: f64,
    pub rules: usize,
}

impl StepTrace {
    pub fn created(&self) -> bool {
        self.events.iter().any(|e| matches!(e, RuleEvent::Created { .. }))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RuleBase {
    dim: usize,
    params: HyperParams,
    rho: f64,
    sigma_avg_prev: Option<f64>,
    step: u64,
    next_id: u64,
    granules: Vec<Granule>,
}

impl RuleBase {
    pub fn new(dim: usize, params: HyperParams) -> Result<Self> {
        params.validate()?;
        if dim == 0 {
            return Err(Error::InvalidParameter("feature dimension must be positive".into()));
        }
        Ok(Self {
            dim,
            params,
            rho: params.rho0.clamp(params.rho_min, params.rho_max),
            sigma_avg_prev: None,
            step: 0,
            next_id: 0,
            granules: Vec::new(),
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn params(&self) -> &HyperParams {
        &self.params
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    pub fn step(&self) -> u64 {
        self.step
    }

    pub fn len(&self) -> usize {
        self.granules.len()
    }

    pub fn is_empty(&self) -> bool {
        self.granules.is_empty()
    }

    pub fn granules(&self) -> &[Granule] {
        &self.granules
    }

    /// Inserts a prepared granule (used to seed a model or restore state).
    /// Returns its index.
    pub fn push_granule(&mut self, mut g: Granule) -> Result<usize> {
        check_dim(self.dim, g.dim())?;
        g.id = self.next_id;
        self.next_id += 1;
        self.granules.push(g);
        Ok(self.granules.len() - 1)
    }

    fn validate_input(&self, x: &[f64]) -> Result<()> {
        check_dim(self.dim, x.len())?;
        check_finite(x)
    }

    /// Activation of every granule for `x`, in rule order.
    pub fn activations(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.validate_input(x)?;
        Ok(self.granules.iter().map(|g| g.activation_unchecked(x)).collect())
    }

    /// Class of the most active labeled granule; ties go to the larger update
    /// count, then the lower index.
    pub fn classify(&self, x: &[f64]) -> Result<ClassEstimate> {
        self.validate_input(x)?;
        let mut best: Option<(usize, f64)> = None;
        for (i, g) in self.granules.iter().enumerate() {
            if g.label.is_none() {
                continue;
            }
            let a = g.activation_unchecked(x);
            let better = match best {
                None => true,
                Some((j, b)) => a > b || (a == b && g.update_count > self.granules[j].update_count),
            };
            if better {
                best = Some((i, a));
            }
        }
        Ok(match best {
            Some((i, a)) => ClassEstimate {
                label: self.granules[i].label,
                winning_rule: Some(i),
                activation: a,
            },
            None => ClassEstimate::NONE,
        })
    }

    /// Index of the granule that should absorb `x`, or `None` when a new
    /// granule must be created.
    pub fn select_adaptation_rule(&self, x: &[f64], y: Option<Label>) -> Result<Option<usize>> {
        let act = self.activations(x)?;
        Ok(self.select_from(&act, y))
    }

    fn select_from(&self, act: &[f64], y: Option<Label>) -> Option<usize> {
        let mut best: Option<usize> = None;
        for (i, g) in self.granules.iter().enumerate() {
            if act[i] <= self.rho {
                continue;
            }
            if let Some(y) = y {
                if !labels_compatible(g.label, Some(y)) {
                    continue;
                }
            }
            let better = match best {
                None => true,
                Some(j) => act[i] > act[j] || (act[i] == act[j] && g.update_count > self.granules[j].update_count),
            };
            if better {
                best = Some(i);
            }
        }
        best
    }

    /// One online learning step on `x` with optional label `y`.
    ///
    /// Order within the step: adapt or create, threshold update, merge (at
    /// most one pair), deletion sweep. An invalid sample leaves the rule base
    /// untouched.
    pub fn learn_step(&mut self, x: &[f64], y: Option<Label>) -> Result<StepTrace> {
        self.validate_input(x)?;
        let mut events = Vec::new();

        let act: Vec<f64> = self.granules.iter().map(|g| g.activation_unchecked(x)).collect();
        let selected = self.select_from(&act, y);

        let adapted = match selected {
            None => {
                let id = self.next_id;
                self.next_id += 1;
                self.granules.push(Granule::with_id(id, x, y)?);
                events.push(RuleEvent::Created { id, label: y });
                None
            }
            Some(i) => {
                let g = &mut self.granules[i];
                if let (None, Some(label)) = (g.label, y) {
                    g.label = Some(label);
                    events.push(RuleEvent::Labeled { id: g.id, label });
                }
                g.absorb(x, None);
                Some(g.id)
            }
        };

        let fresh = match selected {
            Some(i) => i,
            None => self.granules.len() - 1,
        };
        for (i, g) in self.granules.iter_mut().enumerate() {
            if i != fresh {
                g.tick_inactive();
            }
        }

        self.update_threshold();
        if let Some(e) = self.maybe_merge() {
            events.push(e);
        }
        events.extend(self.prune_inactive());
        self.step += 1;

        Ok(StepTrace {
            step: self.step,
            adapted,
            events,
            rho: self.rho,
            rules: self.granules.len(),
        })
    }

    /// Mean dispersion over all granules and dimensions.
    pub fn average_dispersion(&self) -> Option<f64> {
        if self.granules.is_empty() {
            return None;
        }
        let total: f64 = self
            .granules
            .iter()
            .flat_map(|g| g.memberships.iter().map(|m| m.sigma))
            .sum();
        Some(total / (self.granules.len() * self.dim) as f64)
    }

    /// Rescales the threshold by the ratio of the current to the previous
    /// average dispersion. No-op on an empty rule base.
    pub fn update_threshold(&mut self) {
        let Some(avg) = self.average_dispersion() else {
            return;
        };
        if let Some(prev) = self.sigma_avg_prev {
            self.rho = (avg / prev * self.rho).clamp(self.params.rho_min, self.params.rho_max);
        }
        self.sigma_avg_prev = Some(avg);
    }

    /// Merges the closest label-compatible pair if its distance is within
    /// `delta`.
    pub fn maybe_merge(&mut self) -> Option<RuleEvent> {
        let mut best: Option<(usize, usize, f64)> = None;
        for i in 0..self.granules.len() {
            for j in i + 1..self.granules.len() {
                let (a, b) = (&self.granules[i], &self.granules[j]);
                if !labels_compatible(a.label, b.label) {
                    continue;
                }
                let d = distance_unchecked(a, b);
                if best.is_none_or(|(_, _, bd)| d < bd) {
                    best = Some((i, j, d));
                }
            }
        }
        let (i, j, d) = best?;
        if d > self.params.delta {
            return None;
        }
        let merged =
            merge_pair(&self.granules[i], &self.granules[j]).expect("pair was checked for label compatibility");
        let removed = self.granules.remove(j);
        self.granules[i] = merged;
        Some(RuleEvent::Merged {
            kept: self.granules[i].id,
            removed: removed.id,
            distance: d,
        })
    }

    /// Deletes granules idle for at least `h_r` steps.
    pub fn prune_inactive(&mut self) -> Vec<RuleEvent> {
        let horizon = self.params.h_r;
        let mut events = Vec::new();
        self.granules.retain(|g| {
            let keep = !horizon.expired(g.inactivity);
            if !keep {
                events.push(RuleEvent::Deleted { id: g.id });
            }
            keep
        });
        events
    }

    /// Hash of the full model state. Identical states hash identically within
    /// one build of the library.
    pub fn fingerprint(&self) -> u64 {
        let mut h = DefaultHasher::new();
        self.step.hash(&mut h);
        self.rho.to_bits().hash(&mut h);
        self.sigma_avg_prev.map(f64::to_bits).hash(&mut h);
        for g in &self.granules {
            g.id.hash(&mut h);
            g.label.hash(&mut h);
            g.update_count.hash(&mut h);
            g.inactivity.hash(&mut h);
            for m in &g.memberships {
                m.mu.to_bits().hash(&mut h);
                m.sigma.to_bits().hash(&mut h);
            }
        }
        h.finish()
    }

    /// Pretty-printed JSON snapshot.
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    /// Restores a snapshot written by [`RuleBase::to_json`], validating it.
    pub fn from_json(text: &str) -> Result<Self> {
        let rb: RuleBase = serde_json::from_str(text)?;
        rb.params.validate()?;
        if rb.dim == 0 {
            return Err(Error::InvalidParameter("snapshot has zero dimension".into()));
        }
        for g in &rb.granules {
            check_dim(rb.dim, g.dim())?;
            Granule::from_parts(g.memberships.clone(), g.label, g.update_count, g.inactivity)?;
        }
        if !(rb.rho.is_finite() && rb.rho > 0.0) {
            return Err(Error::InvalidParameter(format!("snapshot rho {} out of range", rb.rho)));
        }
        Ok(rb)
    }
}
