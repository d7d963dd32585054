//! Gaussian membership functions and the single-granule statistics that the
//! rule base is built from.
//!
//! A granule carries one Gaussian per feature dimension. Its activation for an
//! input is the minimum membership degree across dimensions, and it absorbs
//! samples through recursive mean/dispersion updates without storing data.

use std::f64::consts::PI;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{check_dim, check_finite, Error, Result};

/// Upper dispersion bound, and the width every new granule starts with.
pub const SIGMA_MAX: f64 = 1.0 / (2.0 * PI);
/// Lower dispersion bound.
pub const SIGMA_MIN: f64 = 1.0 / (4.0 * PI);

/// Keeps a dispersion inside `[SIGMA_MIN, SIGMA_MAX]`.
#[inline]
pub fn clamp_dispersion(sigma: f64) -> f64 {
    sigma.clamp(SIGMA_MIN, SIGMA_MAX)
}

/// Class identifier attached to a granule.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Label(pub u32);

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// `exp(-(x - mu)^2 / (2 sigma^2))`, height 1 at `mu`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GaussianMembership {
    pub mu: f64,
    pub sigma: f64,
}

impl GaussianMembership {
    pub fn new(mu: f64, sigma: f64) -> Result<Self> {
        if !mu.is_finite() {
            return Err(Error::NonFinite { index: 0 });
        }
        if !(sigma.is_finite() && sigma > 0.0) {
            return Err(Error::InvalidDispersion(sigma));
        }
        Ok(Self { mu, sigma })
    }

    /// Membership degree of `x`.
    pub fn degree(&self, x: f64) -> Result<f64> {
        if !x.is_finite() {
            return Err(Error::NonFinite { index: 0 });
        }
        if !(self.sigma.is_finite() && self.sigma > 0.0) {
            return Err(Error::InvalidDispersion(self.sigma));
        }
        Ok((-self.exponent(x)).exp())
    }

    #[inline]
    fn exponent(&self, x: f64) -> f64 {
        let d = x - self.mu;
        d * d / (2.0 * self.sigma * self.sigma)
    }
}

/// One fuzzy rule: `IF x_1 is A_1 AND ... AND x_n is A_n THEN class`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Granule {
    /// Serial number assigned by the owning rule base; stable across merges
    /// (the merged granule keeps the id of its lower-indexed parent).
    pub(crate) id: u64,
    pub(crate) memberships: Vec<GaussianMembership>,
    pub(crate) label: Option<Label>,
    pub(crate) update_count: u64,
    pub(crate) inactivity: u64,
}

impl Granule {
    /// New granule centred on `x` with the widest allowed dispersion.
    pub fn new(x: &[f64], label: Option<Label>) -> Result<Self> {
        Self::with_id(0, x, label)
    }

    pub(crate) fn with_id(id: u64, x: &[f64], label: Option<Label>) -> Result<Self> {
        check_finite(x)?;
        if x.is_empty() {
            return Err(Error::InvalidParameter("granule needs at least one dimension".into()));
        }
        Ok(Self {
            id,
            memberships: x
                .iter()
                .map(|&mu| GaussianMembership { mu, sigma: SIGMA_MAX })
                .collect(),
            label,
            update_count: 1,
            inactivity: 0,
        })
    }

    /// Builds a granule from explicit parameters. Dispersions are taken as
    /// given (not clamped) so that tests and snapshots can seed arbitrary
    /// states; `update_count` must be at least 1.
    pub fn from_parts(
        memberships: Vec<GaussianMembership>,
        label: Option<Label>,
        update_count: u64,
        inactivity: u64,
    ) -> Result<Self> {
        if memberships.is_empty() {
            return Err(Error::InvalidParameter("granule needs at least one dimension".into()));
        }
        for m in &memberships {
            GaussianMembership::new(m.mu, m.sigma)?;
        }
        if update_count == 0 {
            return Err(Error::InvalidParameter("update_count must be >= 1".into()));
        }
        Ok(Self {
            id: 0,
            memberships,
            label,
            update_count,
            inactivity,
        })
    }

    pub fn id(&self) -> u64 {
        self.id
    }

    pub fn dim(&self) -> usize {
        self.memberships.len()
    }

    pub fn memberships(&self) -> &[GaussianMembership] {
        &self.memberships
    }

    pub fn label(&self) -> Option<Label> {
        self.label
    }

    pub fn update_count(&self) -> u64 {
        self.update_count
    }

    pub fn inactivity(&self) -> u64 {
        self.inactivity
    }

    /// Sets the class of an unlabeled granule. A defined label never changes.
    pub fn assign_label(&mut self, label: Label) -> Result<()> {
        match self.label {
            None => {
                self.label = Some(label);
                Ok(())
            }
            Some(l) if l == label => Ok(()),
            Some(l) => Err(Error::ConflictingLabels(l, label)),
        }
    }

    pub(crate) fn tick_inactive(&mut self) {
        self.inactivity += 1;
    }

    /// Minimum membership degree over all dimensions.
    pub fn activation(&self, x: &[f64]) -> Result<f64> {
        check_dim(self.dim(), x.len())?;
        check_finite(x)?;
        Ok(self.activation_unchecked(x))
    }

    /// Activation without validation; callers guarantee `x.len() == dim` and
    /// finite entries. `exp` is monotone, so the minimum degree is
    /// `exp(-max exponent)` and only one `exp` is evaluated.
    #[inline]
    pub(crate) fn activation_unchecked(&self, x: &[f64]) -> f64 {
        let worst = self
            .memberships
            .iter()
            .zip(x)
            .map(|(m, &xj)| m.exponent(xj))
            .fold(0.0_f64, f64::max);
        (-worst).exp()
    }

    /// Folds `x` into the running mean and dispersion, clamps the dispersion,
    /// and resets the inactivity counter.
    pub fn absorb_sample(&mut self, x: &[f64]) -> Result<()> {
        check_dim(self.dim(), x.len())?;
        check_finite(x)?;
        self.absorb(x, None);
        Ok(())
    }

    /// Same as [`Granule::absorb_sample`], returning the dispersions as they
    /// were before clamping.
    pub fn absorb_sample_raw(&mut self, x: &[f64]) -> Result<Vec<f64>> {
        check_dim(self.dim(), x.len())?;
        check_finite(x)?;
        let mut raw = Vec::with_capacity(x.len());
        self.absorb(x, Some(&mut raw));
        Ok(raw)
    }

    pub(crate) fn absorb(&mut self, x: &[f64], mut raw: Option<&mut Vec<f64>>) {
        // the creating sample counts as the first, so w >= 2 here
        let w = (self.update_count + 1) as f64;
        let keep = (w - 1.0) / w;
        for (m, &xj) in self.memberships.iter_mut().zip(x) {
            let mu_old = m.mu;
            let innovation = xj - mu_old;
            m.mu = ((w - 1.0) * mu_old + xj) / w;
            let sigma = (keep * m.sigma * m.sigma + innovation * innovation / w).sqrt();
            if let Some(raw) = raw.as_deref_mut() {
                raw.push(sigma);
            }
            m.sigma = clamp_dispersion(sigma);
        }
        self.update_count = self.update_count.saturating_add(1);
        self.inactivity = 0;
    }
}

/// Distance between two Gaussian granules: mean over dimensions of
/// `|mu1 - mu2| + (sqrt(sigma1) - sqrt(sigma2))^2`.
pub fn granule_distance(a: &Granule, b: &Granule) -> Result<f64> {
    check_dim(a.dim(), b.dim())?;
    Ok(distance_unchecked(a, b))
}

#[inline]
pub(crate) fn distance_unchecked(a: &Granule, b: &Granule) -> f64 {
    let total: f64 = a
        .memberships
        .iter()
        .zip(&b.memberships)
        .map(|(p, q)| (p.mu - q.mu).abs() + p.sigma + q.sigma - 2.0 * (p.sigma * q.sigma).sqrt())
        .sum();
    total / a.dim() as f64
}

/// Labels that may share a granule: equal, or at least one undefined.
pub fn labels_compatible(a: Option<Label>, b: Option<Label>) -> bool {
    match (a, b) {
        (Some(x), Some(y)) => x == y,
        _ => true,
    }
}

/// Per-dimension `(mu, sigma)` of the merge of `a` and `b`, before the
/// dispersion is clamped.
pub fn merged_parameters(a: &Granule, b: &Granule) -> Result<Vec<(f64, f64)>> {
    check_dim(a.dim(), b.dim())?;
    Ok(a.memberships
        .iter()
        .zip(&b.memberships)
        .map(|(p, q)| {
            let wp = p.sigma / q.sigma;
            let wq = q.sigma / p.sigma;
            ((wp * p.mu + wq * q.mu) / (wp + wq), p.sigma + q.sigma)
        })
        .collect())
}

/// Combines two label-compatible granules into one.
///
/// The result keeps `a`'s id, the defined label (if any), the summed update
/// count and the smaller inactivity counter.
pub fn merge_pair(a: &Granule, b: &Granule) -> Result<Granule> {
    if let (Some(x), Some(y)) = (a.label, b.label) {
        if x != y {
            return Err(Error::ConflictingLabels(x, y));
        }
    }
    let memberships = merged_parameters(a, b)?
        .into_iter()
        .map(|(mu, sigma)| GaussianMembership {
            mu,
            sigma: clamp_dispersion(sigma),
        })
        .collect();
    Ok(Granule {
        id: a.id,
        memberships,
        label: a.label.or(b.label),
        update_count: a.update_count.saturating_add(b.update_count),
        inactivity: a.inactivity.min(b.inactivity),
    })
}
