//! Spearman-correlation feature scoring, leave-n-features-out schedules and
//! per-band class-correlation summaries.

use std::cmp::Ordering;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{check_finite, Error, Result};
use crate::features::{Band, BandStat, FeatureLayout};
use crate::granule::Label;

/// 1-based ranks; tied values share the average of the ranks they span.
pub fn fractional_ranks(x: &[f64]) -> Result<Vec<f64>> {
    check_finite(x)?;
    let mut order: Vec<usize> = (0..x.len()).collect();
    order.sort_by(|&a, &b| x[a].partial_cmp(&x[b]).unwrap_or(Ordering::Equal));
    let mut ranks = vec![0.0; x.len()];
    let mut i = 0;
    while i < order.len() {
        let mut j = i + 1;
        while j < order.len() && x[order[j]] == x[order[i]] {
            j += 1;
        }
        // positions i..j (0-based) hold ranks i+1..=j
        let avg = (i + 1 + j) as f64 / 2.0;
        for &k in &order[i..j] {
            ranks[k] = avg;
        }
        i = j;
    }
    Ok(ranks)
}

/// Rank vector centred on its mean, with its Euclidean norm.
#[derive(Debug, Clone)]
struct CenteredRanks {
    ranks: Vec<f64>,
    centered: Vec<f64>,
    norm: f64,
}

impl CenteredRanks {
    fn new(x: &[f64]) -> Result<Self> {
        let ranks = fractional_ranks(x)?;
        let mean = (x.len() + 1) as f64 / 2.0;
        let centered: Vec<f64> = ranks.iter().map(|r| r - mean).collect();
        let norm = centered.iter().map(|c| c * c).sum::<f64>().sqrt();
        Ok(Self { ranks, centered, norm })
    }

    fn is_constant(&self) -> bool {
        self.norm == 0.0
    }

    fn correlation(&self, other: &Self) -> Result<f64> {
        if self.is_constant() || other.is_constant() {
            return Err(Error::UndefinedCorrelation);
        }
        if self.ranks == other.ranks {
            return Ok(1.0);
        }
        let n1 = (self.ranks.len() + 1) as f64;
        if self.ranks.iter().zip(&other.ranks).all(|(a, b)| a + b == n1) {
            return Ok(-1.0);
        }
        let dot: f64 = self.centered.iter().zip(&other.centered).map(|(a, b)| a * b).sum();
        Ok((dot / (self.norm * other.norm)).clamp(-1.0, 1.0))
    }

    /// Absolute correlation, 0 when undefined.
    fn relevance(&self, other: &Self) -> f64 {
        self.correlation(other).map_or(0.0, f64::abs)
    }
}

/// Spearman rank correlation with mid-ranks for ties.
pub fn spearman(u: &[f64], v: &[f64]) -> Result<f64> {
    if u.len() != v.len() {
        return Err(Error::DimensionMismatch {
            expected: u.len(),
            got: v.len(),
        });
    }
    if u.len() < 2 {
        return Err(Error::InvalidParameter("spearman needs at least 2 points".into()));
    }
    CenteredRanks::new(u)?.correlation(&CenteredRanks::new(v)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FeatureScore {
    pub feature: usize,
    /// `|spearman(feature, labels)|`.
    pub relevance: f64,
    /// Mean `|spearman|` against every other feature.
    pub redundancy: f64,
    pub score: f64,
    /// 1-based position in the ranking.
    pub rank: usize,
}

fn labels_as_f64(labels: &[Label]) -> Vec<f64> {
    labels.iter().map(|l| l.0 as f64).collect()
}

fn column(samples: &[Vec<f64>], j: usize) -> Vec<f64> {
    samples.iter().map(|s| s[j]).collect()
}

/// Scores every feature as relevance minus redundancy and sorts best first;
/// equal scores keep feature-index order. Class indices are treated as an
/// ordinal target.
pub fn rank_features(samples: &[Vec<f64>], labels: &[Label]) -> Result<Vec<FeatureScore>> {
    if samples.len() < 2 {
        return Err(Error::InvalidParameter("ranking needs at least 2 samples".into()));
    }
    if samples.len() != labels.len() {
        return Err(Error::DimensionMismatch {
            expected: samples.len(),
            got: labels.len(),
        });
    }
    let dim = samples[0].len();
    if let Some(bad) = samples.iter().find(|s| s.len() != dim) {
        return Err(Error::DimensionMismatch {
            expected: dim,
            got: bad.len(),
        });
    }
    let first = labels[0];
    if labels.iter().all(|&l| l == first) {
        return Err(Error::InvalidParameter(
            "ranking needs at least 2 distinct labels".into(),
        ));
    }

    let target = CenteredRanks::new(&labels_as_f64(labels))?;
    let cols: Vec<CenteredRanks> = (0..dim)
        .into_par_iter()
        .map(|j| CenteredRanks::new(&column(samples, j)))
        .collect::<Result<_>>()?;

    let mut scores: Vec<FeatureScore> = (0..dim)
        .into_par_iter()
        .map(|i| {
            let relevance = cols[i].relevance(&target);
            let redundancy = if dim > 1 {
                (0..dim)
                    .filter(|&j| j != i)
                    .map(|j| cols[i].relevance(&cols[j]))
                    .sum::<f64>()
                    / (dim - 1) as f64
            } else {
                0.0
            };
            FeatureScore {
                feature: i,
                relevance,
                redundancy,
                score: relevance - redundancy,
                rank: 0,
            }
        })
        .collect();
    scores.sort_by(|a, b| {
        b.score
            .partial_cmp(&a.score)
            .unwrap_or(Ordering::Equal)
            .then(a.feature.cmp(&b.feature))
    });
    for (k, s) in scores.iter_mut().enumerate() {
        s.rank = k + 1;
    }
    Ok(scores)
}

/// Nested feature subsets of sizes `dim, dim - n, dim - 2n, ...`, each made of
/// the best-ranked features, stopping at the last size `>= max(min_size, 1)`.
/// Indices within a subset are sorted ascending.
pub fn leave_n_out_schedule(
    ranking: &[FeatureScore],
    n: usize,
    dim: usize,
    min_size: usize,
) -> Result<Vec<Vec<usize>>> {
    if n == 0 || n >= dim {
        return Err(Error::InvalidParameter(format!(
            "need 1 <= n < dim, got n = {n}, dim = {dim}"
        )));
    }
    if ranking.len() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            got: ranking.len(),
        });
    }
    let floor = min_size.max(1);
    let mut out = Vec::new();
    let mut size = dim;
    while size >= floor {
        let mut subset: Vec<usize> = ranking[..size].iter().map(|s| s.feature).collect();
        subset.sort_unstable();
        out.push(subset);
        if size <= n {
            break;
        }
        size -= n;
    }
    Ok(out)
}

/// Brain hemisphere of a 10-20 electrode: odd suffix left, even right,
/// anything else (e.g. midline `z`) neither.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Hemisphere {
    Left,
    Right,
    Midline,
}

pub fn hemisphere(channel: &str) -> Hemisphere {
    let digits: String = channel
        .chars()
        .rev()
        .take_while(|c| c.is_ascii_digit())
        .collect::<Vec<_>>()
        .into_iter()
        .rev()
        .collect();
    match digits.parse::<u32>() {
        Ok(d) if d % 2 == 1 => Hemisphere::Left,
        Ok(_) => Hemisphere::Right,
        Err(_) => Hemisphere::Midline,
    }
}

/// Sum over channels of `|spearman(band feature, labels)|`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BandCorrelation {
    pub band: Band,
    pub global: f64,
    pub left: f64,
    pub right: f64,
}

/// Per-band sums of absolute class correlations, using the given statistic
/// of each band.
pub fn band_class_correlation(
    samples: &[Vec<f64>],
    labels: &[Label],
    layout: &FeatureLayout,
    stat: BandStat,
) -> Result<Vec<BandCorrelation>> {
    if samples.len() != labels.len() {
        return Err(Error::DimensionMismatch {
            expected: samples.len(),
            got: labels.len(),
        });
    }
    if samples.len() < 2 {
        return Err(Error::InvalidParameter("need at least 2 samples".into()));
    }
    if let Some(bad) = samples.iter().find(|s| s.len() != layout.dim()) {
        return Err(Error::DimensionMismatch {
            expected: layout.dim(),
            got: bad.len(),
        });
    }
    let target = CenteredRanks::new(&labels_as_f64(labels))?;
    layout
        .bands
        .iter()
        .enumerate()
        .map(|(b, &band)| {
            let mut out = BandCorrelation {
                band,
                global: 0.0,
                left: 0.0,
                right: 0.0,
            };
            for (c, ch) in layout.channels.iter().enumerate() {
                let col = column(samples, layout.index(c, b, stat));
                let r = CenteredRanks::new(&col)?.relevance(&target);
                out.global += r;
                match hemisphere(ch) {
                    Hemisphere::Left => out.left += r,
                    Hemisphere::Right => out.right += r,
                    Hemisphere::Midline => {}
                }
            }
            Ok(out)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn perfect_monotone() {
        assert_eq!(spearman(&[1.0, 2.0, 3.0, 4.0], &[10.0, 20.0, 30.0, 40.0]).unwrap(), 1.0);
        assert_eq!(spearman(&[1.0, 2.0, 3.0, 4.0], &[8.0, 6.0, 4.0, 2.0]).unwrap(), -1.0);
    }

    #[test]
    fn ties_get_average_ranks() {
        assert_eq!(
            fractional_ranks(&[1.0, 2.0, 2.0, 4.0]).unwrap(),
            vec![1.0, 2.5, 2.5, 4.0]
        );
        assert_eq!(fractional_ranks(&[3.0, 3.0, 3.0]).unwrap(), vec![2.0; 3]);
    }

    #[test]
    fn tied_example() {
        // ranks u = (1, 2.5, 2.5, 4), v = (1, 3, 2, 4); centred dot = 4.5,
        // |u| = sqrt(4.5), |v| = sqrt(5)
        let r = spearman(&[1.0, 2.0, 2.0, 4.0], &[1.0, 3.0, 2.0, 4.0]).unwrap();
        assert!((r - 4.5 / (4.5f64 * 5.0).sqrt()).abs() < 1e-15);
    }

    #[test]
    fn constant_input_is_undefined() {
        assert!(matches!(
            spearman(&[1.0, 1.0, 1.0], &[1.0, 2.0, 3.0]),
            Err(Error::UndefinedCorrelation)
        ));
        assert!(spearman(&[1.0], &[1.0]).is_err());
        assert!(spearman(&[1.0, 2.0], &[1.0]).is_err());
        assert!(spearman(&[1.0, f64::NAN], &[1.0, 2.0]).is_err());
    }

    fn labels(v: &[u32]) -> Vec<Label> {
        v.iter().map(|&l| Label(l)).collect()
    }

    #[test]
    fn label_copy_ranks_first() {
        let y = [1, 2, 3, 4, 1, 2, 3, 4];
        let samples: Vec<Vec<f64>> = y
            .iter()
            .enumerate()
            .map(|(k, &l)| vec![((k * 5) % 7) as f64, l as f64, ((k * 3) % 8) as f64])
            .collect();
        let r = rank_features(&samples, &labels(&y)).unwrap();
        assert_eq!(r[0].feature, 1);
        assert_eq!(r[0].relevance, 1.0);
        let mut perm: Vec<usize> = r.iter().map(|s| s.feature).collect();
        perm.sort();
        assert_eq!(perm, vec![0, 1, 2]);
        assert_eq!(r.iter().map(|s| s.rank).collect::<Vec<_>>(), vec![1, 2, 3]);
    }

    #[test]
    fn constant_feature_scores_zero_relevance() {
        let y = [1, 2, 1, 2];
        let samples: Vec<Vec<f64>> = y.iter().map(|&l| vec![5.0, l as f64]).collect();
        let r = rank_features(&samples, &labels(&y)).unwrap();
        let c = r.iter().find(|s| s.feature == 0).unwrap();
        assert_eq!(c.relevance, 0.0);
        assert_eq!(c.redundancy, 0.0);
    }

    #[test]
    fn ranking_preconditions() {
        assert!(rank_features(&[vec![1.0]], &labels(&[1])).is_err());
        assert!(rank_features(&[vec![1.0], vec![2.0]], &labels(&[1, 1])).is_err());
        assert!(rank_features(&[vec![1.0], vec![2.0, 3.0]], &labels(&[1, 2])).is_err());
    }

    #[test]
    fn schedule_sizes() {
        let fake = |dim: usize| -> Vec<FeatureScore> {
            (0..dim)
                .map(|f| FeatureScore {
                    feature: dim - 1 - f,
                    relevance: 0.0,
                    redundancy: 0.0,
                    score: 0.0,
                    rank: f + 1,
                })
                .collect()
        };
        let s = leave_n_out_schedule(&fake(140), 5, 140, 10).unwrap();
        let sizes: Vec<usize> = s.iter().map(Vec::len).collect();
        assert_eq!(sizes, (10..=140).rev().step_by(5).collect::<Vec<_>>());
        assert_eq!(sizes.len(), 27);

        let s = leave_n_out_schedule(&fake(10), 5, 10, 1).unwrap();
        assert_eq!(s.iter().map(Vec::len).collect::<Vec<_>>(), vec![10, 5]);
        // best-ranked survive: features 9..5
        assert_eq!(s[1], vec![5, 6, 7, 8, 9]);

        let s = leave_n_out_schedule(&fake(12), 5, 12, 1).unwrap();
        assert_eq!(s.iter().map(Vec::len).collect::<Vec<_>>(), vec![12, 7, 2]);

        for w in leave_n_out_schedule(&fake(140), 5, 140, 1).unwrap().windows(2) {
            assert!(w[1].iter().all(|f| w[0].contains(f)));
            assert_eq!(w[0].len() - w[1].len(), 5);
        }

        assert!(leave_n_out_schedule(&fake(10), 10, 10, 1).is_err());
        assert!(leave_n_out_schedule(&fake(10), 0, 10, 1).is_err());
    }

    #[test]
    fn hemispheres() {
        assert_eq!(hemisphere("Af3"), Hemisphere::Left);
        assert_eq!(hemisphere("Af4"), Hemisphere::Right);
        assert_eq!(hemisphere("T10"), Hemisphere::Right);
        assert_eq!(hemisphere("Cz"), Hemisphere::Midline);
    }

    #[test]
    fn band_equal_to_label_sums_to_channel_count() {
        let layout = FeatureLayout::new(vec!["Af3".into(), "Af4".into(), "O1".into()]);
        let y = [1u32, 2, 3, 4, 2, 1, 4, 3];
        let samples: Vec<Vec<f64>> = y
            .iter()
            .enumerate()
            .map(|(k, &l)| {
                (0..layout.dim())
                    .map(|f| {
                        let i = layout.info(f);
                        if i.band == Band::Alpha && i.stat == BandStat::Mean {
                            l as f64
                        } else {
                            ((k * 7 + f * 3) % 5) as f64
                        }
                    })
                    .collect()
            })
            .collect();
        let bc = band_class_correlation(&samples, &labels(&y), &layout, BandStat::Mean).unwrap();
        let alpha = bc.iter().find(|b| b.band == Band::Alpha).unwrap();
        assert_eq!(alpha.global, 3.0);
        assert_eq!(alpha.left, 2.0);
        assert_eq!(alpha.right, 1.0);
    }
}
