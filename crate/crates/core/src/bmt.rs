//! The Big Merge Tracker: keeps only those merges of the fusion path in
//! which both merging clusters hold more than `ceil(n * alpha)`
//! observations, and turns each into a split point.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::path::{build_merge_path, ClusterPath, MergeEvent};
use crate::sample::SortedSample;

/// Where a big merge places its split point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SplitRule {
    /// `(left_max * left_size + right_min * right_size) / (left_size + right_size)`.
    #[default]
    Weighted,
    /// `(left_max + right_min) / 2`.
    Midpoint,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct BmtConfig {
    pub alpha: f64,
    /// Drop every split when the last big merge covers under half the sample.
    pub adjustment_enabled: bool,
    pub split_rule: SplitRule,
}

impl Default for BmtConfig {
    fn default() -> Self {
        BmtConfig {
            alpha: 0.1,
            adjustment_enabled: true,
            split_rule: SplitRule::Weighted,
        }
    }
}

impl BmtConfig {
    pub fn with_alpha(alpha: f64) -> Self {
        BmtConfig { alpha, ..Self::default() }
    }

    pub fn validate(&self) -> Result<()> {
        if self.alpha > 0.0 && self.alpha <= 0.5 {
            Ok(())
        } else {
            Err(Error::InvalidConfig(format!("alpha must lie in (0, 0.5], got {}", self.alpha)))
        }
    }

    /// Minimum cluster size a big merge must exceed on both sides.
    pub fn threshold(&self, n: usize) -> usize {
        // Shave off representation error so that e.g. 0.1 * 1000 stays 100.
        (n as f64 * self.alpha - 1e-9).ceil().max(0.0) as usize
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BigMerge {
    pub event: MergeEvent,
    /// Share of the sample in the merged cluster.
    pub mass_after: f64,
    pub split_point: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BmtResult {
    /// Ascending.
    pub split_points: Vec<f64>,
    pub num_clusters: usize,
    /// Every merge that passed the size threshold, in path order.
    pub big_merges: Vec<BigMerge>,
    /// True when the adjustment emptied `split_points`.
    pub adjusted: bool,
}

pub fn run_bmt(sample: &SortedSample, config: &BmtConfig) -> Result<BmtResult> {
    config.validate()?;
    if sample.n() <= 2 {
        return Ok(BmtResult {
            split_points: Vec::new(),
            num_clusters: 1,
            big_merges: Vec::new(),
            adjusted: false,
        });
    }
    run_bmt_on_path(&build_merge_path(sample), config)
}

/// As [`run_bmt`] for a path that has already been built.
pub fn run_bmt_on_path(path: &ClusterPath, config: &BmtConfig) -> Result<BmtResult> {
    config.validate()?;
    let n = path.sample().n();
    let threshold = config.threshold(n);
    let big_merges: Vec<BigMerge> = if n <= 2 {
        Vec::new()
    } else {
        path.events()
            .iter()
            .filter(|e| e.left_size.min(e.right_size) > threshold)
            .map(|e| BigMerge {
                event: *e,
                mass_after: e.merged_size() as f64 / n as f64,
                split_point: split_point(e, config.split_rule),
            })
            .collect()
    };
    let adjusted = config.adjustment_enabled
        && big_merges
            .iter()
            .max_by(|a, b| a.event.lambda.total_cmp(&b.event.lambda))
            .is_some_and(|top| top.mass_after < 0.5);
    let mut split_points: Vec<f64> = if adjusted {
        Vec::new()
    } else {
        big_merges.iter().map(|b| b.split_point).collect()
    };
    split_points.sort_by(f64::total_cmp);
    Ok(BmtResult {
        num_clusters: split_points.len() + 1,
        split_points,
        big_merges,
        adjusted,
    })
}

fn split_point(e: &MergeEvent, rule: SplitRule) -> f64 {
    match rule {
        SplitRule::Weighted => {
            let (sl, sr) = (e.left_size as f64, e.right_size as f64);
            let s = (e.left_max * sl + e.right_min * sr) / (sl + sr);
            // Keep the point strictly inside the gap under rounding.
            s.clamp(e.left_max.next_up(), e.right_min.next_down())
        }
        SplitRule::Midpoint => e.left_max + 0.5 * (e.right_min - e.left_max),
    }
}

/// True iff the BMT keeps at least one split.
pub fn assess_modality(sample: &SortedSample, config: &BmtConfig) -> Result<bool> {
    Ok(!run_bmt(sample, config)?.split_points.is_empty())
}

/// Label of each observation of the sorted sample: the number of split
/// points at or below it.
pub fn assign_labels(sample: &SortedSample, splits: &[f64]) -> Result<Vec<usize>> {
    check_splits(splits)?;
    let mut labels = Vec::with_capacity(sample.n());
    let mut label = 0;
    for (&v, &c) in sample.values().iter().zip(sample.counts()) {
        while label < splits.len() && splits[label] <= v {
            label += 1;
        }
        labels.extend(std::iter::repeat_n(label, c));
    }
    Ok(labels)
}

/// As [`assign_labels`] for raw values in their original order.
pub fn label_values(values: &[f64], splits: &[f64]) -> Result<Vec<usize>> {
    check_splits(splits)?;
    values
        .iter()
        .map(|&v| {
            if v.is_finite() {
                Ok(splits.partition_point(|&s| s <= v))
            } else {
                Err(Error::InvalidSample(format!("non-finite value {v}")))
            }
        })
        .collect()
}

fn check_splits(splits: &[f64]) -> Result<()> {
    if splits.iter().any(|s| !s.is_finite()) {
        return Err(Error::Domain("split points must be finite".into()));
    }
    if splits.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Domain("split points must be strictly increasing".into()));
    }
    Ok(())
}

/// Per-dimension BMT on a data matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MultivariateBmt {
    pub dimensions: Vec<BmtResult>,
    /// Per row, the tuple of per-dimension labels.
    pub labels: Vec<Vec<usize>>,
    /// Product of the per-dimension cluster counts.
    pub num_clusters: usize,
    /// Distinct label tuples that actually occur.
    pub occupied_clusters: usize,
}

/// Runs the BMT on each column independently. `columns[j][i]` is row `i`
/// of dimension `j`.
pub fn run_bmt_multivariate(columns: &[Vec<f64>], config: &BmtConfig) -> Result<MultivariateBmt> {
    config.validate()?;
    let Some(n) = columns.first().map(Vec::len) else {
        return Err(Error::InvalidSample("data has no columns".into()));
    };
    if n == 0 {
        return Err(Error::InvalidSample("data has no rows".into()));
    }
    if let Some(j) = columns.iter().position(|c| c.len() != n) {
        return Err(Error::InvalidSample(format!(
            "column {j} has {} rows, expected {n}",
            columns[j].len()
        )));
    }

    let per_dim: Vec<(BmtResult, Vec<usize>)> = columns
        .par_iter()
        .map(|col| {
            let sample = SortedSample::from_unsorted(col)?;
            let result = run_bmt(&sample, config)?;
            let labels = label_values(col, &result.split_points)?;
            Ok((result, labels))
        })
        .collect::<Result<_>>()?;

    let labels: Vec<Vec<usize>> = (0..n)
        .map(|i| per_dim.iter().map(|(_, l)| l[i]).collect())
        .collect();
    let mut distinct = labels.clone();
    distinct.sort_unstable();
    distinct.dedup();
    let num_clusters = per_dim
        .iter()
        .try_fold(1usize, |acc, (r, _)| acc.checked_mul(r.num_clusters))
        .unwrap_or(usize::MAX);
    Ok(MultivariateBmt {
        dimensions: per_dim.into_iter().map(|(r, _)| r).collect(),
        labels,
        num_clusters,
        occupied_clusters: distinct.len(),
    })
}
