//! Seeded simulation harness for the BMT.
//!
//! Every replicate draws its sample from a seed that depends only on the
//! base seed and the replicate index, so results do not depend on how
//! replicates are scheduled across threads.

use std::collections::BTreeMap;
use std::path::Path;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bmt::{assign_labels, run_bmt_multivariate, run_bmt_on_path, BmtConfig, BmtResult};
use crate::error::{Error, Result};
use crate::mixture::MixtureModel;
use crate::numeric::integrate;
use crate::path::build_merge_path;
use crate::population::{find_population_split_with, PopulationConfig};
use crate::sample::SortedSample;

/// A data-generating model: one mixture, or independent mixtures per
/// coordinate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum DataModel {
    Mixture(MixtureModel),
    Product(Vec<MixtureModel>),
}

impl DataModel {
    pub fn dims(&self) -> usize {
        match self {
            DataModel::Mixture(_) => 1,
            DataModel::Product(d) => d.len(),
        }
    }

    /// Column-major draw of `n` rows.
    pub fn sample(&self, n: usize, seed: u64) -> Vec<Vec<f64>> {
        match self {
            DataModel::Mixture(m) => vec![m.sample(n, seed)],
            DataModel::Product(dims) => dims
                .iter()
                .enumerate()
                .map(|(j, m)| m.sample(n, stream_seed(seed, j as u64)))
                .collect(),
        }
    }
}

impl From<MixtureModel> for DataModel {
    fn from(m: MixtureModel) -> Self {
        DataModel::Mixture(m)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentSpec {
    pub mixture: DataModel,
    pub n: usize,
    pub replicates: usize,
    #[serde(default = "default_alpha")]
    pub alpha: f64,
    #[serde(default)]
    pub base_seed: u64,
    /// When set, MSE statistics only use replicates that find this many
    /// clusters.
    #[serde(default)]
    pub true_k: Option<usize>,
}

fn default_alpha() -> f64 {
    0.1
}

impl ExperimentSpec {
    pub fn new(mixture: impl Into<DataModel>, n: usize, replicates: usize) -> Self {
        ExperimentSpec {
            mixture: mixture.into(),
            n,
            replicates,
            alpha: default_alpha(),
            base_seed: 0,
            true_k: None,
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.base_seed = seed;
        self
    }

    pub fn with_true_k(mut self, k: usize) -> Self {
        self.true_k = Some(k);
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.replicates == 0 || self.n == 0 {
            return Err(Error::InvalidConfig("n and replicates must be positive".into()));
        }
        if self.mixture.dims() == 0 {
            return Err(Error::InvalidConfig("product model has no dimensions".into()));
        }
        self.bmt_config().validate()
    }

    pub fn bmt_config(&self) -> BmtConfig {
        BmtConfig::with_alpha(self.alpha)
    }

    pub fn from_toml_str(text: &str) -> Result<Self> {
        let spec: Self = toml::from_str(text).map_err(|e| Error::InvalidConfig(e.to_string()))?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_toml_str(&std::fs::read_to_string(path)?)
    }

    /// Seed of replicate `r`.
    pub fn replicate_seed(&self, r: usize) -> u64 {
        stream_seed(self.base_seed, r as u64)
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Stable 64-bit hash of `(base, index)`.
pub fn stream_seed(base: u64, index: u64) -> u64 {
    splitmix64(splitmix64(base) ^ index)
}

/// Outcome of a single replicate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReplicateOutcome {
    pub seed: u64,
    pub num_clusters: usize,
    pub mse: Option<f64>,
    pub runtime_seconds: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReplicationSummary {
    pub replicates: usize,
    /// Detected cluster count to number of replicates.
    pub k_histogram: BTreeMap<usize, usize>,
    /// Share of replicates with more than one cluster.
    pub multimodal_rate: f64,
    pub mse_mean: Option<f64>,
    pub mse_sd: Option<f64>,
    /// Replicates that entered the MSE statistics.
    pub mse_count: usize,
    pub oracle_mse: Option<f64>,
    pub mean_runtime_seconds: f64,
    pub outcomes: Vec<ReplicateOutcome>,
}

impl ReplicationSummary {
    fn aggregate(outcomes: Vec<ReplicateOutcome>, true_k: Option<usize>, oracle_mse: Option<f64>) -> Self {
        let replicates = outcomes.len();
        let mut k_histogram = BTreeMap::new();
        for o in &outcomes {
            *k_histogram.entry(o.num_clusters).or_insert(0) += 1;
        }
        let multimodal = outcomes.iter().filter(|o| o.num_clusters > 1).count();
        let mses: Vec<f64> = outcomes
            .iter()
            .filter(|o| true_k.is_none_or(|k| o.num_clusters == k))
            .filter_map(|o| o.mse)
            .collect();
        let (mse_mean, mse_sd) = mean_sd(&mses);
        ReplicationSummary {
            replicates,
            k_histogram,
            multimodal_rate: multimodal as f64 / replicates as f64,
            mse_mean,
            mse_sd,
            mse_count: mses.len(),
            oracle_mse,
            mean_runtime_seconds: outcomes.iter().map(|o| o.runtime_seconds).sum::<f64>() / replicates as f64,
            outcomes,
        }
    }

    /// Most frequent cluster count, the smaller one on ties.
    pub fn modal_k(&self) -> usize {
        self.k_histogram
            .iter()
            .max_by(|a, b| a.1.cmp(b.1).then(b.0.cmp(a.0)))
            .map(|(k, _)| *k)
            .unwrap_or(1)
    }

    /// Share of replicates that found `k` clusters.
    pub fn share(&self, k: usize) -> f64 {
        self.k_histogram.get(&k).copied().unwrap_or(0) as f64 / self.replicates as f64
    }
}

fn mean_sd(xs: &[f64]) -> (Option<f64>, Option<f64>) {
    if xs.is_empty() {
        return (None, None);
    }
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let sd = (xs.len() > 1).then(|| (xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt());
    (Some(mean), sd)
}

fn run_replicates(
    spec: &ExperimentSpec,
    body: impl Fn(&[Vec<f64>]) -> Result<(usize, Option<f64>)> + Sync,
) -> Result<Vec<ReplicateOutcome>> {
    spec.validate()?;
    (0..spec.replicates)
        .into_par_iter()
        .map(|r| {
            let seed = spec.replicate_seed(r);
            let data = spec.mixture.sample(spec.n, seed);
            let start = Instant::now();
            let (num_clusters, mse) = body(&data)?;
            Ok(ReplicateOutcome {
                seed,
                num_clusters,
                mse,
                runtime_seconds: start.elapsed().as_secs_f64(),
            })
        })
        .collect()
}

fn univariate(data: &[Vec<f64>]) -> Result<&[f64]> {
    match data {
        [col] => Ok(col),
        _ => Err(Error::Unsupported("this experiment needs a univariate model".into())),
    }
}

fn bmt_counts(data: &[Vec<f64>], cfg: &BmtConfig) -> Result<usize> {
    if data.len() == 1 {
        let sample = SortedSample::from_unsorted(&data[0])?;
        Ok(run_bmt_on_path(&build_merge_path(&sample), cfg)?.num_clusters)
    } else {
        Ok(run_bmt_multivariate(data, cfg)?.num_clusters)
    }
}

/// Share of replicates in which the BMT keeps at least one split.
pub fn run_modality_experiment(spec: &ExperimentSpec) -> Result<ReplicationSummary> {
    let cfg = spec.bmt_config();
    let outcomes = run_replicates(spec, |data| {
        let sample = SortedSample::from_unsorted(univariate(data)?)?;
        let result = run_bmt_on_path(&build_merge_path(&sample), &cfg)?;
        Ok((result.num_clusters, None))
    })?;
    Ok(ReplicationSummary::aggregate(outcomes, spec.true_k, None))
}

/// Distribution of the BMT cluster count; product models use the
/// per-dimension product rule.
pub fn run_k_experiment(spec: &ExperimentSpec) -> Result<ReplicationSummary> {
    let cfg = spec.bmt_config();
    let outcomes = run_replicates(spec, |data| Ok((bmt_counts(data, &cfg)?, None)))?;
    Ok(ReplicationSummary::aggregate(outcomes, spec.true_k, None))
}

/// Cluster counts, sample MSE and timing at scale, plus the oracle MSE of
/// the true density.
pub fn run_scale_experiment(spec: &ExperimentSpec) -> Result<ReplicationSummary> {
    let DataModel::Mixture(m) = &spec.mixture else {
        return Err(Error::Unsupported("scale experiments need a univariate model".into()));
    };
    let cfg = spec.bmt_config();
    let oracle = oracle_mse(m)?;
    let outcomes = run_replicates(spec, |data| {
        let sample = SortedSample::from_unsorted(univariate(data)?)?;
        let result = run_bmt_on_path(&build_merge_path(&sample), &cfg)?;
        Ok((result.num_clusters, Some(sample_mse(&sample, &result)?)))
    })?;
    Ok(ReplicationSummary::aggregate(outcomes, spec.true_k, Some(oracle)))
}

/// `(1/n) Σ (x_i - mean of x_i's cluster)^2` under the BMT partition.
pub fn sample_mse(sample: &SortedSample, result: &BmtResult) -> Result<f64> {
    let labels = assign_labels(sample, &result.split_points)?;
    let xs = sample.expanded();
    let mut total = 0.0;
    let mut start = 0;
    while start < xs.len() {
        let end = start + labels[start..].iter().take_while(|&&l| l == labels[start]).count();
        let block = &xs[start..end];
        let mean = block.iter().sum::<f64>() / block.len() as f64;
        total += block.iter().map(|x| (x - mean).powi(2)).sum::<f64>();
        start = end;
    }
    Ok(total / xs.len() as f64)
}

/// Expected squared distance to the conditional mean of one's cell, with
/// cells cut at every interior minimum of the density.
pub fn oracle_mse(m: &MixtureModel) -> Result<f64> {
    let (lo, hi) = m.support();
    let mut cuts = vec![lo];
    cuts.extend(m.interior_minima());
    cuts.push(hi);
    let mut total = 0.0;
    for w in cuts.windows(2) {
        let (l, r) = (w[0], w[1]);
        let centre = m.truncated_mean(l, r)?;
        let mut knots: Vec<f64> = m
            .components()
            .iter()
            .map(|c| c.centre())
            .filter(|&c| l < c && c < r)
            .collect();
        knots.sort_by(f64::total_cmp);
        let mut edges = vec![l];
        edges.extend(knots);
        edges.push(r);
        for e in edges.windows(2) {
            total += integrate(|x| (x - centre).powi(2) * m.density(x), e[0], e[1], 1e-11)?;
        }
    }
    Ok(total)
}

/// Hausdorff distance between two finite point sets under the max-norm.
pub fn hausdorff_distance<const D: usize>(a: &[[f64; D]], b: &[[f64; D]]) -> Result<f64> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::Domain("Hausdorff distance needs two non-empty sets".into()));
    }
    let dist = |p: &[f64; D], q: &[f64; D]| p.iter().zip(q).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
    let directed = |from: &[[f64; D]], to: &[[f64; D]]| {
        from.iter()
            .map(|p| to.iter().map(|q| dist(p, q)).fold(f64::INFINITY, f64::min))
            .fold(0.0, f64::max)
    };
    Ok(directed(a, b).max(directed(b, a)))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConsistencyRow {
    pub n: usize,
    /// Median Hausdorff distance between retained and population split
    /// points; replicates without a retained split count as infinite.
    pub median_error: f64,
    pub replicates_without_split: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum ConsistencyReport {
    /// The density has no population split to converge to.
    NoPopulationSplit,
    Checked {
        s_star: f64,
        rows: Vec<ConsistencyRow>,
        non_increasing: bool,
    },
}

/// Median distance between BMT split points and the population split as
/// `n` grows.
pub fn run_consistency_check(
    m: &MixtureModel,
    n_list: &[usize],
    reps: usize,
    base_seed: u64,
    alpha: f64,
) -> Result<ConsistencyReport> {
    let split = find_population_split_with(m, &PopulationConfig { check_second_split: false, ..Default::default() })?;
    let Some((_, s_star, _)) = split.triple() else {
        return Ok(ConsistencyReport::NoPopulationSplit);
    };
    let mut rows = Vec::with_capacity(n_list.len());
    for (i, &n) in n_list.iter().enumerate() {
        let spec = ExperimentSpec {
            alpha,
            base_seed: stream_seed(base_seed, i as u64),
            ..ExperimentSpec::new(m.clone(), n, reps)
        };
        spec.validate()?;
        let cfg = spec.bmt_config();
        let mut errors: Vec<f64> = (0..reps)
            .into_par_iter()
            .map(|r| {
                let data = m.sample(n, spec.replicate_seed(r));
                let sample = SortedSample::from_unsorted(&data)?;
                let result = run_bmt_on_path(&build_merge_path(&sample), &cfg)?;
                let found: Vec<[f64; 1]> = result.split_points.iter().map(|&s| [s]).collect();
                if found.is_empty() {
                    Ok(f64::INFINITY)
                } else {
                    hausdorff_distance(&found, &[[s_star]])
                }
            })
            .collect::<Result<_>>()?;
        errors.sort_by(f64::total_cmp);
        rows.push(ConsistencyRow {
            n,
            median_error: median_sorted(&errors),
            replicates_without_split: errors.iter().filter(|e| e.is_infinite()).count(),
        });
    }
    let non_increasing = rows.windows(2).all(|w| w[1].median_error <= w[0].median_error);
    Ok(ConsistencyReport::Checked { s_star, rows, non_increasing })
}

fn median_sorted(xs: &[f64]) -> f64 {
    let k = xs.len();
    if k % 2 == 1 {
        xs[k / 2]
    } else {
        0.5 * (xs[k / 2 - 1] + xs[k / 2])
    }
}
