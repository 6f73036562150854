//! Univariate l1-fusion clustering: the exact solution path, the Big Merge
//! Tracker for choosing splits from it, and the population-level splitting
//! procedure for known one-dimensional mixtures.

#![allow(clippy::excessive_precision, clippy::neg_cmp_op_on_partial_ord)]

pub mod bmt;
pub mod cli;
pub mod error;
pub mod experiments;
pub mod mixture;
pub mod numeric;
pub mod path;
pub mod population;
pub mod sample;

pub use bmt::{assess_modality, assign_labels, run_bmt, run_bmt_multivariate, BmtConfig, BmtResult};
pub use error::{Error, Result};
pub use mixture::{Component, MixtureModel};
pub use path::{build_merge_path, centroids_at, partition_at_k, split_sequence_oracle, ClusterPath, MergeEvent};
pub use population::{find_population_split, McReport, PopulationConfig, PopulationSplit, SplitOutcome};
pub use sample::SortedSample;
