//! Exact solution path of the univariate l1-fusion clustering criterion
//!
//! ```text
//! min_a  sum_i (x_i - a_i)^2 + lambda * sum_{i<j} |a_i - a_j|
//! ```
//!
//! As `lambda` grows from zero the optimal centroids only ever fuse, so the
//! whole path is a sequence of adjacent merges. [`build_merge_path`] produces
//! it bottom-up in O(n log n); [`split_sequence_oracle`] recovers the same
//! sequence top-down by exhaustive search and exists to check the former.

use std::ops::Range;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sample::{Prefix, SortedSample};

/// One fusion of two adjacent clusters.
///
/// Index ranges are in observation space over the sorted sample: the left
/// cluster is `first..split` and the right one `split..last`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MergeEvent {
    pub lambda: f64,
    pub left_size: usize,
    pub right_size: usize,
    pub left_mean: f64,
    pub right_mean: f64,
    /// Largest observation of the left cluster.
    pub left_max: f64,
    /// Smallest observation of the right cluster.
    pub right_min: f64,
    /// Observation range `(min, max)` of the merged cluster.
    pub merged_span: (f64, f64),
    pub first: usize,
    pub split: usize,
    pub last: usize,
}

impl MergeEvent {
    pub fn merged_size(&self) -> usize {
        self.left_size + self.right_size
    }

    pub fn left_range(&self) -> Range<usize> {
        self.first..self.split
    }

    pub fn right_range(&self) -> Range<usize> {
        self.split..self.last
    }

    fn between(sample: &SortedSample, lo: usize, mid: usize, hi: usize) -> Self {
        // lo..mid and mid..hi are distinct-value index ranges.
        let left_mean = sample.range_mean(lo, mid);
        let right_mean = sample.range_mean(mid, hi);
        let left_size = sample.range_count(lo, mid);
        let right_size = sample.range_count(mid, hi);
        let values = sample.values();
        MergeEvent {
            lambda: (right_mean - left_mean) / (left_size + right_size) as f64,
            left_size,
            right_size,
            left_mean,
            right_mean,
            left_max: values[mid - 1],
            right_min: values[mid],
            merged_span: (values[lo], values[hi - 1]),
            first: sample.obs_offset(lo),
            split: sample.obs_offset(mid),
            last: sample.obs_offset(hi),
        }
    }
}

/// The full merge sequence for a sample.
///
/// Duplicate observations are fused before the path starts (they share a
/// centroid for every `lambda >= 0`), so a sample with `m` distinct values
/// yields `m - 1` events.
#[derive(Debug, Clone)]
pub struct ClusterPath {
    sample: Arc<SortedSample>,
    events: Vec<MergeEvent>,
}

impl ClusterPath {
    pub fn events(&self) -> &[MergeEvent] {
        &self.events
    }

    pub fn sample(&self) -> &SortedSample {
        &self.sample
    }

    pub fn shared_sample(&self) -> Arc<SortedSample> {
        Arc::clone(&self.sample)
    }

    pub fn lambdas(&self) -> impl Iterator<Item = f64> + '_ {
        self.events.iter().map(|e| e.lambda)
    }

    /// Active clusters, as distinct-value index ranges, after applying the
    /// events selected by `applied`.
    fn distinct_partition_where(
        &self,
        applied: impl Fn(usize, &MergeEvent) -> bool,
    ) -> Vec<Range<usize>> {
        let s = &self.sample;
        let mut open = vec![true; s.distinct() + 1];
        for (k, e) in self.events.iter().enumerate() {
            if applied(k, e) {
                let idx = s
                    .distinct_index_of_offset(e.split)
                    .expect("event splits fall on value boundaries");
                open[idx] = false;
            }
        }
        let mut ranges = Vec::new();
        let mut start = 0usize;
        for (i, &is_open) in open.iter().enumerate().skip(1) {
            if is_open {
                ranges.push(start..i);
                start = i;
            }
        }
        ranges
    }

    fn to_observation_ranges(&self, ranges: Vec<Range<usize>>) -> Vec<Range<usize>> {
        ranges
            .into_iter()
            .map(|r| self.sample.obs_offset(r.start)..self.sample.obs_offset(r.end))
            .collect()
    }

    /// Observation ranges of the clusters active at `lambda`.
    pub fn partition_at_lambda(&self, lambda: f64) -> Vec<Range<usize>> {
        self.to_observation_ranges(self.distinct_partition_where(|_, e| e.lambda <= lambda))
    }
}

/// Tournament tree over cluster slots holding each live pair's distance,
/// keyed by the left slot. Ties go to the smaller slot.
struct PairTree {
    keys: Vec<Vec<f64>>,
    // Empty at the leaf level, where the owner is the leaf position.
    owners: Vec<Vec<u32>>,
}

const FANOUT: usize = 8;
const VACANT: u32 = u32::MAX;

impl PairTree {
    fn with_keys(leaf_keys: impl ExactSizeIterator<Item = f64>, slots: usize) -> Self {
        let mut leaves = vec![f64::NAN; slots.next_multiple_of(FANOUT)];
        for (i, d) in leaf_keys.enumerate() {
            leaves[i] = d;
        }
        let mut tree = PairTree { keys: vec![leaves], owners: vec![Vec::new()] };
        while tree.keys.last().map_or(0, Vec::len) > 1 {
            let below = tree.keys.len() - 1;
            let nodes = tree.keys[below].len() / FANOUT;
            let width = if nodes == 1 { 1 } else { nodes.next_multiple_of(FANOUT) };
            let mut keys = vec![f64::INFINITY; width];
            let mut owners = vec![VACANT; width];
            for j in 0..nodes {
                (keys[j], owners[j]) = tree.best_child(below, j);
            }
            tree.keys.push(keys);
            tree.owners.push(owners);
        }
        tree
    }

    fn best_child(&self, level: usize, node: usize) -> (f64, u32) {
        let base = node * FANOUT;
        let keys = &self.keys[level][base..base + FANOUT];
        let mut best = (f64::INFINITY, VACANT);
        if level == 0 {
            // Vacant leaves hold NaN and never compare.
            for (c, &k) in keys.iter().enumerate() {
                if k < best.0 || (k == best.0 && best.1 == VACANT) {
                    best = (k, (base + c) as u32);
                }
            }
        } else {
            let owners = &self.owners[level][base..base + FANOUT];
            for (&k, &o) in keys.iter().zip(owners) {
                if k < best.0 || (k == best.0 && o < best.1) {
                    best = (k, o);
                }
            }
        }
        best
    }

    fn peek(&self) -> Option<(f64, usize)> {
        let top = self.keys.len() - 1;
        let owner = self.owners[top][0];
        (owner != VACANT).then(|| (self.keys[top][0], owner as usize))
    }

    fn put(&mut self, slot: usize, key: f64) {
        self.keys[0][slot] = key;
        let mut node = slot;
        for level in 1..self.keys.len() {
            node /= FANOUT;
            let best = self.best_child(level - 1, node);
            let current = (self.keys[level][node], self.owners[level][node]);
            if current.1 == best.1 && current.0.to_bits() == best.0.to_bits() {
                break;
            }
            (self.keys[level][node], self.owners[level][node]) = best;
        }
    }

    fn clear(&mut self, slot: usize) {
        self.put(slot, f64::NAN);
    }
}

const NO_PREV: u32 = u32::MAX;

/// A live cluster covering distinct indices from its head slot to `end`.
#[derive(Clone, Copy)]
#[repr(align(64))]
struct Slot {
    end: u32,
    prev: u32,
    size: usize,
    start: Prefix,
    mean: f64,
    min: f64,
    max: f64,
}

impl Slot {
    fn distance_to(&self, right: &Slot) -> f64 {
        (right.mean - self.mean) / (self.size + right.size) as f64
    }
}

/// Bottom-up merging path.
///
/// Repeatedly fuses the adjacent pair minimising
/// `(mean_right - mean_left) / (size_left + size_right)` and records that
/// value as the event's `lambda`. Clusters are identified by the distinct
/// index of their first value. A tournament tree over the left members of
/// live adjacent pairs yields the next merge, with ties broken by position.
pub fn build_merge_path(sample: &SortedSample) -> ClusterPath {
    build_merge_path_shared(Arc::new(sample.clone()))
}

/// As [`build_merge_path`] without copying an already shared sample.
pub fn build_merge_path_shared(sample: Arc<SortedSample>) -> ClusterPath {
    let m = sample.distinct();
    let mut events = Vec::with_capacity(m.saturating_sub(1));
    if m < 2 {
        return ClusterPath { sample, events };
    }
    assert!(m < NO_PREV as usize, "too many distinct values for a merge path");

    let values = sample.values();
    let mut slots: Vec<Slot> = (0..m)
        .map(|i| Slot {
            end: i as u32 + 1,
            prev: i.checked_sub(1).map_or(NO_PREV, |p| p as u32),
            size: sample.range_count(i, i + 1),
            start: sample.prefix(i),
            mean: sample.range_mean(i, i + 1),
            min: values[i],
            max: values[i],
        })
        .collect();
    let tail = sample.prefix(m);

    let mut tree = PairTree::with_keys((0..m - 1).map(|i| slots[i].distance_to(&slots[i + 1])), m);
    while let Some((lambda, lo)) = tree.peek() {
        let left = slots[lo];
        let mid = left.end as usize;
        let right = slots[mid];
        let hi = right.end as usize;
        let stop = if hi < m { slots[hi].start } else { tail };
        events.push(MergeEvent {
            lambda,
            left_size: left.size,
            right_size: right.size,
            left_mean: left.mean,
            right_mean: right.mean,
            left_max: left.max,
            right_min: right.min,
            merged_span: (left.min, right.max),
            first: left.start.count,
            split: right.start.count,
            last: stop.count,
        });

        // Fuse right into left; the right slot dies.
        let merged = Slot {
            end: hi as u32,
            size: left.size + right.size,
            mean: left.start.mean_to(stop),
            max: right.max,
            ..left
        };
        slots[lo] = merged;
        tree.clear(mid);
        if hi < m {
            slots[hi].prev = lo as u32;
            tree.put(lo, merged.distance_to(&slots[hi]));
        } else {
            tree.clear(lo);
        }
        if merged.prev != NO_PREV {
            let prev = merged.prev as usize;
            tree.put(prev, slots[prev].distance_to(&merged));
        }
    }
    debug_assert_eq!(events.len(), m - 1);
    ClusterPath { sample, events }
}

/// Top-down splitting procedure, by brute force.
///
/// Every cluster is split at the contiguous cut maximising the gap between
/// the two sub-cluster means, with `lambda = gap / |C|`. The splits are
/// returned in ascending `lambda`, i.e. in merge chronology, so the result
/// can be compared event-for-event against [`build_merge_path`]. O(n^2).
pub fn split_sequence_oracle(sample: &SortedSample) -> ClusterPath {
    let m = sample.distinct();
    let mut events = Vec::with_capacity(m.saturating_sub(1));
    let mut stack = vec![(0usize, m)];
    while let Some((lo, hi)) = stack.pop() {
        if hi - lo < 2 {
            continue;
        }
        let mut best: Option<(f64, usize)> = None;
        for mid in lo + 1..hi {
            let gap = sample.range_mean(mid, hi) - sample.range_mean(lo, mid);
            if best.is_none_or(|(g, _)| gap > g) {
                best = Some((gap, mid));
            }
        }
        let (_, mid) = best.expect("cluster has at least two values");
        events.push(MergeEvent::between(sample, lo, mid, hi));
        stack.push((lo, mid));
        stack.push((mid, hi));
    }
    events.sort_by(|a, b| a.lambda.total_cmp(&b.lambda).then(a.first.cmp(&b.first)));
    ClusterPath {
        sample: Arc::new(sample.clone()),
        events,
    }
}

/// Centroid of every observation (sorted order) at `lambda`.
///
/// Uses the first-order conditions: each active cluster `C` sits at
/// `mean(C) + lambda * (n_above - n_below)`.
pub fn centroids_at(path: &ClusterPath, lambda: f64) -> Result<Vec<f64>> {
    if !(lambda >= 0.0) || !lambda.is_finite() {
        return Err(Error::Domain(format!(
            "lambda must be finite and non-negative, got {lambda}"
        )));
    }
    let sample = path.sample();
    let n = sample.n();
    let mut out = Vec::with_capacity(n);
    for r in path.distinct_partition_where(|_, e| e.lambda <= lambda) {
        let size = sample.range_count(r.start, r.end);
        let mean = sample.range_mean(r.start, r.end);
        let below = sample.obs_offset(r.start) as f64;
        let above = (n - sample.obs_offset(r.end)) as f64;
        let alpha = mean + lambda * (above - below);
        out.extend(std::iter::repeat_n(alpha, size));
    }
    Ok(out)
}

/// The `k`-cluster partition on the path as observation index ranges.
pub fn partition_at_k(path: &ClusterPath, k: usize) -> Result<Vec<Range<usize>>> {
    let m = path.sample().distinct();
    if k == 0 || k > m {
        return Err(Error::Domain(format!(
            "k must lie in 1..={m} (distinct values), got {k}"
        )));
    }
    let merges = m - k;
    Ok(path.to_observation_ranges(path.distinct_partition_where(|idx, _| idx < merges)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample(xs: &[f64]) -> SortedSample {
        SortedSample::from_unsorted(xs).unwrap()
    }

    #[test]
    fn three_point_path() {
        let path = build_merge_path(&sample(&[3.0, 0.0, 1.0]));
        let ev = path.events();
        assert_eq!(ev.len(), 2);
        assert_eq!(ev[0].lambda, 0.5);
        assert_eq!((ev[0].first, ev[0].split, ev[0].last), (0, 1, 2));
        assert!((ev[1].lambda - 2.5 / 3.0).abs() < 1e-15);
        assert_eq!((ev[1].first, ev[1].split, ev[1].last), (0, 2, 3));
        assert_eq!(ev[1].left_mean, 0.5);
        assert_eq!(ev[1].left_max, 1.0);
        assert_eq!(ev[1].right_min, 3.0);
        assert_eq!(ev[1].merged_span, (0.0, 3.0));
    }

    #[test]
    fn singleton_and_pair() {
        assert!(build_merge_path(&sample(&[4.2])).events().is_empty());
        let path = build_merge_path(&sample(&[1.0, -1.0]));
        assert_eq!(path.events().len(), 1);
        assert_eq!(path.events()[0].lambda, 1.0);
        let oracle = split_sequence_oracle(&sample(&[1.0, -1.0]));
        assert_eq!(oracle.events()[0].lambda, 1.0);
    }

    #[test]
    fn oracle_picks_larger_gap() {
        let oracle = split_sequence_oracle(&sample(&[0.0, 1.0, 3.0]));
        let top = oracle.events().last().unwrap();
        // {0,1}|{3}: gap 2.5 beats {0}|{1,3}: gap 2.0
        assert_eq!(top.split, 2);
        assert_eq!(top.right_mean - top.left_mean, 2.5);
        assert!((top.lambda - 2.5 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn ties_merge_leftmost_pair_first() {
        let path = build_merge_path(&sample(&[0.0, 1.0, 2.0, 3.0]));
        assert_eq!(path.events()[0].first, 0);
        assert_eq!(path.events()[0].lambda, 0.5);
    }

    #[test]
    fn centroids_follow_first_order_conditions() {
        let path = build_merge_path(&sample(&[0.0, 1.0, 3.0]));
        let c = centroids_at(&path, 0.2).unwrap();
        let expect = [0.4, 1.0, 2.6];
        for (a, b) in c.iter().zip(expect) {
            assert!((a - b).abs() < 1e-12, "{c:?}");
        }
        let c = centroids_at(&path, 0.5).unwrap();
        assert_eq!(c[0], c[1]);
        assert!((c[0] - 1.0).abs() < 1e-12);
        assert_eq!(centroids_at(&path, 0.0).unwrap(), vec![0.0, 1.0, 3.0]);
        assert!(centroids_at(&path, -0.1).is_err());
        assert!(centroids_at(&path, f64::NAN).is_err());
    }

    #[test]
    fn partitions_by_k() {
        let path = build_merge_path(&sample(&[0.0, 1.0, 3.0]));
        assert_eq!(partition_at_k(&path, 3).unwrap(), vec![0..1, 1..2, 2..3]);
        assert_eq!(partition_at_k(&path, 2).unwrap(), vec![0..2, 2..3]);
        assert_eq!(partition_at_k(&path, 1).unwrap(), vec![0..3]);
        assert!(partition_at_k(&path, 0).is_err());
        assert!(partition_at_k(&path, 4).is_err());
    }

    #[test]
    fn duplicates_are_premerged() {
        let path = build_merge_path(&sample(&[0.0, 0.0, 1.0, 5.0, 5.0, 5.0]));
        assert_eq!(path.events().len(), 2);
        let first = path.events()[0];
        assert_eq!((first.left_size, first.right_size), (2, 1));
        assert!((first.lambda - 1.0 / 3.0).abs() < 1e-15);
        assert_eq!(centroids_at(&path, 0.0).unwrap()[..2], [0.0, 0.0]);
        assert_eq!(partition_at_k(&path, 3).unwrap(), vec![0..2, 2..3, 3..6]);
    }
}
