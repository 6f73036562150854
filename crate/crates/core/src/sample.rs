//! Sorted univariate observations with duplicate values folded into
//! multiplicities.

use crate::error::{Error, Result};

/// Sorted observations, strictly increasing distinct values with positive
/// multiplicities.
///
/// Cumulative counts and compensated prefix sums are precomputed so the
/// mean of any contiguous run of distinct values is available in O(1) and
/// is bit-identical regardless of which algorithm asks for it.
#[derive(Debug, Clone, PartialEq)]
pub struct SortedSample {
    values: Vec<f64>,
    counts: Vec<usize>,
    n: usize,
    // prefix[i] covers the observations strictly before distinct index i.
    prefix: Vec<Prefix>,
}

/// Observation count and compensated sum of everything before a distinct
/// index.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Prefix {
    pub(crate) count: usize,
    hi: f64,
    lo: f64,
}

impl Prefix {
    /// Sum of the observations between `self` and a later prefix.
    pub(crate) fn sum_to(self, end: Prefix) -> f64 {
        (end.hi - self.hi) + (end.lo - self.lo)
    }

    /// Mean between `self` and a later prefix spanning at least two
    /// distinct values.
    pub(crate) fn mean_to(self, end: Prefix) -> f64 {
        self.sum_to(end) / (end.count - self.count) as f64
    }
}

impl SortedSample {
    /// Sorts `data` and folds equal values together.
    pub fn from_unsorted(data: &[f64]) -> Result<Self> {
        if data.is_empty() {
            return Err(Error::InvalidSample("sample is empty".into()));
        }
        if let Some(pos) = data.iter().position(|x| !x.is_finite()) {
            return Err(Error::InvalidSample(format!(
                "observation {pos} is not finite ({})",
                data[pos]
            )));
        }
        let mut sorted = data.to_vec();
        sorted.sort_by(f64::total_cmp);

        let mut values: Vec<f64> = Vec::with_capacity(sorted.len());
        let mut counts: Vec<usize> = Vec::with_capacity(sorted.len());
        for x in sorted {
            // -0.0 and 0.0 compare equal and are folded together.
            match values.last() {
                Some(&last) if last == x => *counts.last_mut().unwrap() += 1,
                _ => {
                    values.push(x);
                    counts.push(1);
                }
            }
        }
        Ok(Self::assemble(values, counts))
    }

    /// Builds a sample from already-folded data.
    pub fn from_weighted(values: Vec<f64>, counts: Vec<usize>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidSample("sample is empty".into()));
        }
        if values.len() != counts.len() {
            return Err(Error::InvalidSample(format!(
                "{} values but {} counts",
                values.len(),
                counts.len()
            )));
        }
        if values.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidSample("non-finite value".into()));
        }
        if counts.contains(&0) {
            return Err(Error::InvalidSample("zero multiplicity".into()));
        }
        if values.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidSample(
                "values must be strictly increasing".into(),
            ));
        }
        Ok(Self::assemble(values, counts))
    }

    fn assemble(values: Vec<f64>, counts: Vec<usize>) -> Self {
        let m = values.len();
        let mut prefix = Vec::with_capacity(m + 1);
        let (mut total, mut hi, mut lo) = (0usize, 0.0f64, 0.0f64);
        prefix.push(Prefix { count: 0, hi: 0.0, lo: 0.0 });
        for (&v, &c) in values.iter().zip(&counts) {
            total += c;
            let (s, e) = two_sum(hi, v * c as f64);
            hi = s;
            lo += e;
            prefix.push(Prefix { count: total, hi, lo });
        }
        SortedSample {
            values,
            counts,
            n: total,
            prefix,
        }
    }

    /// Distinct values, ascending.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn counts(&self) -> &[usize] {
        &self.counts
    }

    /// Total number of observations.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of distinct values.
    pub fn distinct(&self) -> usize {
        self.values.len()
    }

    /// Observation index of the first copy of distinct value `i`
    /// (`i == distinct()` gives `n`).
    pub fn obs_offset(&self, i: usize) -> usize {
        self.prefix[i].count
    }

    pub(crate) fn prefix(&self, i: usize) -> Prefix {
        self.prefix[i]
    }

    /// Distinct index whose first copy sits at observation `offset`.
    pub fn distinct_index_of_offset(&self, offset: usize) -> Option<usize> {
        self.prefix.binary_search_by_key(&offset, |p| p.count).ok()
    }

    /// Observation count over distinct indices `start..end`.
    pub fn range_count(&self, start: usize, end: usize) -> usize {
        self.prefix[end].count - self.prefix[start].count
    }

    /// Sum of observations over distinct indices `start..end`.
    pub fn range_sum(&self, start: usize, end: usize) -> f64 {
        self.prefix[start].sum_to(self.prefix[end])
    }

    /// Mean of observations over distinct indices `start..end` (non-empty).
    pub fn range_mean(&self, start: usize, end: usize) -> f64 {
        debug_assert!(start < end);
        if end == start + 1 {
            return self.values[start];
        }
        self.prefix[start].mean_to(self.prefix[end])
    }

    pub fn mean(&self) -> f64 {
        self.range_mean(0, self.distinct())
    }

    /// All observations in ascending order, duplicates expanded.
    pub fn expanded(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.n);
        for (&v, &c) in self.values.iter().zip(&self.counts) {
            out.extend(std::iter::repeat_n(v, c));
        }
        out
    }
}

fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let err = (a - (s - bb)) + (b - bb);
    (s, err)
}
