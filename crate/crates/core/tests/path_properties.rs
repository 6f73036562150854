//! Property checks of the merge path and mixture arithmetic.

use fusion_clustering::{
    build_merge_path, centroids_at, partition_at_k, split_sequence_oracle, Component, MixtureModel, SortedSample,
};
use proptest::prelude::*;

fn values() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(prop_oneof![-50.0..50.0f64, (-5i32..5).prop_map(f64::from)], 2..40)
}

proptest! {
    #[test]
    fn merge_path_matches_split_oracle(data in values()) {
        let sample = SortedSample::from_unsorted(&data).unwrap();
        let merged = build_merge_path(&sample);
        let split = split_sequence_oracle(&sample);
        prop_assert_eq!(merged.events().len(), sample.distinct() - 1);
        prop_assert_eq!(split.events().len(), sample.distinct() - 1);
        // Equal heights may be resolved in a different binary order and
        // may differ in the last bit, so compare partitions between heights.
        let mut heights: Vec<f64> = merged.lambdas().collect();
        if heights.is_empty() {
            return Ok(());
        }
        heights.sort_by(f64::total_cmp);
        heights.dedup_by(|b, a| *b - *a <= 1e-9 * a.abs());
        let mut probes = vec![heights[0] * 0.5];
        probes.extend(heights.windows(2).map(|w| 0.5 * (w[0] + w[1])));
        probes.push(heights[heights.len() - 1] * 2.0);
        for lambda in probes {
            prop_assert_eq!(merged.partition_at_lambda(lambda), split.partition_at_lambda(lambda));
        }
    }

    #[test]
    fn partitions_cover_the_sample(data in values(), k in 1usize..10) {
        let sample = SortedSample::from_unsorted(&data).unwrap();
        let path = build_merge_path(&sample);
        let k = k.min(sample.distinct());
        let parts = partition_at_k(&path, k).unwrap();
        prop_assert_eq!(parts.len(), k);
        prop_assert_eq!(parts[0].start, 0);
        prop_assert_eq!(parts[k - 1].end, sample.n());
        for w in parts.windows(2) {
            prop_assert_eq!(w[0].end, w[1].start);
        }
    }

    #[test]
    fn centroids_keep_order_and_mean(data in values(), lambda in 0.0..5.0f64) {
        let sample = SortedSample::from_unsorted(&data).unwrap();
        let c = centroids_at(&build_merge_path(&sample), lambda).unwrap();
        for w in c.windows(2) {
            prop_assert!(w[0] <= w[1] + 1e-9);
        }
        let mean = c.iter().sum::<f64>() / c.len() as f64;
        prop_assert!((mean - sample.mean()).abs() < 1e-9 * (1.0 + sample.mean().abs()));
    }
}

#[test]
fn closed_form_partial_expectations_match_quadrature() {
    let components = [
        Component::normal(1.5, 2.0),
        Component::StudentT { df: 1.0, location: 0.5 },
        Component::StudentT { df: 3.0, location: -1.0 },
        Component::Laplace { location: 0.2, rate: 1.5 },
        Component::Beta { a: 2.0, b: 5.0 },
        Component::ChiSquare { df: 3.0 },
    ];
    for c in components {
        for (l, r) in [(-2.0, 0.5), (0.1, 0.9), (-0.5, 2.5)] {
            let closed = c.partial_expectation(l, r).unwrap();
            let quad = c.partial_expectation_quadrature(l, r).unwrap();
            assert!((closed - quad).abs() < 1e-8, "{c:?} on [{l}, {r}]: {closed} vs {quad}");
        }
    }
}

#[test]
fn mixture_cdf_and_quantile_agree() {
    let m: MixtureModel = "0.3*normal(-2,1)+0.5*beta(2,2)+0.2*laplace(4,2)".parse().unwrap();
    for p in [0.01, 0.2, 0.5, 0.77, 0.99] {
        let q = m.quantile(p).unwrap();
        assert!((m.cdf(q) - p).abs() < 1e-9);
    }
    assert!((m.prob(f64::NEG_INFINITY, f64::INFINITY) - 1.0).abs() < 1e-12);
}
