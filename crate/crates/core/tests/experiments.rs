//! Invariants of the simulation harness.

use fusion_clustering::experiments::{hausdorff_distance, oracle_mse, run_scale_experiment, ExperimentSpec};
use fusion_clustering::MixtureModel;
use proptest::prelude::*;

#[test]
fn sample_mse_never_beats_population_optimum_by_much() {
    let m: MixtureModel = "normal(-4,1)+normal(0,1)+normal(4,1)".parse().unwrap();
    let spec = ExperimentSpec::new(m.clone(), 20_000, 6).with_seed(3);
    let summary = run_scale_experiment(&spec).unwrap();
    let oracle = oracle_mse(&m).unwrap();
    assert_eq!(summary.oracle_mse, Some(oracle));
    for o in &summary.outcomes {
        assert!(o.mse.unwrap() >= oracle - 0.02, "replicate {} mse {:?} vs {oracle}", o.seed, o.mse);
    }
}

proptest! {
    #[test]
    fn hausdorff_is_a_symmetric_metric(
        a in prop::collection::vec(-10.0..10.0f64, 1..8),
        b in prop::collection::vec(-10.0..10.0f64, 1..8),
        c in prop::collection::vec(-10.0..10.0f64, 1..8),
    ) {
        let pts = |v: &[f64]| v.iter().map(|&x| [x]).collect::<Vec<[f64; 1]>>();
        let (a, b, c) = (pts(&a), pts(&b), pts(&c));
        let ab = hausdorff_distance(&a, &b).unwrap();
        prop_assert_eq!(ab, hausdorff_distance(&b, &a).unwrap());
        prop_assert_eq!(hausdorff_distance(&a, &a).unwrap(), 0.0);
        let via = hausdorff_distance(&a, &c).unwrap() + hausdorff_distance(&c, &b).unwrap();
        prop_assert!(ab <= via + 1e-12);
    }
}
