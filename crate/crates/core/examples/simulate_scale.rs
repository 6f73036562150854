//! Runtime, cluster count and within-cluster MSE as the sample grows.

use fusion_clustering::experiments::{run_scale_experiment, ExperimentSpec};
use fusion_clustering::MixtureModel;

fn main() -> fusion_clustering::Result<()> {
    let m: MixtureModel = "0.5*normal(-3,1)+0.5*normal(3,1)".parse()?;
    for n in [1_000, 10_000, 100_000] {
        let spec = ExperimentSpec::new(m.clone(), n, 5).with_seed(2).with_true_k(2);
        let summary = run_scale_experiment(&spec)?;
        println!(
            "n = {n:>6}: modal k {}, MSE {:.4} (population {:.4}), mean runtime {:.4}s",
            summary.modal_k(),
            summary.mse_mean.unwrap_or(f64::NAN),
            summary.oracle_mse.unwrap_or(f64::NAN),
            summary.mean_runtime_seconds
        );
    }
    Ok(())
}
