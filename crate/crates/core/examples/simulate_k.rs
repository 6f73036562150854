//! Distribution of the estimated number of clusters.

use fusion_clustering::experiments::{run_k_experiment, ExperimentSpec};
use fusion_clustering::MixtureModel;

fn main() -> fusion_clustering::Result<()> {
    let m: MixtureModel = "normal(-5,1)+normal(0,1)+normal(5,1)".parse()?;
    let spec = ExperimentSpec::new(m, 10_000, 20).with_seed(4).with_true_k(3);
    let summary = run_k_experiment(&spec)?;
    println!("k histogram: {:?}", summary.k_histogram);
    println!("modal k {} ({:.0}%)", summary.modal_k(), 100.0 * summary.share(summary.modal_k()));
    Ok(())
}
