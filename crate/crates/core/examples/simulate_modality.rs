//! Rate at which the BMT declares a sample multimodal.

use fusion_clustering::experiments::{run_modality_experiment, ExperimentSpec};
use fusion_clustering::MixtureModel;

fn main() -> fusion_clustering::Result<()> {
    for text in ["normal(0,1)", "0.5*normal(-2,1)+0.5*normal(2,1)", "0.5*normal(-1,1)+0.5*normal(1,1)"] {
        let m: MixtureModel = text.parse()?;
        let summary = run_modality_experiment(&ExperimentSpec::new(m, 5000, 20).with_seed(1))?;
        println!("{text:<36} multimodal in {:.0}% of replicates", 100.0 * summary.multimodal_rate);
    }
    Ok(())
}
