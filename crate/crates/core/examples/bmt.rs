//! Runs the Big Merge Tracker on a bimodal sample.

use fusion_clustering::{assign_labels, run_bmt, BmtConfig, MixtureModel, SortedSample};

fn main() -> fusion_clustering::Result<()> {
    let mixture: MixtureModel = "0.4*normal(-3,1)+0.6*normal(3,1)".parse()?;
    let sample = SortedSample::from_unsorted(&mixture.sample(5000, 7))?;

    let result = run_bmt(&sample, &BmtConfig::with_alpha(0.1))?;
    println!("clusters: {}", result.num_clusters);
    println!("split points: {:?}", result.split_points);
    for big in &result.big_merges {
        println!("  big merge at lambda {:.5}, mass after {:.3}", big.event.lambda, big.mass_after);
    }

    let labels = assign_labels(&sample, &result.split_points)?;
    let left = labels.iter().filter(|&&l| l == 0).count();
    println!("{left} of {} observations fall left of the first split", labels.len());
    Ok(())
}
