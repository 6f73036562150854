//! Builds the merging path of a small sample and prints each fusion.

use fusion_clustering::{build_merge_path, centroids_at, partition_at_k, SortedSample};

fn main() -> fusion_clustering::Result<()> {
    let sample = SortedSample::from_unsorted(&[4.1, -0.3, 0.2, 3.7, 0.0, 4.4, 9.0])?;
    let path = build_merge_path(&sample);

    for e in path.events() {
        println!(
            "lambda {:.4}: [{}..{}) + [{}..{}) -> mean {:.3}",
            e.lambda,
            e.first,
            e.split,
            e.split,
            e.last,
            (e.left_mean * e.left_size as f64 + e.right_mean * e.right_size as f64) / e.merged_size() as f64,
        );
    }

    println!("three clusters: {:?}", partition_at_k(&path, 3)?);
    println!("centroids at lambda 0.2: {:?}", centroids_at(&path, 0.2)?);
    Ok(())
}
