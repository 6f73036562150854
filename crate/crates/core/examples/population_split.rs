//! Finds the population split of an asymmetric two-normal mixture.

use fusion_clustering::population::{find_population_split, misclassification_analysis};
use fusion_clustering::MixtureModel;

fn main() -> fusion_clustering::Result<()> {
    let m = MixtureModel::two_normals(0.3, -2.5, 0.7, 2.5)?;
    let split = find_population_split(&m, 0.01)?;
    match split.triple() {
        Some((l, s, r)) => println!("L* = {l:.3}, s* = {s:.3}, R* = {r:.3}"),
        None => println!("no split"),
    }
    println!("density minimum: {:?}", split.d_min());

    let mc = misclassification_analysis(&m, &split)?;
    println!("Bayes boundary {:.3}, excess misclassification {:.4}", mc.s_mc, mc.excess);
    Ok(())
}
