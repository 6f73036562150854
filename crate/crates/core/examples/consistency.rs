//! Distance between sample and population split points as n grows.

use fusion_clustering::experiments::{run_consistency_check, ConsistencyReport};
use fusion_clustering::MixtureModel;

fn main() -> fusion_clustering::Result<()> {
    let m: MixtureModel = "0.5*normal(-2,1)+0.5*normal(2,1)".parse()?;
    match run_consistency_check(&m, &[1_000, 10_000, 100_000], 10, 0, 0.1)? {
        ConsistencyReport::NoPopulationSplit => println!("the density has no population split"),
        ConsistencyReport::Checked { s_star, rows, non_increasing } => {
            println!("population split {s_star:.4}");
            for row in rows {
                println!("n = {:>6}: median error {:.4}", row.n, row.median_error);
            }
            println!("non-increasing: {non_increasing}");
        }
    }
    Ok(())
}
