//! Per-dimension BMT on a two-dimensional product mixture.

use fusion_clustering::experiments::DataModel;
use fusion_clustering::{run_bmt_multivariate, BmtConfig, MixtureModel};

fn main() -> fusion_clustering::Result<()> {
    let x: MixtureModel = "0.5*normal(-4,1)+0.5*normal(4,1)".parse()?;
    let y: MixtureModel = "normal(-6,1)+normal(0,1)+normal(6,1)".parse()?;
    let columns = DataModel::Product(vec![x, y]).sample(4000, 12);

    let result = run_bmt_multivariate(&columns, &BmtConfig::default())?;
    for (j, dim) in result.dimensions.iter().enumerate() {
        println!("dimension {j}: splits {:?}", dim.split_points);
    }
    println!("{} clusters, {} occupied", result.num_clusters, result.occupied_clusters);
    println!("first row labels: {:?}", result.labels[0]);
    Ok(())
}
