//! Clusters a single-column CSV file and prints one label per row.
//!
//! Usage: `cargo run --example cluster_csv -- data.csv`. Without an
//! argument a small sample is generated in place.

use fusion_clustering::bmt::label_values;
use fusion_clustering::{run_bmt, BmtConfig, MixtureModel, SortedSample};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let values: Vec<f64> = match std::env::args().nth(1) {
        Some(path) => {
            let mut reader = csv::ReaderBuilder::new().has_headers(false).from_path(path)?;
            let mut out = Vec::new();
            for record in reader.records() {
                out.push(record?[0].trim().parse()?);
            }
            out
        }
        None => "0.5*normal(0,1)+0.5*normal(6,1)".parse::<MixtureModel>()?.sample(2000, 3),
    };

    let result = run_bmt(&SortedSample::from_unsorted(&values)?, &BmtConfig::default())?;
    let labels = label_values(&values, &result.split_points)?;
    println!("value,label");
    for (v, l) in values.iter().zip(&labels) {
        println!("{v},{l}");
    }
    eprintln!("{} clusters", result.num_clusters);
    Ok(())
}
