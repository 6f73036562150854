//! Prints the two-normal split table.

use fusion_clustering::population::{table1, PopulationConfig};

fn fmt(v: Option<f64>) -> String {
    v.map_or_else(|| "-".into(), |x| format!("{x:.2}"))
}

fn main() -> fusion_clustering::Result<()> {
    println!("{:>5} {:>6} {:>6} {:>7} {:>7} {:>7} {:>7} {:>7}", "p1", "mu1", "d_min", "s*", "L*", "R*", "s_mc", "excess");
    for row in table1(&PopulationConfig::default())? {
        println!(
            "{:>5.2} {:>6.2} {:>6} {:>7} {:>7} {:>7} {:>7.2} {:>7.3}",
            row.p1,
            row.mu1,
            fmt(row.d_min),
            fmt(row.s_star),
            fmt(row.l_star),
            fmt(row.r_star),
            row.s_mc,
            row.excess_mce
        );
    }
    Ok(())
}
