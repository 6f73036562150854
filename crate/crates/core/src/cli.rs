//! Command-line front end: argument parsing, CSV ingestion and output
//! serialisation. The `fusion-cluster` binary is a thin wrapper around
//! [`run_command`].

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::bmt::{label_values, run_bmt_multivariate, run_bmt_on_path, BmtConfig, BmtResult, MultivariateBmt, SplitRule};
use crate::error::{Error, Result};
use crate::experiments::{
    run_consistency_check, run_k_experiment, run_modality_experiment, run_scale_experiment, ConsistencyReport,
    DataModel, ExperimentSpec, ReplicationSummary,
};
use crate::mixture::MixtureModel;
use crate::path::{build_merge_path, MergeEvent};
use crate::population::{
    find_population_split_with, misclassification_analysis, table1, table1_row_for, McReport, PopulationConfig,
    PopulationSplit, SplitOutcome, Table1Row,
};
use crate::sample::SortedSample;

/// Environment variable holding the worker thread count.
pub const THREADS_ENV: &str = "FUSION_CLUSTER_THREADS";

#[derive(Debug, Parser)]
#[command(name = "fusion-cluster", version, about = "Univariate l1-fusion clustering and the Big Merge Tracker")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write to this file instead of stdout.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Full merge path of a univariate sample.
    Path(DataArgs),
    /// Big Merge Tracker split points and labels.
    Bmt(BmtArgs),
    /// Cluster summaries and flat labels from the BMT partition.
    Cluster(BmtArgs),
    /// Population split of a mixture density.
    Population(PopulationArgs),
    /// Two-normal population split table, or one row of it for `--mixture`.
    Table1(Table1Args),
    /// Share of replicates the BMT calls multimodal.
    SimulateModality(SimArgs),
    /// Distribution of the detected cluster count.
    SimulateK(SimArgs),
    /// Cluster count, MSE against the oracle partition, and timing.
    SimulateScale(SimArgs),
    /// Distance of BMT split points to the population split as n grows.
    Consistency(ConsistencyArgs),
}

#[derive(Debug, Clone, Args)]
pub struct DataArgs {
    /// CSV file, one column per dimension, optional header row.
    #[arg(long, required_unless_present = "mixture", conflicts_with = "mixture")]
    pub input: Option<PathBuf>,
    /// Draw the data from this mixture instead.
    #[arg(long)]
    pub mixture: Option<String>,
    /// Sample size when drawing from `--mixture`.
    #[arg(long, default_value_t = 1000)]
    pub n: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Clone, Args)]
pub struct BmtArgs {
    #[command(flatten)]
    pub data: DataArgs,
    #[arg(long, default_value_t = 0.1)]
    pub alpha: f64,
    /// Keep splits even when the last big merge covers under half the data.
    #[arg(long)]
    pub no_adjustment: bool,
    #[arg(long, value_enum, default_value_t = RuleArg::Weighted)]
    pub split_rule: RuleArg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RuleArg {
    Weighted,
    Midpoint,
}

impl BmtArgs {
    fn config(&self) -> BmtConfig {
        BmtConfig {
            alpha: self.alpha,
            adjustment_enabled: !self.no_adjustment,
            split_rule: match self.split_rule {
                RuleArg::Weighted => SplitRule::Weighted,
                RuleArg::Midpoint => SplitRule::Midpoint,
            },
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct PopulationArgs {
    #[arg(long)]
    pub mixture: String,
    /// Scan step; defaults to a thousandth of the interquartile range.
    #[arg(long)]
    pub grid_step: Option<f64>,
}

#[derive(Debug, Clone, Args)]
pub struct Table1Args {
    /// A two-component mixture; without it the full grid is produced.
    #[arg(long)]
    pub mixture: Option<String>,
    #[arg(long)]
    pub grid_step: Option<f64>,
}

#[derive(Debug, Clone, Args)]
pub struct SimArgs {
    /// Mixture to sample; repeat for independent coordinates (k experiments only).
    #[arg(long, required_unless_present = "config", conflicts_with = "config")]
    pub mixture: Vec<String>,
    /// TOML experiment file; replaces the other flags.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long, default_value_t = 10_000)]
    pub n: usize,
    #[arg(long, default_value_t = 20)]
    pub replicates: usize,
    #[arg(long, default_value_t = 0.1)]
    pub alpha: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Restrict MSE statistics to replicates finding this many clusters.
    #[arg(long)]
    pub true_k: Option<usize>,
}

impl SimArgs {
    fn spec(&self) -> Result<ExperimentSpec> {
        if let Some(path) = &self.config {
            return ExperimentSpec::load(path);
        }
        let mut models = self.mixture.iter().map(|s| s.parse::<MixtureModel>()).collect::<Result<Vec<_>>>()?;
        let model = if models.len() == 1 {
            DataModel::Mixture(models.remove(0))
        } else {
            DataModel::Product(models)
        };
        let spec = ExperimentSpec {
            mixture: model,
            n: self.n,
            replicates: self.replicates,
            alpha: self.alpha,
            base_seed: self.seed,
            true_k: self.true_k,
        };
        spec.validate()?;
        Ok(spec)
    }
}

#[derive(Debug, Clone, Args)]
pub struct ConsistencyArgs {
    #[arg(long)]
    pub mixture: String,
    #[arg(long, value_delimiter = ',', default_value = "1000,10000,100000")]
    pub sizes: Vec<usize>,
    #[arg(long, default_value_t = 20)]
    pub replicates: usize,
    #[arg(long, default_value_t = 0.1)]
    pub alpha: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

/// Reads a numeric CSV into columns. A first row with any non-numeric
/// field is taken as a header.
pub fn read_csv(path: impl AsRef<Path>) -> Result<Vec<Vec<f64>>> {
    let text = std::fs::read_to_string(path)?;
    parse_csv(&text)
}

/// As [`read_csv`] on in-memory text.
pub fn parse_csv(text: &str) -> Result<Vec<Vec<f64>>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .flexible(true)
        .from_reader(text.as_bytes());
    let mut columns: Vec<Vec<f64>> = Vec::new();
    let mut width = None;
    for (i, record) in reader.records().enumerate() {
        let record = record.map_err(|e| Error::Parse { line: i + 1, message: e.to_string() })?;
        let line = record.position().map_or(i as u64 + 1, |p| p.line()) as usize;
        if record.iter().all(str::is_empty) {
            continue;
        }
        let parsed: std::result::Result<Vec<f64>, _> = record.iter().map(str::parse::<f64>).collect();
        let row = match parsed {
            Ok(row) => row,
            Err(_) if width.is_none() && record.iter().any(|f| f.parse::<f64>().is_err() && !looks_numeric(f)) => {
                if record.iter().all(|f| f.parse::<f64>().is_err()) {
                    width = Some(record.len());
                    columns = vec![Vec::new(); record.len()];
                    continue;
                }
                return Err(Error::Parse { line, message: format!("non-numeric field in {:?}", record.iter().collect::<Vec<_>>()) });
            }
            Err(e) => return Err(Error::Parse { line, message: e.to_string() }),
        };
        let w = *width.get_or_insert_with(|| {
            columns = vec![Vec::new(); row.len()];
            row.len()
        });
        if row.len() != w {
            return Err(Error::Parse { line, message: format!("expected {w} fields, found {}", row.len()) });
        }
        if let Some(bad) = row.iter().find(|v| !v.is_finite()) {
            return Err(Error::Parse { line, message: format!("non-finite value {bad}") });
        }
        for (col, v) in columns.iter_mut().zip(row) {
            col.push(v);
        }
    }
    if columns.first().is_none_or(Vec::is_empty) {
        return Err(Error::InvalidSample("no data rows".into()));
    }
    Ok(columns)
}

fn looks_numeric(field: &str) -> bool {
    field.starts_with(|c: char| c.is_ascii_digit() || c == '-' || c == '+' || c == '.')
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PathOutput {
    pub n: usize,
    pub distinct: usize,
    pub events: Vec<MergeEvent>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum BmtOutput {
    Univariate {
        #[serde(flatten)]
        result: BmtResult,
        /// In input row order.
        labels: Vec<usize>,
    },
    Multivariate(MultivariateBmt),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClusterSummary {
    pub id: usize,
    /// Per-dimension BMT labels of the cell.
    pub cell: Vec<usize>,
    pub size: usize,
    pub mean: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClusterOutput {
    pub num_clusters: usize,
    pub clusters: Vec<ClusterSummary>,
    /// Cluster id per input row.
    pub labels: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PopulationOutput {
    #[serde(flatten)]
    pub split: PopulationSplit,
    /// Present for two-component mixtures.
    pub misclassification: Option<McReport>,
}

/// Runs one parsed invocation and returns the serialised output.
pub fn run_command(cli: &Cli) -> Result<String> {
    let f = cli.format;
    match &cli.command {
        Command::Path(args) => {
            let sample = univariate_sample(args)?;
            let path = build_merge_path(&sample);
            let out = PathOutput { n: sample.n(), distinct: sample.distinct(), events: path.events().to_vec() };
            match f {
                Format::Json => to_json(&out),
                Format::Csv => to_csv(out.events.iter().map(EventRow::from)),
            }
        }
        Command::Bmt(args) => {
            let out = bmt_output(args)?;
            match (f, &out) {
                (Format::Json, _) => to_json(&out),
                (Format::Csv, BmtOutput::Univariate { labels, .. }) => {
                    to_csv(labels.iter().enumerate().map(|(row, &label)| LabelRow { row, label }))
                }
                (Format::Csv, BmtOutput::Multivariate(m)) => to_csv(m.labels.iter().enumerate().map(|(row, l)| {
                    CellRow { row, cell: l.iter().map(usize::to_string).collect::<Vec<_>>().join(";") }
                })),
            }
        }
        Command::Cluster(args) => {
            let out = cluster_output(args)?;
            match f {
                Format::Json => to_json(&out),
                Format::Csv => to_csv(out.labels.iter().enumerate().map(|(row, &label)| LabelRow { row, label })),
            }
        }
        Command::Population(args) => {
            let m: MixtureModel = args.mixture.parse()?;
            let split = find_population_split_with(&m, &population_config(args.grid_step))?;
            let misclassification = match misclassification_analysis(&m, &split) {
                Ok(r) => Some(r),
                Err(Error::Unsupported(_)) => None,
                Err(e) => return Err(e),
            };
            let out = PopulationOutput { split, misclassification };
            match f {
                Format::Json => to_json(&out),
                Format::Csv => to_csv(std::iter::once(PopulationRow::from(&out))),
            }
        }
        Command::Table1(args) => {
            let cfg = population_config(args.grid_step);
            let rows = match &args.mixture {
                Some(spec) => vec![table1_row_for(&spec.parse()?, &cfg)?],
                None => table1(&cfg)?,
            };
            match f {
                Format::Json => to_json(&rows),
                Format::Csv => to_csv(rows.iter().map(Table1CsvRow::from)),
            }
        }
        Command::SimulateModality(args) => summary_output(run_modality_experiment(&args.spec()?)?, f),
        Command::SimulateK(args) => summary_output(run_k_experiment(&args.spec()?)?, f),
        Command::SimulateScale(args) => summary_output(run_scale_experiment(&args.spec()?)?, f),
        Command::Consistency(args) => {
            let m: MixtureModel = args.mixture.parse()?;
            let report = run_consistency_check(&m, &args.sizes, args.replicates, args.seed, args.alpha)?;
            match (f, &report) {
                (Format::Json, _) | (Format::Csv, ConsistencyReport::NoPopulationSplit) => to_json(&report),
                (Format::Csv, ConsistencyReport::Checked { rows, .. }) => to_csv(rows.iter()),
            }
        }
    }
}

fn population_config(grid_step: Option<f64>) -> PopulationConfig {
    PopulationConfig { grid_step, ..PopulationConfig::default() }
}

fn load_columns(args: &DataArgs) -> Result<Vec<Vec<f64>>> {
    match (&args.input, &args.mixture) {
        (Some(path), None) => read_csv(path),
        (None, Some(spec)) => Ok(vec![spec.parse::<MixtureModel>()?.sample(args.n, args.seed)]),
        _ => Err(Error::InvalidConfig("give exactly one of --input and --mixture".into())),
    }
}

fn univariate_sample(args: &DataArgs) -> Result<SortedSample> {
    match load_columns(args)?.as_slice() {
        [col] => SortedSample::from_unsorted(col),
        cols => Err(Error::Unsupported(format!("expected one column, found {}", cols.len()))),
    }
}

fn bmt_output(args: &BmtArgs) -> Result<BmtOutput> {
    let cfg = args.config();
    cfg.validate()?;
    let columns = load_columns(&args.data)?;
    if let [col] = columns.as_slice() {
        let sample = SortedSample::from_unsorted(col)?;
        let result = run_bmt_on_path(&build_merge_path(&sample), &cfg)?;
        let labels = label_values(col, &result.split_points)?;
        Ok(BmtOutput::Univariate { result, labels })
    } else {
        Ok(BmtOutput::Multivariate(run_bmt_multivariate(&columns, &cfg)?))
    }
}

fn cluster_output(args: &BmtArgs) -> Result<ClusterOutput> {
    let columns = load_columns(&args.data)?;
    let cfg = args.config();
    let cells: Vec<Vec<usize>> = if let [col] = columns.as_slice() {
        let result = run_bmt_on_path(&build_merge_path(&SortedSample::from_unsorted(col)?), &cfg)?;
        label_values(col, &result.split_points)?.into_iter().map(|l| vec![l]).collect()
    } else {
        run_bmt_multivariate(&columns, &cfg)?.labels
    };
    let mut acc: BTreeMap<&[usize], (usize, Vec<f64>)> = BTreeMap::new();
    for (row, cell) in cells.iter().enumerate() {
        let entry = acc.entry(cell).or_insert_with(|| (0, vec![0.0; columns.len()]));
        entry.0 += 1;
        for (sum, col) in entry.1.iter_mut().zip(&columns) {
            *sum += col[row];
        }
    }
    let ids: BTreeMap<&[usize], usize> = acc.keys().enumerate().map(|(i, k)| (*k, i)).collect();
    let clusters = acc
        .iter()
        .enumerate()
        .map(|(id, (cell, (size, sums)))| ClusterSummary {
            id,
            cell: cell.to_vec(),
            size: *size,
            mean: sums.iter().map(|s| s / *size as f64).collect(),
        })
        .collect::<Vec<_>>();
    Ok(ClusterOutput {
        num_clusters: clusters.len(),
        labels: cells.iter().map(|c| ids[c.as_slice()]).collect(),
        clusters,
    })
}

fn summary_output(summary: ReplicationSummary, f: Format) -> Result<String> {
    match f {
        Format::Json => to_json(&summary),
        Format::Csv => to_csv(summary.outcomes.iter().enumerate().map(|(replicate, o)| OutcomeRow {
            replicate,
            seed: o.seed,
            num_clusters: o.num_clusters,
            mse: o.mse,
            runtime_seconds: o.runtime_seconds,
        })),
    }
}

fn to_json<T: Serialize + ?Sized>(value: &T) -> Result<String> {
    serde_json::to_string_pretty(value)
        .map(|mut s| {
            s.push('\n');
            s
        })
        .map_err(|e| Error::Io(e.to_string()))
}

fn to_csv<T: Serialize>(rows: impl IntoIterator<Item = T>) -> Result<String> {
    let mut writer = csv::Writer::from_writer(Vec::new());
    for row in rows {
        writer.serialize(row).map_err(|e| Error::Io(e.to_string()))?;
    }
    let bytes = writer.into_inner().map_err(|e| Error::Io(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::Io(e.to_string()))
}

#[derive(Serialize)]
struct EventRow {
    lambda: f64,
    left_size: usize,
    right_size: usize,
    left_mean: f64,
    right_mean: f64,
    left_max: f64,
    right_min: f64,
    span_min: f64,
    span_max: f64,
}

impl From<&MergeEvent> for EventRow {
    fn from(e: &MergeEvent) -> Self {
        EventRow {
            lambda: e.lambda,
            left_size: e.left_size,
            right_size: e.right_size,
            left_mean: e.left_mean,
            right_mean: e.right_mean,
            left_max: e.left_max,
            right_min: e.right_min,
            span_min: e.merged_span.0,
            span_max: e.merged_span.1,
        }
    }
}

#[derive(Serialize)]
struct LabelRow {
    row: usize,
    label: usize,
}

#[derive(Serialize)]
struct CellRow {
    row: usize,
    cell: String,
}

#[derive(Serialize)]
struct OutcomeRow {
    replicate: usize,
    seed: u64,
    num_clusters: usize,
    mse: Option<f64>,
    runtime_seconds: f64,
}

#[derive(Serialize)]
struct PopulationRow {
    outcome: &'static str,
    l_star: Option<f64>,
    s_star: Option<f64>,
    r_star: Option<f64>,
    d_min: Option<f64>,
    second_split: bool,
    s_mc: Option<f64>,
    excess_mce: Option<f64>,
}

impl From<&PopulationOutput> for PopulationRow {
    fn from(o: &PopulationOutput) -> Self {
        let t = o.split.triple();
        PopulationRow {
            outcome: match o.split.outcome {
                SplitOutcome::Split { .. } => "split",
                SplitOutcome::NoSplit { .. } => "no_split",
            },
            l_star: t.map(|t| t.0),
            s_star: t.map(|t| t.1),
            r_star: t.map(|t| t.2),
            d_min: o.split.d_min(),
            second_split: o.split.second_split_found,
            s_mc: o.misclassification.map(|m| m.s_mc),
            excess_mce: o.misclassification.map(|m| m.excess),
        }
    }
}

#[derive(Serialize)]
struct Table1CsvRow {
    p1: f64,
    p2: f64,
    mu1: f64,
    mu2: f64,
    d_min: Option<f64>,
    s_star: Option<f64>,
    #[serde(rename = "L_star")]
    l_star: Option<f64>,
    #[serde(rename = "R_star")]
    r_star: Option<f64>,
    second_split: Option<bool>,
    s_mc: f64,
    excess_mce: f64,
}

impl From<&Table1Row> for Table1CsvRow {
    fn from(r: &Table1Row) -> Self {
        Table1CsvRow {
            p1: r.p1,
            p2: r.p2,
            mu1: r.mu1,
            mu2: r.mu2,
            d_min: r.d_min,
            s_star: r.s_star,
            l_star: r.l_star,
            r_star: r.r_star,
            second_split: r.second_split,
            s_mc: r.s_mc,
            excess_mce: r.excess_mce,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_with_header() {
        assert_eq!(parse_csv("x\n1.0\n2.0\n").unwrap(), vec![vec![1.0, 2.0]]);
    }

    #[test]
    fn csv_two_columns() {
        assert_eq!(parse_csv("1,2\n3,4\n").unwrap(), vec![vec![1.0, 3.0], vec![2.0, 4.0]]);
    }

    #[test]
    fn csv_errors_carry_line_numbers() {
        assert!(matches!(parse_csv("1,a\n"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(parse_csv("x,y\n1,2\n3\n"), Err(Error::Parse { line: 3, .. })));
        assert!(matches!(parse_csv("1\n2\nfoo\n"), Err(Error::Parse { line: 3, .. })));
        assert!(parse_csv("").is_err());
        assert!(parse_csv("x\n").is_err());
    }

    #[test]
    fn cli_parses_every_subcommand() {
        for cmd in [
            "path --input a.csv",
            "bmt --mixture normal(0,1) --alpha 0.2",
            "cluster --input a.csv --format csv",
            "population --mixture normal(0,1)",
            "table1",
            "simulate-modality --mixture normal(0,1) --n 100",
            "simulate-k --mixture normal(0,1) --mixture chisq(1)",
            "simulate-scale --config e.toml",
            "consistency --mixture normal(0,1) --sizes 10,20",
        ] {
            let args = std::iter::once("fusion-cluster").chain(cmd.split(' '));
            Cli::try_parse_from(args).unwrap_or_else(|e| panic!("{cmd}: {e}"));
        }
        assert!(Cli::try_parse_from(["fusion-cluster", "bmt", "--input", "a", "--mixture", "b"]).is_err());
        assert!(Cli::try_parse_from(["fusion-cluster", "bmt"]).is_err());
        assert!(Cli::try_parse_from(["fusion-cluster", "frobnicate"]).is_err());
    }
}
