use std::process::ExitCode;

use clap::Parser;
use fusion_clustering::cli::{run_command, Cli, THREADS_ENV};

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(threads) = std::env::var(THREADS_ENV).ok().and_then(|v| v.parse().ok()) {
        // Only fails if a pool already exists, which cannot happen here.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global();
    }
    let result = run_command(&cli).and_then(|out| match &cli.output {
        Some(path) => std::fs::write(path, out).map_err(Into::into),
        None => {
            print!("{out}");
            Ok(())
        }
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
