//! `affinelens` command-line front end.
//!
//! Exit codes: 0 success, 1 verification mismatch (or skipped candidates
//! under `--strict`), 2 usage or input error, 3 numerical failure.

mod config;
mod run;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use config::CliError;

#[derive(Debug, Parser)]
#[command(name = "affinelens", version, about = "Exact affine-region enumeration for piecewise-affine networks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Enumerate all regions and write report.json.
    Enumerate(CommonArgs),
    /// Compare an enumeration against the brute-force oracle.
    Verify {
        #[command(flatten)]
        common: CommonArgs,
        /// Check this report instead of enumerating afresh.
        #[arg(long, value_name = "PATH")]
        report: Option<String>,
        /// Also sample a grid of N points per axis as a lower-bound check.
        #[arg(long, value_name = "N")]
        resolution: Option<usize>,
    },
    /// Enumerate a 2D domain (or a 2D slice) and write render.svg.
    Render {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long, default_value = "region_id", value_parser = ["region_id", "class_label", "boundary_band"])]
        mode: String,
        /// Half-width of the decision-boundary band, in output units.
        #[arg(long, default_value_t = 0.05, value_name = "EPS")]
        band: f64,
        #[arg(long, default_value_t = 800)]
        width: u32,
        #[arg(long, default_value_t = 800)]
        height: u32,
        #[arg(long, default_value_t = 0)]
        color_seed: u64,
    },
    /// Write counts.csv with one row per activation layer.
    Stats {
        #[command(flatten)]
        common: CommonArgs,
        /// Read counts from an existing report instead of enumerating.
        #[arg(long, value_name = "PATH")]
        report: Option<String>,
    },
}

#[derive(Debug, Args)]
struct CommonArgs {
    #[arg(long, value_name = "PATH")]
    network: Option<String>,
    #[arg(long, value_name = "PATH", conflicts_with = "box_")]
    domain: Option<String>,
    /// Box domain [-H, H]^D; H defaults to 1.
    #[arg(long = "box", id = "box_", num_args = 1..=2, value_names = ["D", "H"])]
    box_: Option<Vec<String>>,
    /// Comma-separated interior start point.
    #[arg(long, value_name = "CSV")]
    seed_point: Option<String>,
    #[arg(long, default_value_t = 1)]
    workers: usize,
    /// Fail when any candidate region was skipped.
    #[arg(long)]
    strict: bool,
    #[arg(long, default_value = ".", value_name = "DIR")]
    out: String,
    /// Restrict to the plane BASE + t1·DIR1 + t2·DIR2 (comma-separated vectors).
    #[arg(long, num_args = 3, value_names = ["BASE", "DIR1", "DIR2"])]
    slice: Option<Vec<String>>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Enumerate(common) => run::enumerate(&common),
        Command::Verify {
            common,
            report,
            resolution,
        } => run::verify(&common, report.as_deref(), resolution),
        Command::Render {
            common,
            mode,
            band,
            width,
            height,
            color_seed,
        } => run::render(&common, &mode, band, width, height, color_seed),
        Command::Stats { common, report } => run::stats(&common, report.as_deref()),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}

impl From<affinelens::Error> for CliError {
    fn from(e: affinelens::Error) -> Self {
        if e.is_numerical() {
            CliError::Numerical(e.to_string())
        } else {
            CliError::Usage(e.to_string())
        }
    }
}
