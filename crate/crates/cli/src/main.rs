mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use ssdwt::coding::Evaluator;
use ssdwt::rdls::FilterId;
use ssdwt::search::Heuristic;
use ssdwt::Mode;

#[derive(Parser)]
#[command(
    name = "ssdwt",
    version,
    about = "Skipped-steps DWT lossless image codec"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compress a PGM image into a .ssd container
    Compress(CompressArgs),
    /// Decompress a .ssd container into a PGM image
    Decompress(DecompressArgs),
    /// Compare variants over a manifest of images
    Bench(BenchArgs),
    /// Print predicted work of a heuristic and check it against a run
    Cost(CostArgs),
    /// Write the synthetic corpus and its manifest
    Corpus(CorpusArgs),
}

#[derive(Args)]
struct SearchArgs {
    /// Search heuristic for --mode ss
    #[arg(long, value_parser = parse_heuristic, default_value = "bh")]
    heuristic: Heuristic,
    /// Step-B passes
    #[arg(long, default_value_t = 1)]
    iters: usize,
    /// Cost function guiding the search
    #[arg(long, value_parser = parse_evaluator, default_value = "bitrate")]
    estimator: Evaluator,
}

#[derive(Args)]
struct CompressArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long = "out")]
    output: PathBuf,
    #[arg(long, value_parser = parse_mode, default_value = "dwt")]
    mode: Mode,
    #[arg(long, default_value_t = 3)]
    levels: usize,
    #[command(flatten)]
    search: SearchArgs,
    /// Candidate RDLS filters, comma separated
    #[arg(long, value_delimiter = ',', value_parser = parse_filter)]
    filters: Option<Vec<FilterId>>,
    /// Print work counters
    #[arg(long)]
    stats: bool,
}

#[derive(Args)]
struct DecompressArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long = "out")]
    output: Option<PathBuf>,
    /// Original PGM to compare the decoded image against
    #[arg(long)]
    verify: Option<PathBuf>,
}

#[derive(Args)]
struct BenchArgs {
    /// Lines of `path,label` with label photo or nonphoto
    #[arg(long)]
    manifest: PathBuf,
    /// Comma-separated variants: dwt, nodwt, fix1, fix2, allskip, stepa,
    /// select, or a heuristic with an optional pass count (bh2, rh1, rdls)
    #[arg(long, default_value = "fix1,fix2,bh1,bh2,rh1")]
    variants: String,
    #[arg(long, value_parser = parse_evaluator, default_value = "bitrate")]
    estimator: Evaluator,
    /// Passes for heuristics listed without a count
    #[arg(long, default_value_t = 1)]
    iters: usize,
    #[arg(long, default_value_t = 3)]
    levels: usize,
    /// CSV destination; standard output when absent
    #[arg(long = "out")]
    output: Option<PathBuf>,
    /// Fill the time columns (warm-up run, then wall time)
    #[arg(long)]
    timing: bool,
}

#[derive(Args)]
struct CostArgs {
    #[arg(long, value_parser = parse_cost_heuristic, default_value = "bh")]
    heuristic: Heuristic,
    #[arg(long, default_value_t = 1)]
    iters: usize,
    /// Finite-level bound instead of the unlimited-level one
    #[arg(long)]
    levels: Option<usize>,
    #[arg(long, value_parser = parse_evaluator, default_value = "bitrate")]
    estimator: Evaluator,
    /// Image for unit timings (T_D, T_E, T_R, T_H0)
    #[arg(long)]
    calibrate: Option<PathBuf>,
    /// Image to run the heuristic on, comparing counters with the bound
    #[arg(long)]
    run: Option<PathBuf>,
}

#[derive(Args)]
struct CorpusArgs {
    #[arg(long = "out")]
    output: PathBuf,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, default_value_t = 4)]
    per_kind: usize,
    #[arg(long, default_value_t = 128)]
    width: usize,
    #[arg(long, default_value_t = 128)]
    height: usize,
}

fn parse_mode(s: &str) -> Result<Mode, String> {
    s.parse()
}

fn parse_heuristic(s: &str) -> Result<Heuristic, String> {
    match s.parse()? {
        Heuristic::HSsRdls => Err("rdls is selected with --mode rdls-ss".into()),
        h => Ok(h),
    }
}

fn parse_cost_heuristic(s: &str) -> Result<Heuristic, String> {
    match s.parse()? {
        h @ (Heuristic::Bh | Heuristic::Rh) => Ok(h),
        h => Err(format!("no closed-form cost for {h}; use bh or rh")),
    }
}

fn parse_evaluator(s: &str) -> Result<Evaluator, String> {
    s.parse()
}

fn parse_filter(s: &str) -> Result<FilterId, String> {
    s.parse()
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::FAILURE
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let result = match cli.command {
        Command::Compress(a) => commands::compress(a),
        Command::Decompress(a) => commands::decompress(a),
        Command::Bench(a) => commands::bench(a),
        Command::Cost(a) => commands::cost(a),
        Command::Corpus(a) => commands::corpus(a),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
