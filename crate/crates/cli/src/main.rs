//! `distspace` — depth- and distance-based robust classification from
//! the command line: fit models on labelled CSV tables, label new
//! points, replay replicated benchmark scenarios, and inspect bag
//! distances.
//!
//! Exit codes: 0 on success, 1 for data or computation failures, 2 for
//! usage errors (including invalid method/measure combinations and
//! unknown configuration keys). Every randomised step is driven by an
//! explicit seed, and seeded artifacts are byte-identical across runs
//! and thread counts.

mod commands;
mod config;

use clap::{Args, Parser, Subcommand};
use commands::{BagdistArgs, BenchArgs, ClassifyArgs, TrainArgs};
use config::CliError;
use std::path::PathBuf;

#[derive(Parser)]
#[command(name = "distspace", version, about = "Robust depth- and distance-based classification")]
struct Cli {
    /// Flat key=value configuration file; explicit flags override it.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,

    /// Thread-pool size (0 = all cores). Benchmarks default to all
    /// cores, other commands to one thread.
    #[arg(long, global = true, value_name = "N")]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Fit a classification rule on a labelled CSV table.
    Train(TrainCli),
    /// Label the rows of a CSV table with a fitted model.
    Classify(ClassifyCli),
    /// Run replicated benchmark scenarios and summarise error rates.
    Bench(BenchCli),
    /// Report bag distances (and outlyingness) of query points.
    Bagdist(BagdistCli),
}

#[derive(Args)]
struct TrainCli {
    /// Labelled CSV table (header row required).
    #[arg(long, value_name = "FILE")]
    data: Option<PathBuf>,
    /// Label column, by header name or 0-based index [default: label].
    #[arg(long, value_name = "NAME")]
    label_col: Option<String>,
    /// maxdepth, mindist, distspace, ddknn, or knn.
    #[arg(long)]
    method: Option<String>,
    /// hd, pd, spd (depths) or bd, sdo, ao (distances).
    #[arg(long)]
    measure: Option<String>,
    /// Fixed neighbour count (skips cross-validation).
    #[arg(long)]
    k: Option<usize>,
    /// Comma-separated candidate ks for cross-validation.
    #[arg(long, value_name = "LIST")]
    k_grid: Option<String>,
    /// Standardize kNN coordinates by training median/MAD.
    #[arg(long, num_args = 0..=1, default_missing_value = "true", value_name = "BOOL")]
    rescale: Option<bool>,
    /// Standardize features by this file's median/MAD before fitting.
    #[arg(long, num_args = 0..=1, default_missing_value = "true", value_name = "BOOL")]
    standardize: Option<bool>,
    /// Seed for direction sampling [default: 0].
    #[arg(long)]
    seed: Option<u64>,
    /// Where to write the model JSON.
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ClassifyCli {
    /// Model JSON written by `train`.
    #[arg(long, value_name = "FILE")]
    model: Option<PathBuf>,
    /// CSV table to label (header row required).
    #[arg(long, value_name = "FILE")]
    data: Option<PathBuf>,
    /// Label column to strip from the input, if it has one.
    #[arg(long, value_name = "NAME")]
    label_col: Option<String>,
    /// Where to write predictions.csv.
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct BenchCli {
    /// Built-in simulation setting: 1, 2, or 3.
    #[arg(long)]
    setting: Option<String>,
    /// Labelled CSV table, split anew each replication.
    #[arg(long, value_name = "FILE")]
    data: Option<PathBuf>,
    /// Download (or reuse the cached) banknote authentication dataset.
    #[arg(long, num_args = 0..=1, default_missing_value = "true", value_name = "BOOL")]
    fetch_banknote: Option<bool>,
    /// Label-first curve archive, split anew each replication.
    #[arg(long, value_name = "FILE")]
    ucr: Option<PathBuf>,
    /// Label column for --data [default: label].
    #[arg(long, value_name = "NAME")]
    label_col: Option<String>,
    /// Training rows per replication (--data / --fetch-banknote).
    #[arg(long)]
    train_size: Option<usize>,
    /// Per-group training sizes (settings and --ucr), comma-separated.
    #[arg(long, value_name = "LIST")]
    train_sizes: Option<String>,
    /// Test observations per group for the built-in settings
    /// [default: 500].
    #[arg(long)]
    test_per_group: Option<usize>,
    /// Apportion training rows to classes by largest remainder.
    #[arg(long, num_args = 0..=1, default_missing_value = "true", value_name = "BOOL")]
    stratified: Option<bool>,
    /// Standardize each split by its training median/MAD
    /// [default: true for --fetch-banknote, false otherwise].
    #[arg(long, num_args = 0..=1, default_missing_value = "true", value_name = "BOOL")]
    standardize: Option<bool>,
    /// Number of replications [default: 200].
    #[arg(long)]
    runs: Option<usize>,
    /// Fraction of training labels to scramble, in [0, 1) [default: 0].
    #[arg(long)]
    mislabel: Option<f64>,
    /// Comma-separated methods, e.g. 'distspace(bd),maxdepth(spd),knn'.
    #[arg(long, value_name = "LIST")]
    methods: Option<String>,
    /// Master seed [default: 0].
    #[arg(long)]
    seed: Option<u64>,
    /// Cache directory for downloaded datasets.
    #[arg(long, value_name = "DIR")]
    cache_dir: Option<PathBuf>,
    /// Override the banknote download URL.
    #[arg(long, value_name = "URL")]
    banknote_url: Option<String>,
    /// Directory for results.csv and summary.json.
    #[arg(long, value_name = "DIR")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct BagdistCli {
    /// CSV table of sample points; all columns numeric unless
    /// --label-col strips one.
    #[arg(long, value_name = "FILE")]
    data: Option<PathBuf>,
    /// Label column to strip from the sample, if it has one.
    #[arg(long, value_name = "NAME")]
    label_col: Option<String>,
    /// CSV table of query points (header row required).
    #[arg(long, value_name = "FILE")]
    query: Option<PathBuf>,
    /// Comma-separated subset of bd, sdo, ao [default: bd].
    #[arg(long, value_name = "LIST")]
    measures: Option<String>,
    /// Also export the bag polygon (bivariate data only).
    #[arg(long, num_args = 0..=1, default_missing_value = "true", value_name = "BOOL")]
    polygon: Option<bool>,
    /// Seed for direction sampling [default: 0].
    #[arg(long)]
    seed: Option<u64>,
    /// Optional JSON report path.
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
}

fn run(cli: Cli) -> Result<(), CliError> {
    let config = cli.config.as_deref();
    let threads = cli.threads;
    match cli.command {
        Cmd::Train(a) => commands::cmd_train(
            TrainArgs {
                data: a.data,
                label_col: a.label_col,
                method: a.method,
                measure: a.measure,
                k: a.k,
                k_grid: a.k_grid,
                rescale: a.rescale,
                standardize: a.standardize,
                seed: a.seed,
                out: a.out,
            },
            config,
            threads,
        ),
        Cmd::Classify(a) => commands::cmd_classify(
            ClassifyArgs {
                model: a.model,
                data: a.data,
                label_col: a.label_col,
                out: a.out,
            },
            config,
            threads,
        ),
        Cmd::Bench(a) => commands::cmd_bench(
            BenchArgs {
                setting: a.setting,
                data: a.data,
                fetch_banknote: a.fetch_banknote,
                ucr: a.ucr,
                label_col: a.label_col,
                train_size: a.train_size,
                train_sizes: a.train_sizes,
                test_per_group: a.test_per_group,
                stratified: a.stratified,
                standardize: a.standardize,
                runs: a.runs,
                mislabel: a.mislabel,
                methods: a.methods,
                seed: a.seed,
                cache_dir: a.cache_dir,
                banknote_url: a.banknote_url,
                out: a.out,
            },
            config,
            threads,
        ),
        Cmd::Bagdist(a) => commands::cmd_bagdist(
            BagdistArgs {
                data: a.data,
                label_col: a.label_col,
                query: a.query,
                measures: a.measures,
                polygon: a.polygon,
                seed: a.seed,
                out: a.out,
            },
            config,
            threads,
        ),
    }
}

fn main() {
    let cli = Cli::parse();
    if let Err(e) = run(cli) {
        eprintln!("{e}");
        std::process::exit(e.exit_code());
    }
}
