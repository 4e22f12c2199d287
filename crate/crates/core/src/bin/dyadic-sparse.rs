use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use dyadic_sparse::experiments::{
    cmd_buckley, cmd_domination, cmd_endpoint, cmd_sharpness, cmd_weighted_bound, ExperimentConfig, Report,
};
use dyadic_sparse::Result;

#[derive(Parser)]
#[command(name = "dyadic-sparse", version, about = "Dyadic sparse domination experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Lower bound for the rough commutator on power weights.
    Sharpness(Options),
    /// Constructive sparse domination over random seeds.
    Domination(Options),
    /// Weighted vector bound against the mixed A_p-A_inf right side.
    WeightedBound(Options),
    /// Weak-type endpoint ratios over a level grid.
    Endpoint(Options),
    /// Slope of the maximal operator norm against the A_p constant.
    Buckley(Options),
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Args)]
struct Options {
    #[arg(long, default_value_t = 1.5)]
    p: f64,
    #[arg(long, default_value_t = 2.0)]
    q: f64,
    #[arg(long, default_value_t = 1.0)]
    beta: f64,
    /// Comma-separated list.
    #[arg(long, value_delimiter = ',', default_values_t = [0.4, 0.2, 0.1, 0.05])]
    deltas: Vec<f64>,
    /// Cells per axis are 2^depth; each command has its own default.
    #[arg(long)]
    depth: Option<u32>,
    #[arg(long, default_value_t = 1)]
    dim: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 20)]
    seeds: usize,
    /// Length of random function sequences.
    #[arg(long, default_value_t = 2)]
    functions: usize,
    /// const1 or cos2theta.
    #[arg(long, default_value = "const1")]
    omega: String,
    /// xlogx or affine:<c>.
    #[arg(long, default_value = "xlogx")]
    amplitude: String,
    /// unit or power:<exponent>.
    #[arg(long, default_value = "power:-0.5")]
    weight: String,
    /// Drop this many of the largest deltas from slope fits.
    #[arg(long, default_value_t = 0)]
    exclude_coarsest: usize,
    /// Initial threshold multiplier of the sparse construction.
    #[arg(long = "c2")]
    c2_initial: Option<f64>,
    /// Replace the random inputs by zero.
    #[arg(long)]
    zero_input: bool,
    /// Table destination; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Directory receiving two-column plot files.
    #[arg(long)]
    plotdata: Option<PathBuf>,
}

impl Options {
    fn config(&self) -> ExperimentConfig {
        ExperimentConfig {
            p: self.p,
            q: self.q,
            beta: self.beta,
            deltas: self.deltas.clone(),
            depth: self.depth,
            dim: self.dim,
            seed: self.seed,
            seeds: self.seeds,
            functions: self.functions,
            omega: self.omega.clone(),
            amplitude: self.amplitude.clone(),
            weight: self.weight.clone(),
            exclude_coarsest: self.exclude_coarsest,
            c2_initial: self.c2_initial,
            zero_input: self.zero_input,
        }
    }
}

fn emit(report: &Report, opts: &Options) -> Result<()> {
    let table = match opts.format {
        Format::Csv => report.to_csv(),
        Format::Json => report.to_json(),
    };
    match &opts.out {
        Some(path) => std::fs::write(path, table)?,
        None => print!("{table}"),
    }
    if let Some(dir) = &opts.plotdata {
        std::fs::create_dir_all(dir)?;
        for (name, body) in report.plot_data() {
            std::fs::write(dir.join(name), body)?;
        }
    }
    eprint!("{}", report.summary_text());
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    let (driver, opts): (fn(&ExperimentConfig) -> Result<Report>, Options) = match cli.command {
        Command::Sharpness(o) => (cmd_sharpness, o),
        Command::Domination(o) => (cmd_domination, o),
        Command::WeightedBound(o) => (cmd_weighted_bound, o),
        Command::Endpoint(o) => (cmd_endpoint, o),
        Command::Buckley(o) => (cmd_buckley, o),
    };
    let report = driver(&opts.config())?;
    emit(&report, &opts)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
