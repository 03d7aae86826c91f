use std::io::Write;
use std::process::ExitCode;
use std::time::Instant;

use chainlattice::Error;
use clap::{Args, Parser, Subcommand, ValueEnum};

mod commands;
mod input;
mod report;

use report::{Manifest, Outcome};

#[derive(Parser, Debug)]
#[command(name = "chainlattice", version, about = "Chain counting and supersaturation tools for the Boolean lattice")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Global {
    /// Seed for every random choice.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Worker threads; defaults to the available parallelism, 0 uses rayon's global pool.
    #[arg(long, global = true)]
    workers: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<std::path::PathBuf>,
    /// Leave wall-clock fields out so reruns are byte-identical.
    #[arg(long, global = true)]
    no_timing: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Human,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Chain weights and counts.
    #[command(subcommand)]
    Chains(commands::chains::Cmd),
    /// Symmetric chain decompositions.
    #[command(subcommand)]
    Scd(commands::scd::Cmd),
    /// Weighted chain sums and the avoiding measure.
    #[command(subcommand)]
    Supersat(commands::supersat::Cmd),
    /// Compressions of measured subhypergraphs.
    #[command(subcommand)]
    Compress(commands::compress::Cmd),
    /// Vertex degrees of the k-chain hypergraph.
    #[command(subcommand)]
    Degrees(commands::degrees::Cmd),
    /// Minimum chain counts over families of a given size.
    #[command(subcommand)]
    Search(commands::search::Cmd),
    /// Families in the grid [m]^d.
    #[command(subcommand)]
    Grid(commands::grid::Cmd),
}

/// Settings shared by every subcommand.
pub struct Ctx {
    pub seed: u64,
    pub workers: usize,
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Domain(_) | Error::Parse { .. } => 2,
        Error::Infeasible(_) => 1,
        Error::Resource(_) => 3,
    }
}

/// argv with the program reduced to its file name.
fn command_line() -> String {
    let mut args: Vec<String> = std::env::args().collect();
    if let Some(first) = args.first_mut() {
        if let Some(name) = std::path::Path::new(first).file_name() {
            *first = name.to_string_lossy().into_owned();
        }
    }
    args.join(" ")
}

fn run(cli: Cli) -> Result<u8, Error> {
    let available = std::thread::available_parallelism().map_or(1, |p| p.get());
    let ctx = Ctx { seed: cli.global.seed, workers: cli.global.workers.unwrap_or(available) };
    let start = Instant::now();
    let outcome: Outcome = match cli.command {
        Command::Chains(c) => commands::chains::run(c, &ctx)?,
        Command::Scd(c) => commands::scd::run(c, &ctx)?,
        Command::Supersat(c) => commands::supersat::run(c, &ctx)?,
        Command::Compress(c) => commands::compress::run(c, &ctx)?,
        Command::Degrees(c) => commands::degrees::run(c, &ctx)?,
        Command::Search(c) => commands::search::run(c, &ctx)?,
        Command::Grid(c) => commands::grid::run(c, &ctx)?,
    };
    let manifest = Manifest {
        command_line: command_line(),
        version: env!("CARGO_PKG_VERSION").to_string(),
        seed: ctx.seed,
        rng: chainlattice::scd::RNG_ALGORITHM.to_string(),
        workers: ctx.workers,
        available_parallelism: available,
        wall_time_ms: (!cli.global.no_timing).then(|| start.elapsed().as_millis()),
    };
    let bytes = report::emit(&manifest, &outcome, cli.global.format, cli.global.no_timing)?;
    match &cli.global.out {
        Some(path) => std::fs::write(path, &bytes)
            .map_err(|e| Error::Domain(format!("cannot write {}: {e}", path.display())))?,
        None => {
            let mut out = std::io::stdout().lock();
            let _ = out.write_all(&bytes);
            let _ = out.flush();
        }
    }
    Ok(u8::from(outcome.failed))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
