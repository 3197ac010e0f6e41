use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use pu2rc::cli;

#[derive(Parser)]
#[command(name = "sim", version = cli::BUILD_DESCRIBE, about = "Limited-feedback multiuser beamforming simulator")]
struct Args {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a named figure preset.
    RunPreset {
        name: String,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Trials per grid point (defaults to the preset value).
        #[arg(long)]
        trials: Option<usize>,
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
    /// Run a single experiment described by a JSON file.
    Run {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
    /// Print closed-form quantization-error statistics as CSV.
    Analytics {
        #[arg(value_enum)]
        table: Table,
        #[arg(long)]
        nt: usize,
        #[arg(long)]
        m: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Table {
    Ccdf,
    ElogBounds,
}

fn run(args: Args) -> pu2rc::Result<()> {
    match args.command {
        Command::RunPreset {
            name,
            seed,
            trials,
            out,
        } => {
            let threads = cli::threads_from_env()?;
            for path in cli::with_threads(threads, || cli::run_preset(&name, seed, trials, &out))??
            {
                println!("{}", path.display());
            }
        }
        Command::Run { config, out } => {
            let threads = cli::threads_from_env()?;
            for path in cli::with_threads(threads, || cli::run_custom(&config, &out))?? {
                println!("{}", path.display());
            }
        }
        Command::Analytics { table, nt, m } => {
            let text = match table {
                Table::Ccdf => cli::ccdf_table(nt, m)?,
                Table::ElogBounds => cli::elog_bounds_table(nt, m)?,
            };
            print!("{text}");
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Args::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
