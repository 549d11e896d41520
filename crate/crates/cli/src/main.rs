use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use tgi_cli::{cmd_figures, cmd_run, default_workers, CliError, RunOptions};

#[derive(Parser)]
#[command(name = "tgi", about = "Temporal ghost imaging encryption simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario or sweep described by a config file.
    Run {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = default_workers())]
        workers: usize,
        /// Overrides the config's seed.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        force: bool,
        /// Record wall-clock seconds in the report.
        #[arg(long)]
        timing: bool,
    },
    /// Run a figure preset, writing one CSV per panel.
    Figures {
        id: String,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = default_workers())]
        workers: usize,
        #[arg(long)]
        force: bool,
        #[arg(long)]
        timing: bool,
    },
    Version,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let result: Result<(), CliError> = match cli.command {
        Command::Run {
            config,
            out,
            workers,
            seed,
            force,
            timing,
        } => cmd_run(
            &config,
            &out,
            seed,
            &RunOptions {
                workers,
                force,
                timing,
                quiet: false,
            },
        ),
        Command::Figures {
            id,
            out,
            workers,
            force,
            timing,
        } => cmd_figures(
            &id,
            &out,
            &RunOptions {
                workers,
                force,
                timing,
                quiet: false,
            },
        )
        .map(|paths| {
            for p in paths {
                println!("wrote {}", p.display());
            }
        }),
        Command::Version => {
            println!("tgi {}", env!("CARGO_PKG_VERSION"));
            Ok(())
        }
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("tgi: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
