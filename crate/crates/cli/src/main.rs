use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use qpgf_cli::{run, Mode, RunOptions};

#[derive(Parser)]
#[command(name = "qpgf", version, about = "Doubly periodic scattering with shifted quasi-periodic Green functions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the study described by a configuration file.
    Solve {
        #[arg(long)]
        config: PathBuf,
        /// Output directory; overrides the configuration.
        #[arg(long)]
        output: Option<PathBuf>,
        /// Mode override.
        #[arg(long, value_enum)]
        mode: Option<Mode>,
        /// Worker threads for assembly (default: all cores).
        #[arg(long)]
        threads: Option<usize>,
        /// Reserved; the solver has no stochastic components.
        #[arg(long)]
        seed: Option<u64>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let Command::Solve {
        config,
        output,
        mode,
        threads,
        seed,
    } = cli.command;
    let opts = RunOptions {
        config,
        output,
        mode,
        threads,
        seed,
    };
    match run(&opts) {
        Ok(summary) => {
            println!("{summary}");
            ExitCode::SUCCESS
        }
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::FAILURE
        }
    }
}
