use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(name = "conic-em", version, about = "Conical-corner electromagnetic scattering experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the experiment described by an INI config.
    Run {
        config: PathBuf,
        /// Output directory (overrides `[output] dir`).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Worker threads (default: CONIC_EM_THREADS, else all cores).
        #[arg(long)]
        threads: Option<usize>,
    },
    /// List registered experiments.
    List,
}

fn main() -> ExitCode {
    match Cli::parse().command {
        Command::List => {
            print!("{}", conic_em::list());
            ExitCode::SUCCESS
        }
        Command::Run { config, out, threads } => match conic_em::run(&config, out.as_deref(), threads) {
            Ok(o) => {
                let verdict = if o.pass { "PASS" } else { "FAIL" };
                println!("{} {verdict} -> {}", o.experiment, o.out_dir.display());
                if o.pass {
                    ExitCode::SUCCESS
                } else {
                    ExitCode::from(2)
                }
            }
            Err(e) => {
                eprintln!("error: {e}");
                ExitCode::from(1)
            }
        },
    }
}
