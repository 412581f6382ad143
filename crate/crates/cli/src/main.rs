use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(name = "majorana", version, about = "Majorana chain and ladder experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the experiment described by a TOML config.
    Run {
        config: PathBuf,
        /// Output directory (overrides MAJORANA_OUT_DIR and output_dir).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// List experiments, their config keys and output columns.
    List,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::List => {
            print!("{}", majorana_cli::list_experiments());
            ExitCode::SUCCESS
        }
        Command::Run { config, out } => {
            let outcome = majorana_cli::run_file(&config, out.as_deref());
            if let Some(dir) = &outcome.out_dir {
                println!("outputs: {}", dir.display());
            }
            if outcome.exit_code != 0 {
                eprintln!("majorana: {}", outcome.message);
            }
            ExitCode::from(outcome.exit_code as u8)
        }
    }
}
