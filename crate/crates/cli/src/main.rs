use std::fs;
use std::process::ExitCode;

use clap::Parser;

mod commands;
mod config;
mod output;

use config::{resolve, Cli, ConfigFile, UsageError};

const EXIT_FAILURE: u8 = 1;
const EXIT_USAGE: u8 = 2;

/// Errors caused by the request rather than the computation.
fn is_usage(e: &gaussent::Error) -> bool {
    use gaussent::Error::*;
    matches!(
        e,
        InvalidSubsystem { .. }
            | InvalidSqueezing(_)
            | DimensionTooSmall { .. }
            | UnsupportedOrder { .. }
            | EnergyTooSmall { .. }
            | InvalidSpec(_)
            | Domain(_)
            | SizeMismatch { .. }
            | RowOverflow { .. }
            | InvalidPermutation(_)
    )
}

fn load_config(cli: Cli) -> Result<config::RunConfig, UsageError> {
    let file = match &cli.flags.config {
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|e| UsageError(format!("{}: {e}", path.display())))?;
            serde_json::from_str::<ConfigFile>(&text).map_err(|e| UsageError(format!("{}: {e}", path.display())))?
        }
        None => ConfigFile::default(),
    };
    resolve(cli.command, cli.flags, file)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cfg = match load_config(cli) {
        Ok(cfg) => cfg,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_USAGE);
        }
    };
    match commands::run(&cfg) {
        Ok(()) => ExitCode::SUCCESS,
        Err(commands::Failure::Usage(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(commands::Failure::Core(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(if is_usage(&e) { EXIT_USAGE } else { EXIT_FAILURE })
        }
        Err(commands::Failure::Mismatch(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_FAILURE)
        }
    }
}
