use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use slr_cli::{run, Cli, CliError};

/// Caps the worker pool at `SLR_THREADS` when set.
fn init_thread_pool() -> Result<(), CliError> {
    let Ok(value) = std::env::var("SLR_THREADS") else {
        return Ok(());
    };
    let threads: usize = value
        .trim()
        .parse()
        .ok()
        .filter(|&t| t > 0)
        .ok_or_else(|| CliError::InvalidArgument(format!("SLR_THREADS={value:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| CliError::InvalidArgument(e.to_string()))
}

fn execute(cli: &Cli) -> Result<(), CliError> {
    init_thread_pool()?;
    let value = run(&cli.command)?;
    let mut text = serde_json::to_string_pretty(&value)?;
    text.push('\n');
    match &cli.out {
        Some(path) => std::fs::write(path, text).map_err(|source| CliError::Io {
            path: path.display().to_string(),
            source,
        }),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|source| CliError::Io {
                path: "<stdout>".into(),
                source,
            }),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}", e.to_json());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
