use std::process::ExitCode;

use clap::Parser;
use respcheck::{run, Cli, ERROR_EXIT};

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli, &mut std::io::stdout().lock()) {
        Ok(status) => status.exit_code(),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(ERROR_EXIT)
        }
    }
}
