use std::process::ExitCode;

use clap::Parser;
use trihodge_cli::{run, Cli, Failure};

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            match &failure {
                Failure::Usage(e) => eprintln!("error: {e:#}"),
                Failure::Check(name) => eprintln!("FAIL {name}"),
            }
            ExitCode::from(failure.exit_code() as u8)
        }
    }
}
