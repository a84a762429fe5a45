use std::process::ExitCode;

use clap::Parser;
use twarq_cli::args::Cli;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match twarq_cli::run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("twarq: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
