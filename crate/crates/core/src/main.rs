use std::process::ExitCode;

use clap::Parser;
use hypoent::cli::{run, Cli};

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => e.exit(),
    };
    match run(&cli, &mut std::io::stdout().lock()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("hypoent: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
