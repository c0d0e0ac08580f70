use std::process::ExitCode;

use bellgraph_cli::Cli;
use clap::Parser;

fn main() -> ExitCode {
    match Cli::parse().execute() {
        Ok(lines) => {
            for line in lines {
                println!("{line}");
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("bellgraph: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
