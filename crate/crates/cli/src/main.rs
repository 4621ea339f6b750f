use std::process::ExitCode;

use clap::Parser;
use whittaker_cli::{run, Cli, RunConfig};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = RunConfig::from_cli(&cli).and_then(|config| run(&config));
    match result {
        Ok(outcome) => {
            for w in &outcome.warnings {
                eprintln!("{w}");
            }
            println!("{}", outcome.summary);
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
