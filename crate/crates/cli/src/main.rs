mod ablate;
mod analysis;
mod analyze;
mod args;
mod features;
mod null;
mod output;
mod report;
mod setup;
mod simulate;
mod svg;

use std::process::ExitCode;

use clap::Parser;
use env_logger::Env;

use args::{Cli, Command};

fn main() -> ExitCode {
    env_logger::Builder::from_env(Env::new().filter_or("SACCADE_LAB_LOG", "warn")).init();
    let cli = Cli::parse();
    let g = &cli.global;
    let result = match &cli.command {
        Command::Simulate => simulate::run(g),
        Command::Analyze { logs } => analyze::run(g, logs),
        Command::Null => null::run(g),
        Command::Ablate { reference } => ablate::run(g, reference),
        Command::Features => features::run(g),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
