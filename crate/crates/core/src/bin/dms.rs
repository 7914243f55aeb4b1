use std::process::ExitCode;

use clap::Parser;
use dms::cli::{self, Cli};

fn main() -> ExitCode {
    let args = Cli::parse();
    let level = match args.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();

    match run(args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            let code = err.downcast_ref::<dms::Error>().map_or(1, cli::exit_code);
            ExitCode::from(code as u8)
        }
    }
}

fn run(args: Cli) -> anyhow::Result<()> {
    let what = match &args.command {
        cli::Command::Compute(_) => "compute",
        cli::Command::Bench(_) => "bench",
        cli::Command::Distance(_) => "distance",
    };
    anyhow::Context::with_context(cli::run(args), || format!("{what} failed"))
}
