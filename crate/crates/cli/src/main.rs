use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use conformable_cli::args::{Cli, Command};
use conformable_cli::{commands, ConfigError, EXIT_CONFIG_ERROR};

fn out_path(command: &Command) -> Option<&std::path::Path> {
    match command {
        Command::Solve(a) => a.out.as_deref(),
        Command::Converge(a) => a.out.as_deref(),
        Command::Invalidity(a) => a.out.as_deref(),
        Command::CfdCheck(a) => a.out.as_deref(),
        Command::Reproduce(a) => a.out.as_deref(),
        Command::ListProblems => None,
    }
}

fn run(cli: &Cli) -> Result<(), ConfigError> {
    let command = cli.command();
    let text = commands::run(command)?;
    match out_path(command) {
        Some(path) => std::fs::write(path, text)?,
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            stdout.flush()?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(EXIT_CONFIG_ERROR as u8)
        }
    }
}
