use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;

use cmvkit_cli::{exit_code, run, Cli, EXIT_NUMERICAL, EXIT_VALIDATION};

fn write_output(cli: &Cli, text: &str) -> std::io::Result<()> {
    match &cli.out {
        Some(path) => std::fs::write(path, text),
        None => {
            use std::io::Write;
            std::io::stdout().lock().write_all(text.as_bytes())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(EXIT_VALIDATION as u8),
            };
        }
    };
    match run(&cli) {
        Ok(outcome) => {
            if let Err(e) = write_output(&cli, &outcome.text) {
                eprintln!("error: {e}");
                return ExitCode::from(EXIT_VALIDATION as u8);
            }
            match outcome.breach {
                Some(breach) => {
                    eprintln!("error: {breach}");
                    ExitCode::from(EXIT_NUMERICAL as u8)
                }
                None => ExitCode::SUCCESS,
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e) as u8)
        }
    }
}
