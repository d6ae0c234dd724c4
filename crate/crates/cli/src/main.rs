use std::io::Write;
use std::process::ExitCode;

use clap::Parser;

mod commands;

use commands::{Cli, Status};

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = e.print();
                return ExitCode::SUCCESS;
            }
            let text = e.to_string();
            let message = text
                .split("Usage:")
                .next()
                .unwrap_or_default()
                .split_whitespace()
                .collect::<Vec<_>>()
                .join(" ");
            eprintln!("error: {}", message.trim_start_matches("error: "));
            return ExitCode::from(Status::InputError as u8);
        }
    };
    let mut out = String::new();
    let status = match commands::run(&cli, &mut out) {
        Ok(status) => status,
        Err(e) => {
            eprintln!("error: {e}");
            Status::InputError
        }
    };
    let mut stdout = std::io::stdout().lock();
    if stdout.write_all(out.as_bytes()).and_then(|_| stdout.flush()).is_err() {
        return ExitCode::from(Status::InputError as u8);
    }
    ExitCode::from(status as u8)
}
