use std::process::ExitCode;

use netvalue_cli::{execute, parse_args, UsageError};

fn main() -> ExitCode {
    let cmd = match parse_args(std::env::args_os()) {
        Ok(cmd) => cmd,
        Err(UsageError::Clap(e)) => e.exit(),
        Err(e @ UsageError::Invalid(_)) => {
            eprintln!("{e}");
            return ExitCode::from(2);
        }
    };
    let stdout = std::io::stdout();
    match execute(cmd, &mut stdout.lock()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
