use std::io::Write;
use std::process::ExitCode;

use renyi_xent_cli::{parse_args, run, CliError, EXIT_ERROR, EXIT_OK};

fn main() -> ExitCode {
    let out = match parse_args(std::env::args_os()) {
        Ok(job) => run(&job),
        Err(CliError::Help(text)) => {
            print!("{text}");
            return ExitCode::from(EXIT_OK as u8);
        }
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_ERROR as u8);
        }
    };
    // a closed pipe is not worth a panic
    let _ = std::io::stdout().write_all(out.stdout.as_bytes());
    let _ = std::io::stderr().write_all(out.stderr.as_bytes());
    ExitCode::from(out.exit_code as u8)
}
