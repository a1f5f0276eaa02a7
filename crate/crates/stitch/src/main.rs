use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use drat_stitch::cli::{execute, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        2 => "debug",
        _ => "trace",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level))
        .format_timestamp(None)
        .init();
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    let code = match execute(&cli.command, &mut out) {
        Ok(()) => 0,
        Err(failure) => {
            let _ = out.flush();
            eprintln!("error: {failure}");
            failure.exit_code()
        }
    };
    let _ = out.flush();
    ExitCode::from(code)
}
