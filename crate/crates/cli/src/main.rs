use std::io::Write;
use std::process::ExitCode;

use clap::Parser;

fn main() -> ExitCode {
    let cli = multinet_cli::Cli::parse();
    let outcome = multinet_cli::dispatch(cli);
    if !outcome.stdout.is_empty() {
        print!("{}", outcome.stdout);
    }
    if !outcome.stderr.is_empty() {
        let _ = writeln!(std::io::stderr(), "error: {}", outcome.stderr.trim_end());
    }
    ExitCode::from(outcome.code as u8)
}
