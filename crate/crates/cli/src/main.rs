use std::io::Write;
use std::process::ExitCode;

use clap::Parser;

use fibre_cli::commands::{run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let out = run(&cli);
    std::io::stdout().write_all(out.stdout.as_bytes()).ok();
    if !out.stderr.is_empty() && (!cli.quiet || out.code == fibre_cli::commands::EXIT_PRECONDITION) {
        std::io::stderr().write_all(out.stderr.as_bytes()).ok();
    }
    ExitCode::from(out.code as u8)
}
