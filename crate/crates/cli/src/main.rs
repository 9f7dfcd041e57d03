mod commands;
mod report;

use std::process::ExitCode;

use clap::Parser;

use crate::commands::Cli;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let report = commands::dispatch(&cli);
    report.emit(cli.json, cli.timing);
    ExitCode::from(report.status.exit_code())
}
