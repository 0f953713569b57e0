mod args;
mod commands;
mod input;

use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Label(cmd) => commands::label(cmd),
        Command::Eval(cmd) => commands::eval(cmd),
        Command::Coverage(cmd) => commands::coverage_cmd(cmd),
        Command::Distribution(cmd) => commands::distribution_cmd(cmd),
        Command::Compare(cmd) => commands::compare_cmd(cmd),
        Command::Diagnose(cmd) => commands::diagnose_cmd(cmd),
        Command::ValidateLabels(cmd) => commands::validate_labels(cmd),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("error: {failure}");
            ExitCode::from(failure.exit_code())
        }
    }
}
