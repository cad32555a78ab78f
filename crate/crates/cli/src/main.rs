use std::io::Write;

use clap::error::ErrorKind;
use clap::Parser;
use serde_json::Value;

use qball_cli::commands::{run, Cli, CliError};

fn emit(value: &Value) {
    let text = serde_json::to_string_pretty(value).expect("plain data");
    // A closed pipe downstream is not an error worth reporting.
    let _ = writeln!(std::io::stdout().lock(), "{text}");
}

fn fail(err: CliError) -> ! {
    emit(&err.to_json());
    std::process::exit(err.exit_code());
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => e.exit(),
        Err(e) => fail(CliError::Usage(e.to_string().trim_end().to_string())),
    };
    match run(cli) {
        Ok(value) => emit(&value),
        Err(err) => fail(err),
    }
}
