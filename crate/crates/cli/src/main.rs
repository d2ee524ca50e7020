//! `raysearch`: command-line front end for the ray search library.
//!
//! Every command prints one JSON document (or CSV with `--format csv`);
//! `sweep` prints JSON Lines. Failures print `{"schema":1,"error":{...}}` to
//! stderr and exit nonzero. Worker threads follow `RAYON_NUM_THREADS`.

mod args;
mod commands;
mod report;

use std::io::Write;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;
use serde_json::json;

use crate::args::Cli;
use crate::commands::{dispatch, CliError};

fn fail(err: &CliError, code: u8) -> ExitCode {
    let doc = json!({ "schema": report::SCHEMA, "error": { "kind": err.kind, "message": err.message } });
    eprintln!("{doc}");
    ExitCode::from(code)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) if matches!(err.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            let _ = err.print();
            return ExitCode::SUCCESS;
        }
        Err(err) => {
            let message = err.render().to_string();
            return fail(&CliError::usage(message.trim_end()), 2);
        }
    };
    let report = match dispatch(&cli.command) {
        Ok(report) => report,
        Err(err) => return fail(&err, if err.kind == "usage" { 2 } else { 1 }),
    };
    let mut buffer = Vec::new();
    report.write(cli.format, &mut buffer).expect("writing to memory cannot fail");
    let mut stdout = std::io::stdout().lock();
    if stdout.write_all(&buffer).and_then(|_| stdout.flush()).is_err() {
        return ExitCode::from(1);
    }
    ExitCode::SUCCESS
}
