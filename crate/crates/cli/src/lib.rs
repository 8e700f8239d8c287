//! Front end of the `bm` binary. [`run`] maps an argument list to an exit
//! code and the text written to stdout and stderr.

pub mod args;
pub mod commands;
pub mod input;
pub mod render;

use std::ffi::OsString;

use clap::error::ErrorKind;
use clap::Parser;
use serde_json::json;

use args::{Cli, OutputFormat};
use commands::{config, execute, inputs, paper_ref, CommandError};

pub const EXIT_OK: i32 = 0;
pub const EXIT_DOMAIN: i32 = 2;
pub const EXIT_VERIFY: i32 = 3;
pub const EXIT_USAGE: i32 = 64;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn usage(message: String) -> Self {
        Outcome { code: EXIT_USAGE, stdout: String::new(), stderr: message }
    }
}

pub fn run<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString>,
{
    let argv: Vec<OsString> = argv.into_iter().map(Into::into).collect();
    let argv = match input::expand(argv) {
        Ok(a) => a,
        Err(e) => return Outcome::usage(format!("error: {e}\n")),
    };
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    Outcome { code: EXIT_OK, stdout: text, stderr: String::new() }
                }
                _ => Outcome::usage(text),
            };
        }
    };

    match execute(&cli.command, &cli.global) {
        Ok(done) => Outcome {
            code: if done.verify_failed { EXIT_VERIFY } else { EXIT_OK },
            stdout: done.report.render(cli.global.output),
            stderr: String::new(),
        },
        Err(CommandError::Usage(message)) => Outcome::usage(format!("error: {message}\n")),
        Err(CommandError::Domain(err)) => {
            let message = err.to_string();
            let precondition = err.precondition();
            let stdout = match cli.global.output {
                OutputFormat::Json => {
                    let doc = json!({
                        "op": cli.command.name(),
                        "inputs": inputs(&cli.command),
                        "error": { "precondition": precondition, "message": message },
                        "paper_ref": paper_ref(&cli.command),
                        "config": config(&cli.global),
                    });
                    serde_json::to_string_pretty(&doc).expect("error document serialises") + "\n"
                }
                _ => String::new(),
            };
            Outcome { code: EXIT_DOMAIN, stdout, stderr: format!("error[{precondition}]: {message}\n") }
        }
    }
}
