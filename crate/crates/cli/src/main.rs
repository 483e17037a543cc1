mod commands;
mod config;

use std::io::Write;
use std::process::ExitCode;

use clap::Parser;

use config::{Cli, Output};

/// How a command ended, before the exit-code policy is applied.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Pass,
    /// The result depends on an assumed membership or exhausted fuel.
    Tainted,
    Fail,
}

pub struct Outcome {
    pub text: String,
    pub json: serde_json::Value,
    pub status: Status,
    /// Printed verbatim instead of `text`/`json` (trace files).
    pub raw: Option<String>,
}

#[derive(Debug)]
pub enum CliError {
    /// Bad input: unparsable term, unreadable or malformed file.
    Usage(String),
    /// A check could not be carried out (invalid trace, strict fuel failure).
    Check(String),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli) {
        Ok(out) => {
            let tainted = out.status == Status::Tainted;
            let mut stdout = std::io::stdout().lock();
            // A closed pipe is not an error worth reporting.
            let _ = if let Some(raw) = &out.raw {
                write!(stdout, "{raw}")
            } else {
                match cli.global.output {
                    Output::Text => write!(stdout, "{}", out.text).and_then(|_| {
                        if tainted {
                            writeln!(
                                stdout,
                                "tainted: depends on assumed meaninglessness or exhausted fuel"
                            )
                        } else {
                            Ok(())
                        }
                    }),
                    Output::Json => {
                        let mut json = out.json;
                        json["config"] = cli.global.echo();
                        json["tainted"] = tainted.into();
                        writeln!(
                            stdout,
                            "{}",
                            serde_json::to_string_pretty(&json).expect("serializable")
                        )
                    }
                }
            };
            match out.status {
                Status::Pass => ExitCode::SUCCESS,
                Status::Tainted if !cli.global.strict => ExitCode::SUCCESS,
                Status::Tainted | Status::Fail => ExitCode::from(1),
            }
        }
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Check(msg)) => {
            eprintln!("check failed: {msg}");
            ExitCode::from(1)
        }
    }
}
