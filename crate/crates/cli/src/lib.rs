//! Command-line front end for the `logconvex` library.
//!
//! Exit codes: 0 success, 1 a reproduction item or claim failed, 2 usage,
//! 3 numeric failure, 4 I/O failure.

// `!(a > b)` is used on purpose: it also rejects NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod commands;
pub mod opts;
pub mod reproduce;

use std::ffi::OsString;
use std::io::Write;

use clap::error::ErrorKind;
use clap::Parser;

pub use commands::{ScanRecord, Subject};
pub use opts::{Cli, Command, Opts};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("numeric failure: {0}")]
    Numeric(#[from] logconvex::Error),
    #[error("i/o failure: {0}")]
    Io(String),
    #[error("{0}")]
    Failed(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Failed(_) => 1,
            CliError::Usage(_) => 2,
            CliError::Numeric(_) => 3,
            CliError::Io(_) => 4,
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

/// Output streams for a command; tests pass in buffers.
pub struct Streams<'a> {
    pub out: &'a mut dyn Write,
    pub err: &'a mut dyn Write,
}

/// Parses `args` (program name first), runs the command and returns the
/// process exit code.
pub fn run<I, S>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = out.write_all(text.as_bytes());
                    0
                }
                _ => {
                    let _ = err.write_all(text.as_bytes());
                    2
                }
            };
        }
    };
    let mut streams = Streams { out, err };
    match dispatch(&cli.command, &mut streams) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(streams.err, "logconvex: {e}");
            e.exit_code()
        }
    }
}

fn dispatch(command: &Command, io: &mut Streams<'_>) -> Result<(), CliError> {
    let opts = command.opts().merged()?;
    match command {
        Command::Mean(_) => commands::cmd_mean(&opts, io),
        Command::Profile(_) => commands::cmd_profile(&opts, io),
        Command::Scan(_) => commands::cmd_scan(&opts, io),
        Command::Verify(_) => commands::cmd_verify(&opts, io),
        Command::Reproduce(_) => reproduce::cmd_reproduce(&opts, io),
    }
}
