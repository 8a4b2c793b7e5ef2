//! File formats and the command-line harness around `kadison-core`.
//!
//! Instances, ensembles and reports are versioned JSON documents; experiment
//! time series are CSV. Every report echoes the numeric policy and seed that
//! produced it, and is byte-identical across runs and thread counts apart
//! from its `wall_time_s` field.

pub mod cli;
pub mod commands;
pub mod error;
pub mod files;

use std::ffi::OsString;
use std::io::{Read, Write};

use clap::Parser;

pub use cli::Cli;
pub use commands::{run, Engine, Streams};
pub use error::CliError;

/// Parses `args` (program name first), runs the command and returns the
/// process exit code. Diagnostics go to `stderr`.
pub fn main_with<I, T>(args: I, stdin: &mut dyn Read, stdout: &mut dyn Write, stderr: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            // --help and --version are not errors
            if e.use_stderr() {
                let _ = write!(stderr, "{}", e.render());
                return CliError::USAGE;
            }
            let _ = write!(stdout, "{}", e.render());
            return 0;
        }
    };
    match run(&cli, &mut Streams { stdin, stdout }) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "kadison: {e}");
            e.exit_code()
        }
    }
}
