//! Command-line front end for `zeromode`: correlator grids, warp scans, stress
//! tensor rows and the verification suites, written as CSV or JSON.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod args;
pub mod commands;
pub mod config;
pub mod output;

use std::ffi::OsString;

use clap::Parser;

pub use args::Cli;
pub use commands::CliError;

/// Exit status for a numerical failure.
pub const EXIT_NUMERICAL: i32 = 1;
/// Exit status for an invalid invocation.
pub const EXIT_USAGE: i32 = 2;

/// Parse `argv` (including the program name), expand `--config`, run, and
/// return the process exit status.
pub fn main_with_args<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString>,
{
    let argv: Vec<OsString> = argv.into_iter().map(Into::into).collect();
    let argv = match config::expand(argv) {
        Ok(a) => a,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_USAGE;
        }
    };
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            let _ = e.print();
            return code;
        }
    };
    match commands::run(&cli) {
        Ok(status) => status,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            EXIT_USAGE
        }
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_NUMERICAL
        }
    }
}
