//! Command-line front end for `puhyp`: group files in, reports and dumps out.

pub mod args;
pub mod commands;
pub mod error;
pub mod groupfile;

use std::io::Write;

use clap::Parser;

pub use error::{exit, CliError};

/// Runs the CLI on `argv`, writing the report to `stdout` and diagnostics to
/// `stderr`. Returns the process exit code.
pub fn main_with<I, T>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match args::Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(stderr, "{e}");
            return if e.use_stderr() {
                exit::INPUT
            } else {
                exit::OK
            };
        }
    };
    match args::run(&cli) {
        Ok(outcome) => {
            let dump = serde_json::to_string_pretty(&outcome.dump).expect("dumps serialize") + "\n";
            if let Some(path) = &cli.global.out {
                let body = outcome.artifact.as_deref().unwrap_or(&dump);
                if let Err(e) = std::fs::write(path, body) {
                    let _ = writeln!(stderr, "error: cannot write {}: {e}", path.display());
                    return exit::INPUT;
                }
            }
            let shown = if cli.global.json {
                dump
            } else if cli.global.out.is_none() && outcome.artifact.is_some() {
                outcome.artifact.clone().unwrap_or_default()
            } else {
                outcome.text
            };
            let _ = stdout.write_all(shown.as_bytes());
            outcome.exit
        }
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}
