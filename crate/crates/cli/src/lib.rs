//! Command-line front end: argument parsing, report assembly and exit codes.
//!
//! Exit codes: 0 when every check passes (or the falsifier meets `--expect`),
//! 1 when a check fails or the expectation is missed, 2 for usage, input and
//! domain errors.

// Negated float comparisons are used on purpose so that NaN is rejected.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod args;
pub mod commands;

use std::ffi::OsString;
use std::fs;
use std::io::Write;

use clap::Parser;

use args::{Cli, Command};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_ERROR: i32 = 2;

/// Parses `argv` (including the program name), runs the command and writes the
/// report to `--out` or `stdout`; diagnostics go to `stderr`.
pub fn run<I, T>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(stderr, "{}", e.render());
            return if e.use_stderr() { EXIT_ERROR } else { EXIT_OK };
        }
    };
    let (result, out) = match &cli.command {
        Command::Verify(a) => (commands::verify(a), &a.common.out),
        Command::Falsify(a) => (commands::falsify_cmd(a), &a.common.out),
        Command::ExtractF(a) => (commands::extract(a), &a.common.out),
        Command::Reconstruct(a) => (commands::reconstruct(a), &a.common.out),
        Command::DemoPinch(a) => (commands::demo_pinch_cmd(a), &a.common.out),
        Command::DemoDecompose(a) => (commands::demo_decompose_cmd(a), &a.common.out),
        Command::DemoApprox(a) => (commands::demo_approx_cmd(a), &a.common.out),
    };
    let outcome = match result {
        Ok(o) => o,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e:#}");
            return EXIT_ERROR;
        }
    };
    let written = match out {
        Some(path) => {
            fs::write(path, &outcome.json).map_err(|e| format!("writing {}: {e}", path.display()))
        }
        None => stdout
            .write_all(outcome.json.as_bytes())
            .map_err(|e| e.to_string()),
    };
    if let Err(e) = written {
        let _ = writeln!(stderr, "error: {e}");
        return EXIT_ERROR;
    }
    if outcome.ok {
        EXIT_OK
    } else {
        EXIT_FAIL
    }
}
