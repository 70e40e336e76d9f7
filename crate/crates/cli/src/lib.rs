//! The `normext` command line: one verb per operation, JSON or TSV reports,
//! and exit codes 0 (all checks pass), 1 (a mathematical check failed) and
//! 2 (bad input or resource limit).

pub mod args;
pub mod commands;
pub mod corpus;
pub mod load;

use std::io::Write;

use clap::Parser;
use normext::Error;

use args::{Cli, Command, Format};
use commands::Output;

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

/// Errors that report a mathematical failure rather than bad input.
fn is_check_failure(e: &anyhow::Error) -> bool {
    e.chain().any(|c| {
        matches!(
            c.downcast_ref::<Error>(),
            Some(Error::EngineDisagreement { .. } | Error::NoDiagonalTwist(_) | Error::DependentDerivatives)
        )
    })
}

fn dispatch(cli: &Cli) -> anyhow::Result<(Output, Format)> {
    Ok(match &cli.command {
        Command::CheckSuperpotential(c) => (commands::check_superpotential(c)?, c.format),
        Command::Derive(c) => (commands::derive(c)?, c.format),
        Command::SolveTuples(c) => (commands::solve_tuples(c)?, c.format),
        Command::BuildExtension(c) => (commands::build(c)?, c.format),
        Command::Hilbert(c) => (commands::hilbert(c)?, c.format),
        Command::Verify(c) => (commands::verify(c)?, c.format),
        Command::FamilyProbe { common, points } => (commands::family_probe(common, points.as_deref())?, common.format),
        Command::Zhang { common, sigma } => (commands::zhang(common, sigma)?, common.format),
        Command::Tables { corpus, format } => (commands::tables(corpus)?, *format),
    })
}

/// Runs one command, writing the report to `out` and diagnostics to `err`.
pub fn run_with(argv: &[String], out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_PASS };
            let _ = if e.use_stderr() { write!(err, "{e}") } else { write!(out, "{e}") };
            return code;
        }
    };
    match dispatch(&cli) {
        Ok((o, format)) => {
            let text = match format {
                Format::Json => serde_json::to_string_pretty(&o.json).map(|s| s + "\n").unwrap_or_default(),
                Format::Tsv => o.tsv,
            };
            if out.write_all(text.as_bytes()).is_err() {
                return EXIT_INPUT;
            }
            if o.pass {
                EXIT_PASS
            } else {
                EXIT_FAIL
            }
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e:#}");
            if is_check_failure(&e) {
                EXIT_FAIL
            } else {
                EXIT_INPUT
            }
        }
    }
}

/// Runs one command against stdout and stderr.
pub fn run(argv: &[String]) -> i32 {
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(argv, &mut stdout.lock(), &mut stderr.lock())
}
