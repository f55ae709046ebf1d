//! Library side of the `mtkit` command-line tool. Each subcommand is a
//! function returning a typed report wrapped in an [`output::Envelope`];
//! [`run`] parses arguments, renders the report and maps errors to exit
//! codes.

pub mod args;
pub mod commands;
pub mod config;
pub mod error;
pub mod output;

use std::ffi::OsString;
use std::io::Write;

use clap::Parser;
use serde::Serialize;

use args::{Cli, Command, Format};
use commands::Context;
use config::FileConfig;
use error::CliError;
use output::{render, Envelope, Tabular};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VALIDATION: i32 = 1;
pub const EXIT_EXPECTATION: i32 = 2;
pub const EXIT_IO: i32 = 3;

fn emit<R: Serialize + Tabular>(env: Result<Envelope<R>, CliError>, format: Format) -> Result<String, CliError> {
    env.map(|e| render(&e, format))
}

fn dispatch(cli: &Cli) -> Result<(String, Option<CliError>), CliError> {
    let config = match &cli.config {
        Some(path) => FileConfig::load(path)?,
        None => FileConfig::default(),
    };
    let format = cli.format.or(config.format).unwrap_or_default();
    let ctx = Context { seed: cli.seed.or(config.seed), config };
    let out = match &cli.command {
        Command::Clean(a) => emit(commands::clean(a, &ctx), format)?,
        Command::Tokenize(a) => emit(commands::tokenize(a, &ctx), format)?,
        Command::Truecase(a) => emit(commands::truecase(a, &ctx), format)?,
        Command::SplitCompounds(a) => emit(commands::split_compounds(a, &ctx), format)?,
        Command::Symmetrize(a) => emit(commands::symmetrize(a, &ctx), format)?,
        Command::LmTrain(a) => emit(commands::lm_train(a, &ctx), format)?,
        Command::LmPpl(a) => emit(commands::lm_ppl(a, &ctx), format)?,
        Command::Score(a) => emit(commands::score(a, &ctx), format)?,
        Command::Compare(a) => emit(commands::compare(a, &ctx), format)?,
        Command::ReproducePaper => {
            let env = commands::reproduce_paper(&ctx)?;
            let failed = env.report.checks.iter().filter(|c| !c.pass).count();
            let failure =
                (failed > 0).then(|| CliError::Expectation(format!("{failed} reproduction checks failed")));
            return Ok((render(&env, format), failure));
        }
    };
    Ok((out, None))
}

/// Runs one invocation and returns its exit code. The report goes to
/// `stdout`; errors go to `stderr` as a single JSON record.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            // help and version are not errors; every other parse failure is a
            // validation failure (clap's own code 2 is reserved here)
            if !e.use_stderr() {
                let _ = write!(stdout, "{e}");
                return EXIT_OK;
            }
            let _ = write!(stderr, "{e}");
            let rendered = e.to_string();
            let first = rendered.lines().next().unwrap_or_default();
            let message = first.strip_prefix("error: ").unwrap_or(first).to_owned();
            let _ = writeln!(stderr, "{}", CliError::Validation(message).record());
            return EXIT_VALIDATION;
        }
    };
    match dispatch(&cli) {
        Ok((out, failure)) => {
            if let Err(e) = stdout.write_all(out.as_bytes()).and_then(|_| stdout.flush()) {
                let _ = writeln!(stderr, "{}", CliError::Io { path: "<stdout>".into(), source: e }.record());
                return EXIT_IO;
            }
            match failure {
                Some(e) => {
                    let _ = writeln!(stderr, "{}", e.record());
                    e.exit_code()
                }
                None => EXIT_OK,
            }
        }
        Err(e) => {
            let _ = writeln!(stderr, "{}", e.record());
            e.exit_code()
        }
    }
}
