//! Command-line front end: structure and unitarity reports, parameter
//! sweeps, verification runs and lattice diagrams.

pub mod args;
pub mod dims;
pub mod error;
pub mod render;
pub mod report;
pub mod sweep;
pub mod verify;

use std::ffi::OsString;
use std::path::Path;

use clap::Parser;

use crate::args::{Cli, Command, Format, QueryArgs};
use crate::error::{CliError, EXIT_OK, EXIT_USAGE, EXIT_VERIFICATION};
use crate::report::{diagram, StructureReport};

/// Captured result of one invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn ok(stdout: String, failed: bool) -> Self {
        Outcome {
            code: if failed { EXIT_VERIFICATION } else { EXIT_OK },
            stdout,
            stderr: String::new(),
        }
    }
}

/// Parses `argv` (program name first) and runs the command.
pub fn run<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            return if code == 0 {
                Outcome::ok(text, false)
            } else {
                Outcome {
                    code: EXIT_USAGE,
                    stdout: String::new(),
                    stderr: text,
                }
            };
        }
    };
    match execute(&cli.command) {
        Ok(out) => out,
        Err(e) => Outcome {
            code: e.exit_code(),
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
        },
    }
}

fn emit(text: String, out: Option<&Path>, failed: bool) -> Result<Outcome, CliError> {
    match out {
        Some(path) => {
            std::fs::write(path, text).map_err(|source| CliError::Io {
                path: path.display().to_string(),
                source,
            })?;
            Ok(Outcome::ok(String::new(), failed))
        }
        None => Ok(Outcome::ok(text, failed)),
    }
}

fn query(q: &QueryArgs, verdicts: bool, interval: bool) -> Result<Outcome, CliError> {
    let (ctx, sp, window) = q.resolve()?;
    let d = diagram(&ctx, &sp, window)?;
    let text = match q.format.unwrap_or(Format::Json) {
        Format::Dot => render::dot(&d, false)?,
        Format::Svg => render::svg(&d, false)?,
        f => {
            let r = if verdicts {
                StructureReport::unitarity(&d, interval)?
            } else {
                StructureReport::structure(&d)
            };
            if f == Format::Json {
                r.to_json()?
            } else {
                r.to_text()
            }
        }
    };
    emit(text, q.out.as_deref(), false)
}

fn execute(cmd: &Command) -> Result<Outcome, CliError> {
    match cmd {
        Command::Structure(q) => query(q, false, false),
        Command::Unitarity(u) => query(&u.query, true, u.interval),
        Command::Diagram(a) => {
            let q = &a.query;
            let (ctx, sp, window) = q.resolve()?;
            let d = diagram(&ctx, &sp, window)?;
            let text = match q.format.unwrap_or(Format::Svg) {
                Format::Svg => render::svg(&d, a.hasse_only)?,
                Format::Dot => render::dot(&d, a.hasse_only)?,
                f => {
                    return Err(CliError::Usage(format!(
                        "diagram supports --format dot or svg, not {f:?}"
                    )))
                }
            };
            emit(text, q.out.as_deref(), false)
        }
        Command::Sweep(a) => {
            let records = sweep::run_sweep(a)?;
            let failed = records.iter().any(|r| r.agrees == Some(false));
            emit(sweep::to_json_lines(&records)?, a.out.as_deref(), failed)
        }
        Command::Verify(a) => {
            let summaries = verify::run_suites(a.suite, a.max_pq, a.max_deg, a.jobs)?;
            let failed = summaries.iter().any(|s| !s.passed);
            let text = match a.format {
                Format::Json => serde_json::to_string_pretty(&summaries)? + "\n",
                Format::Text => verify::to_text(&summaries),
                f => {
                    return Err(CliError::Usage(format!(
                        "verify supports --format text or json, not {f:?}"
                    )))
                }
            };
            emit(text, a.out.as_deref(), failed)
        }
        Command::Dims(a) => {
            let (ctx, sp) = a.resolve()?;
            if a.max < 0 {
                return Err(CliError::Usage("--max must be nonnegative".into()));
            }
            let rows = dims::table(&ctx, &sp, a.max);
            let text = match a.format {
                Format::Json => serde_json::to_string_pretty(&rows)? + "\n",
                Format::Text => dims::to_text(&rows),
                f => {
                    return Err(CliError::Usage(format!(
                        "dims supports --format text or json, not {f:?}"
                    )))
                }
            };
            emit(text, a.out.as_deref(), false)
        }
    }
}
