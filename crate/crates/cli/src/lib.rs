//! Command-line front end for the `ringbose` solvers.

pub mod args;
pub mod commands;
pub mod error;
pub mod grid;
pub mod methods;
pub mod params;
pub mod status;
pub mod sweep;
pub mod table;
pub mod validate;

use std::io::Write;
use std::path::Path;

pub use args::Cli;
pub use error::{CliError, Outcome};

use args::Command;

fn emit(text: &str, out: Option<&Path>) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(path, text)?,
        None => std::io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(())
}

pub fn run(cli: &Cli) -> Result<Outcome, CliError> {
    // faer's default parallelism follows the rayon pool size; sequential
    // kernels keep results independent of --jobs
    faer::set_global_parallelism(faer::Par::Seq);
    let (table, failed, output) = match &cli.command {
        Command::Spectrum(a) => {
            let (t, f) = commands::spectrum(a)?;
            (t, f, &a.output)
        }
        Command::Sweep(a) => {
            let (t, f) = sweep::sweep(a)?;
            (t, f, &a.output)
        }
        Command::Dist(a) => {
            let (t, f) = commands::dist(a)?;
            (t, f, &a.output)
        }
        Command::Validate(a) => {
            let report = validate::run_suite(a.inject_nu_factor);
            let mut text = serde_json::to_string_pretty(&report).expect("report serializes");
            text.push('\n');
            emit(&text, a.out.as_deref())?;
            return Ok(if report.pass { Outcome::Success } else { Outcome::ValidationFailed });
        }
    };
    emit(&table.render(output.format), output.out.as_deref())?;
    Ok(if failed && output.strict { Outcome::PointFailures } else { Outcome::Success })
}
