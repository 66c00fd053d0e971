//! `fracwave`: command-line front end to the fracwave library.

mod commands;
mod failure;
mod output;
mod selftest;
mod settings;

use std::io::Write;
use std::process::ExitCode;

use failure::Failure;
use settings::Settings;

fn execute(s: &Settings) -> Result<Option<Failure>, Failure> {
    let command = s
        .command
        .ok_or_else(|| Failure::usage("no command given (on the command line or in --config)"))?;
    let outcome = commands::run(command, s)?;
    let format = s.format.unwrap_or(outcome.output.default_format());
    let text = outcome.output.render(format)?;
    match &s.out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| Failure::usage(format!("cannot write {}: {e}", path.display())))?,
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|e| Failure::usage(format!("cannot write output: {e}")))?;
        }
    }
    Ok(outcome.failure)
}

fn main() -> ExitCode {
    let result = Settings::resolve(std::env::args_os()).and_then(|s| execute(&s));
    let failure = match result {
        Ok(None) => return ExitCode::SUCCESS,
        Ok(Some(f)) | Err(f) => f,
    };
    match &failure {
        // --help and --version
        Failure::Clap(e) if !e.use_stderr() => {
            let _ = e.print();
        }
        f => eprintln!("fracwave: {f}"),
    }
    ExitCode::from(failure.exit_code())
}
