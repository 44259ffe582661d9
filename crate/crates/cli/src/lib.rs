//! Command-line front end: argument types, dispatch and the versioned output
//! envelope. The binary is a thin wrapper around [`run`].

pub mod args;
mod commands;
pub mod output;
mod verify;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::Parser;
use fibcmv::Error;

pub use args::{Cli, Command, Format};
pub use output::{parse_config, render, Output, SCHEMA};

use args::{FibCommand, WalkArgs};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Validation(String),
    #[error(transparent)]
    Core(#[from] Error),
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
}

impl CliError {
    /// 2 for numerical inconsistencies, 1 for everything the caller can fix.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(Error::Inconsistent(_) | Error::NoConvergence { .. } | Error::BoundaryContact { .. }) => 2,
            _ => 1,
        }
    }
}

pub fn default_format(cmd: &Command) -> Format {
    match cmd {
        Command::Fib(_) | Command::Ising(args::IsingCommand::Dos { .. }) => Format::Json,
        Command::Walk(WalkArgs { action: Some(_), .. }) => Format::Json,
        _ => Format::Csv,
    }
}

/// Replaces `rerun FILE` by the recorded config. `--out`, `--format` and
/// `--threads` of the current invocation take precedence when given.
pub fn resolve(cli: Cli) -> Result<Cli, CliError> {
    let Command::Rerun(r) = &cli.command else {
        return Ok(cli);
    };
    let text = std::fs::read_to_string(&r.file).map_err(|source| CliError::Io {
        path: r.file.clone(),
        source,
    })?;
    let mut recorded = parse_config(&text)?;
    if matches!(recorded.command, Command::Rerun(_)) {
        return Err(CliError::Validation("a recorded config cannot itself be a rerun".into()));
    }
    recorded.out = cli.out;
    recorded.format = cli.format.or(recorded.format);
    recorded.threads = cli.threads;
    Ok(recorded)
}

/// Runs a resolved config on the current rayon pool.
pub fn execute(cli: &Cli) -> Result<Output, CliError> {
    match &cli.command {
        Command::Fib(FibCommand::Census { k }) => commands::fib_census(*k),
        Command::Spectrum(a) => commands::spectrum(a),
        Command::Walk(w) => match &w.action {
            Some(args::WalkCommand::Exponents(e)) => commands::walk_exponents(e),
            None => commands::walk_profile(&w.profile),
        },
        Command::Ising(cmd) => commands::ising(cmd),
        Command::Verify(v) => Ok(verify::verify(v, cli.seed)),
        Command::Rerun(_) => Err(CliError::Validation("rerun must be resolved first".into())),
    }
}

/// Resolves, executes on a pool of `cli.threads` workers and renders the envelope.
pub fn produce(cli: Cli) -> Result<(Cli, String), CliError> {
    let cli = resolve(cli)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cli.threads)
        .build()
        .map_err(|e| CliError::Validation(format!("thread pool: {e}")))?;
    let out = pool.install(|| execute(&cli))?;
    let format = cli.format.unwrap_or_else(|| default_format(&cli.command));
    let text = render(&cli, format, &out);
    Ok((cli, text))
}

fn write(cli: &Cli, text: &str) -> Result<(), CliError> {
    match &cli.out {
        Some(path) => std::fs::write(path, text).map_err(|source| CliError::Io {
            path: path.clone(),
            source,
        }),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|source| CliError::Io {
                path: "<stdout>".into(),
                source,
            }),
    }
}

/// Parses `argv`, runs it and returns the process exit code.
pub fn run<I, T>(argv: I) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    match produce(cli).and_then(|(cli, text)| write(&cli, &text)) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
