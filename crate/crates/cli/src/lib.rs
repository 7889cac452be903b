//! Command-line front end for the `mixpart` library.
//!
//! [`run`] parses arguments, merges them with an optional TOML config file,
//! runs one subcommand and writes its JSON report and CSV. Exit codes: 0 on
//! success, 1 on usage or IO errors, 2 when the numerics fail.

pub mod args;
mod commands;
pub mod config;
pub mod output;

use std::ffi::OsString;
use std::io::{self, Write};

use clap::error::ErrorKind;
use clap::Parser;

use args::{Cli, Command};

/// A run that ended without its report.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    pub fn usage(message: String) -> Self {
        Failure { code: 1, message }
    }

    pub fn numeric(message: String) -> Self {
        Failure { code: 2, message }
    }
}

/// Runs the CLI with `argv` (program name first) and returns the exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = io::stdout();
    let mut out = stdout.lock();
    run_with(argv, &mut out)
}

/// [`run`] with stdout replaced by `out`.
pub fn run_with<I, T>(argv: I, out: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{e}");
                    0
                }
                _ => {
                    let text = e.to_string();
                    let line = text.lines().next().unwrap_or("invalid arguments");
                    eprintln!("{line}");
                    1
                }
            };
        }
    };
    init_logging(cli.verbose);
    match dispatch(&cli, out) {
        Ok(code) => code,
        Err(f) => {
            eprintln!("error: {}", f.message);
            f.code
        }
    }
}

fn init_logging(verbose: u8) {
    let level = match verbose {
        0 => log::LevelFilter::Warn,
        1 => log::LevelFilter::Info,
        2 => log::LevelFilter::Debug,
        _ => log::LevelFilter::Trace,
    };
    let _ = env_logger::Builder::new()
        .filter_level(level)
        .format_timestamp(None)
        .try_init();
}

fn dispatch(cli: &Cli, out: &mut dyn Write) -> Result<i32, Failure> {
    let Some(opts) = cli.command.opts() else {
        return commands::list_builtins(out);
    };
    let (cfg, f) = config::resolve(cli.command.name(), opts, cli.verbose)?;
    log::info!("{} on {} over {}", cfg.command, f.label(), cfg.rect);
    log::debug!("{cfg:?}");
    match &cli.command {
        Command::ListBuiltins => commands::list_builtins(out),
        Command::Eval(_) => commands::eval(&cfg, &f, out),
        Command::Partials(_) => commands::partials(&cfg, &f, out),
        Command::Mixed(_) => commands::mixed(&cfg, &f, out),
        Command::SchwarzAudit(_) => commands::audit(&cfg, &f, out),
        Command::Strongdiff(_) => commands::strongdiff(&cfg, &f, out),
        Command::VerifyTheorem1(_) => commands::theorem1(&cfg, &f, out),
        Command::Lipcheck(_) => commands::lipcheck(&cfg, &f, out),
        Command::Tolstov(_) => commands::tolstov(&cfg, &f, out),
    }
}
