//! `genus`: per-order reports, class groups, type numbers and the
//! L-series verification harness.
//!
//! Exit status: 0 when every check passed, 1 on a failed check, 2 on usage
//! errors or invalid input.

mod commands;
mod config;
mod output;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};
use config::{Flags, RunConfig, UsageError};
use std::io::Write;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "genus", version, about = "Genus theory of quadratic orders")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    flags: Flags,
}

#[derive(Subcommand, Clone, Copy)]
enum Command {
    /// Fundamental divisors, reciprocal pairs, genus numbers and local norm indices.
    OrderInfo,
    /// Reduced representatives, group structure, genera and the character table.
    Classgroup,
    /// Compare the three L-series coefficient engines for every genus character.
    Verify,
    /// Run verify and genus-number checks over a range of discriminants.
    Sweep,
    /// Type numbers of M_2(K) and representative maximal orders.
    Typenumbers,
}

impl Command {
    fn name(self) -> &'static str {
        match self {
            Command::OrderInfo => "order-info",
            Command::Classgroup => "classgroup",
            Command::Verify => "verify",
            Command::Sweep => "sweep",
            Command::Typenumbers => "typenumbers",
        }
    }
}

fn run(cli: &Cli) -> Result<bool> {
    let config = RunConfig::resolve(cli.command.name(), &cli.flags)?;
    let report = match cli.command {
        Command::OrderInfo => commands::order_info(&config)?,
        Command::Classgroup => commands::classgroup(&config)?,
        Command::Verify => commands::verify(&config)?,
        Command::Sweep => commands::sweep(&config)?,
        Command::Typenumbers => commands::typenumbers(&config)?,
    };
    let text = output::render(&report, &config)?;
    match &config.out {
        Some(path) => std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))?,
        None => {
            let mut stdout = std::io::stdout().lock();
            match stdout.write_all(text.as_bytes()).and_then(|()| stdout.flush()) {
                Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => {}
                other => other.context("writing report")?,
            }
        }
    }
    Ok(report.passed)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("genus: verification failed");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("genus: {e:#}");
            if e.downcast_ref::<UsageError>().is_some() {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}
