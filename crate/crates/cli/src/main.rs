use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use s4_cli::{compute, render, sweep, tables, witness, write_csv, write_json_lines, CliError};

/// Fourth levels of 2-adic completions of biquadratic fields Q(√m, √n).
#[derive(Parser)]
#[command(name = "s4", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Levels at every prime above 2 of Q(√m, √n).
    Compute {
        #[arg(allow_negative_numbers = true)]
        m: i64,
        #[arg(allow_negative_numbers = true)]
        n: i64,
        /// Recompute each level by exhaustive search mod p^(3e+1) and p^(4e+1).
        #[arg(long)]
        verify: bool,
        /// Print one JSON object instead of text.
        #[arg(long)]
        json: bool,
    },
    /// All fields with |m|, |n| <= MAX_ABS.
    Sweep {
        max_abs: i64,
        #[arg(long)]
        verify: bool,
        /// Write one CSV row per field to PATH.
        #[arg(long, value_name = "PATH")]
        csv: Option<PathBuf>,
        /// Print one JSON object per field on stdout; the summary goes to stderr.
        #[arg(long)]
        json: bool,
        /// Worker threads (0 = one per core).
        #[arg(long, env = "S4_JOBS", default_value_t = 0)]
        jobs: usize,
    },
    /// Symbolic fourth-power tables mod p^8 and p^13 for an e = 4, f = 1 field.
    Lemmas {
        #[arg(long, default_value_t = -2, allow_negative_numbers = true)]
        m: i64,
        #[arg(long, default_value_t = -6, allow_negative_numbers = true)]
        n: i64,
    },
    /// Exact identity showing s4(Q(√-2, √-6)) = 3.
    Witness,
}

fn run(cli: Cli) -> Result<(), CliError> {
    let stdout = io::stdout();
    let mut out = stdout.lock();
    match cli.command {
        Command::Compute { m, n, verify, json } => {
            let outcome = compute(m, n, verify)?;
            if json {
                serde_json::to_writer(&mut out, &outcome.report)?;
                writeln!(out)?;
            } else {
                write!(out, "{}", render(&outcome))?;
            }
        }
        Command::Sweep {
            max_abs,
            verify,
            csv,
            json,
            jobs,
        } => {
            let run = sweep(max_abs, verify, jobs)?;
            if let Some(path) = csv {
                write_csv(&run, BufWriter::new(File::create(path)?))?;
            }
            if json {
                write_json_lines(&run, &mut out)?;
                eprint!("{}", run.summary.render());
            } else {
                write!(out, "{}", run.summary.render())?;
            }
            if !run.summary.mismatches.is_empty() {
                let first = &run.summary.mismatches[0];
                return Err(CliError::Consistency(format!(
                    "{} mismatches, first at ({}, {})",
                    run.summary.mismatches.len(),
                    first.m,
                    first.n
                )));
            }
            if !run.summary.is_consistent() {
                return Err(CliError::Consistency("sweep counts do not add up".into()));
            }
        }
        Command::Lemmas { m, n } => {
            let report = tables(m, n)?;
            write!(out, "{}", report.render())?;
            if !report.all_hold() {
                return Err(CliError::Consistency("fourth-power table mismatch".into()));
            }
        }
        Command::Witness => {
            let report = witness()?;
            write!(out, "{}", report.render())?;
            if report.level().is_none() {
                return Err(CliError::Consistency("witness check failed".into()));
            }
        }
    }
    out.flush()?;
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let _ = err.print();
            return ExitCode::from(if err.use_stderr() { 2 } else { 0 });
        }
    };
    match std::panic::catch_unwind(|| run(cli)) {
        Ok(Ok(())) => ExitCode::SUCCESS,
        Ok(Err(err)) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code() as u8)
        }
        Err(_) => ExitCode::from(3),
    }
}
