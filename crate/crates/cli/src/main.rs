//! `blowup-lab`: generate data, evaluate the blow-up and global-existence
//! criteria, run the Burgers and Euler solvers, and check lifespan bounds.
//!
//! Exit status: 0 success, 1 configuration or IO error, 2 hypotheses of the
//! selected theorem not met, 3 simulation aborted, 4 verify-theorem failed.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod commands;
mod config;
mod data;
mod error;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use config::{Command, ExperimentConfig, Precision, Theorem};
use error::CliError;

#[derive(Parser)]
#[command(name = "blowup-lab", version, about = "Blow-up and global existence experiments for isentropic Euler")]
struct Cli {
    #[command(subcommand)]
    command: Sub,
}

#[derive(Args)]
struct Common {
    /// TOML experiment config; every key has a default.
    #[arg(long, short)]
    config: Option<PathBuf>,
    /// Output directory (default `out`, or `out` from the config).
    #[arg(long, short)]
    out: Option<PathBuf>,
    /// Override a config key, e.g. `--set grid.cells=512`. Repeatable.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
}

#[derive(Subcommand)]
enum Sub {
    /// Write the initial datum as a snapshot.
    GenData(Common),
    /// Evaluate every criterion on the datum and print a verdict table.
    Check(Common),
    /// Burgers blow-up time and optional v(t, ·) snapshots.
    Burgers(Common),
    /// Run the Euler solver; writes series.csv and snapshots.
    Simulate(Common),
    /// Check a theorem's hypotheses, simulate, and compare with its bound.
    VerifyTheorem {
        #[command(flatten)]
        common: Common,
        #[arg(long, short)]
        theorem: Option<Theorem>,
    },
}

fn execute(cfg: &ExperimentConfig, command: Command, out: &std::path::Path) -> Result<commands::Outcome, CliError> {
    match cfg.precision {
        Precision::F64 => commands::execute::<f64>(command, cfg, out),
        Precision::F32 => commands::execute::<f32>(command, cfg, out),
    }
}

fn write_metadata(out: &std::path::Path, command: Command, started: u64, elapsed: f64, exit: i32) {
    let meta = json!({
        "command": command.name(),
        "version": env!("CARGO_PKG_VERSION"),
        "started_unix": started,
        "elapsed_seconds": elapsed,
        "exit_code": exit,
        "out_dir": out.display().to_string(),
    });
    let text = serde_json::to_string_pretty(&meta).unwrap_or_default();
    // metadata is best effort; a missing directory means nothing else was written
    let _ = std::fs::write(out.join("metadata.json"), text + "\n");
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let (command, common, theorem) = match cli.command {
        Sub::GenData(c) => (Command::GenData, c, None),
        Sub::Check(c) => (Command::Check, c, None),
        Sub::Burgers(c) => (Command::Burgers, c, None),
        Sub::Simulate(c) => (Command::Simulate, c, None),
        Sub::VerifyTheorem { common, theorem } => (Command::VerifyTheorem, common, theorem),
    };
    let started = SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs());
    let clock = Instant::now();
    let loaded = config::load(common.config.as_deref(), &common.set).and_then(|mut cfg| {
        if theorem.is_some() {
            cfg.theorem.name = theorem;
        }
        cfg.validate(command)?;
        Ok(cfg)
    });
    let cfg = match loaded {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    let out = common.out.or_else(|| cfg.out.clone()).unwrap_or_else(|| PathBuf::from("out"));
    let result = execute(&cfg, command, &out);
    let code = result.as_ref().map_or_else(|e| e.exit_code(), |_| 0);
    write_metadata(&out, command, started, clock.elapsed().as_secs_f64(), code);
    match result {
        Ok(o) => {
            println!("{}", o.summary);
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(code as u8)
        }
    }
}
