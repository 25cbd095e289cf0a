use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use cq_lab::harness::{self, Mode, SelfTestOptions};

#[derive(Parser)]
#[command(name = "cq-lab", version, about = "Classical-quantum channel coding experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the experiment described by a config file.
    Run {
        /// entropy, capacity, single, sweep-n, compound, cascade or embed-dmc
        mode: Mode,
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
    /// Run the fast invariant suite.
    SelfTest {
        /// Replace one check's tolerance, e.g. `cascade-telescoping=-1`.
        #[arg(long, value_parser = parse_override)]
        override_tolerance: Option<(String, f64)>,
    },
}

fn parse_override(s: &str) -> Result<(String, f64), String> {
    let (name, tol) = s.split_once('=').ok_or("expected NAME=TOLERANCE")?;
    let tol = tol.parse().map_err(|e| format!("{e}"))?;
    Ok((name.to_string(), tol))
}

/// Lets `cq-lab <mode> ...` stand for `cq-lab run <mode> ...`.
fn normalized_args() -> Vec<String> {
    let mut args: Vec<String> = std::env::args().collect();
    if let Some(first) = args.get(1) {
        if first.parse::<Mode>().is_ok() {
            args.insert(1, "run".into());
        }
    }
    args
}

fn main() -> ExitCode {
    let cli = Cli::parse_from(normalized_args());
    match cli.command {
        Command::Run { mode, config, seed, out } => {
            let mut cfg = match harness::load_config(&config) {
                Ok(c) => c,
                Err(e) => {
                    eprintln!("error: {}: {e}", config.display());
                    return ExitCode::from(2);
                }
            };
            if cfg.mode != mode {
                eprintln!("error: config mode is {} but {mode} was requested", cfg.mode);
                return ExitCode::from(2);
            }
            if let Some(s) = seed {
                cfg.seed = s;
            }
            match harness::run(&cfg, &out) {
                Ok(o) => {
                    println!("{}", o.csv_path.display());
                    println!("{}", o.json_path.display());
                    if let Some(p) = o.extra_csv {
                        println!("{}", p.display());
                    }
                    ExitCode::SUCCESS
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    ExitCode::FAILURE
                }
            }
        }
        Command::SelfTest { override_tolerance } => {
            let opts = SelfTestOptions { tolerance_override: override_tolerance };
            match harness::self_test(&opts) {
                Ok(report) => {
                    println!("{report}");
                    if report.passed() {
                        ExitCode::SUCCESS
                    } else {
                        ExitCode::FAILURE
                    }
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    ExitCode::FAILURE
                }
            }
        }
    }
}
