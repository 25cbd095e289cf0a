//! Runs an experiment from a JSON config, like the `cq-lab` binary.
//!
//! `cargo run --example run_config -- configs/single.json out`

use cq_lab::harness::{load_config, run};

fn main() -> cq_lab::Result<()> {
    let mut args = std::env::args().skip(1);
    let config = args.next().unwrap_or_else(|| "configs/entropy.json".into());
    let out = args.next().unwrap_or_else(|| "out".into());
    let cfg = load_config(&config)?;
    let output = run(&cfg, &out)?;
    for row in &output.rows {
        println!("{}", row.to_csv());
    }
    println!("wrote {}", output.json_path.display());
    Ok(())
}
