//! Average decoding error of random codebooks against block length.

use std::f64::consts::FRAC_1_SQRT_2;

use cq_lab::linalg::cx;
use cq_lab::quantum::{CqSource, DensityMatrix, QuantumChannel};
use cq_lab::simulator::{run_error_experiment, ErrorExperiment};

fn main() -> cq_lab::Result<()> {
    let zero = DensityMatrix::basis(2, 0)?;
    let plus = DensityMatrix::pure(&[cx(FRAC_1_SQRT_2, 0.0), cx(FRAC_1_SQRT_2, 0.0)])?;
    let src = CqSource::new(vec![zero, plus], vec![0.5, 0.5])?;
    println!("{:>3} {:>4} {:>8} {:>8}", "n", "M", "p_err", "ci95");
    for n in [4, 6, 8] {
        let mut exp = ErrorExperiment::new(src.clone(), QuantumChannel::identity(2), n, 0.3);
        exp.codebook_samples = 10;
        exp.seed = 1;
        let r = run_error_experiment(&exp)?;
        println!("{n:>3} {:>4} {:>8.4} {:>8.4}", r.m, r.p_err_mean, r.p_err_ci95);
    }
    Ok(())
}
