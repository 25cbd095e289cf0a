//! Two-stage decoding when an adversary picks the channel from a known set.

use cq_lab::compound::{compound_holevo, run_compound_experiment, CompoundChannelSet, CompoundExperiment};
use cq_lab::linalg::cx;
use cq_lab::quantum::{CqSource, DensityMatrix, QuantumChannel};
use faer::Mat;

fn main() -> cq_lab::Result<()> {
    let src = CqSource::new(
        vec![DensityMatrix::diagonal(&[0.95, 0.05])?, DensityMatrix::diagonal(&[0.1, 0.9])?],
        vec![0.7, 0.3],
    )?;
    let flip = Mat::from_fn(2, 2, |i, j| if i != j { cx(1.0, 0.0) } else { cx(0.0, 0.0) });
    let set = CompoundChannelSet::new(vec![QuantumChannel::identity(2), QuantumChannel::new(vec![flip])?])?;
    println!("chi(S) = {:.4}", compound_holevo(&set, &src)?);

    let mut exp = CompoundExperiment::new(set, src, 8, 0.2);
    exp.codebook_samples = 4;
    exp.trials = 200;
    let r = run_compound_experiment(&exp)?;
    println!("M = {}, epsilon = {:.4}, test ranks {:?}", r.m, r.epsilon, r.test_ranks);
    for row in &r.rows {
        println!(
            "channel {}: ident fail {:.4} (sampled {:?}), P_e {:.4}, message errors {:.4}",
            row.o, row.ident_fail_rate, row.sampled_ident_fail, row.p_err, row.message_err
        );
    }
    Ok(())
}
