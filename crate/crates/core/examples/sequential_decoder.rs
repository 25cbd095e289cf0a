//! Builds the sequential decoder for one random codebook and inspects it.

use std::f64::consts::FRAC_1_SQRT_2;

use cq_lab::codec::{generate_codebook, Decoded};
use cq_lab::linalg::cx;
use cq_lab::quantum::{CqSource, DensityMatrix, QuantumChannel};
use cq_lab::rng::{self, Purpose};
use cq_lab::simulator::{codebook_error, measure, success_probability, DecoderProjector, DecoderSetup};
use cq_lab::typicality::TypicalSetParams;

fn main() -> cq_lab::Result<()> {
    let zero = DensityMatrix::basis(2, 0)?;
    let plus = DensityMatrix::pure(&[cx(FRAC_1_SQRT_2, 0.0), cx(FRAC_1_SQRT_2, 0.0)])?;
    let src = CqSource::new(vec![zero, plus], vec![0.5, 0.5])?;
    let n = 6;
    let params = TypicalSetParams::new(n, 0.5, 0.25)?;
    let setup = DecoderSetup::new(&src, &QuantumChannel::identity(2), params, DecoderProjector::Typical)?;
    let cb = generate_codebook(src.prior(), n, 0.3, 42)?;
    let (states, povm) = setup.decoder(&cb)?;

    println!("chi = {:.4}, M = {}, rank(Pi) = {}", setup.chi, cb.len(), setup.pi.rank());
    println!("part ranks {:?}, error part rank {}", povm.ranks(), povm.error_part().rank());
    println!(
        "max overlap {:.2e}, completeness residual {:.2e}",
        povm.max_cross_overlap(),
        povm.completeness_residual()
    );
    for (i, st) in states.iter().enumerate() {
        println!(
            "  message {i}: codeword {:?} success {:.4}",
            cb.codeword(i)?,
            success_probability(&povm, i, st)?
        );
    }
    println!("average error {:.4}", codebook_error(&povm, &states)?);

    let rho = states[0].to_density(setup.params.max_dim)?;
    let mut r = rng::stream(42, Purpose::Measurement, 0);
    let hits = (0..1000)
        .filter(|_| matches!(measure(&povm, &rho, &mut r).map(|o| o.decoded), Ok(Decoded::Message(0))))
        .count();
    println!("message 0 decoded in {hits}/1000 sampled measurements");
    Ok(())
}
