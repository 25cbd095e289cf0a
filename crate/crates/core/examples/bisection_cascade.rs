//! Decodes a classical channel output through the two-outcome bisection cascade.

use cq_lab::cascade::{
    bisect_decode, classical_decode_experiment, embed_dmc, encode_output_sequence, pad_povm,
    ClassicalDecodeExperiment, ClassicalDmc,
};
use cq_lab::codec::generate_codebook;
use cq_lab::quantum::QuantumChannel;
use cq_lab::rng::{self, Purpose};
use cq_lab::simulator::{DecoderProjector, DecoderSetup};
use cq_lab::typicality::TypicalSetParams;

fn main() -> cq_lab::Result<()> {
    let dmc = ClassicalDmc::binary_symmetric(0.1)?;
    let (src, _) = embed_dmc(&dmc)?;
    println!("I(P,W) = {:.6}", dmc.mutual_information());

    let n = 6;
    let params = TypicalSetParams::new(n, 0.5, 0.2)?;
    let setup = DecoderSetup::new(&src, &QuantumChannel::identity(2), params, DecoderProjector::Typical)?;
    let cb = generate_codebook(src.prior(), n, 0.3, 3)?;
    let (_, povm) = setup.decoder(&cb)?;
    let padded = pad_povm(&povm);
    println!("M = {}, padded to {} outcomes, depth {}", cb.len(), padded.len(), padded.depth());

    let alpha = cb.codeword(1)?;
    let mut r = rng::stream(3, Purpose::Channel, 0);
    let y = dmc.sample_output(alpha, &mut r);
    let mu = encode_output_sequence(&y, 2)?.to_density(64)?;
    let out = bisect_decode(&padded, &mu, &mut rng::stream(3, Purpose::Measurement, 0))?;
    println!("sent codeword {alpha:?}, received {y:?}");
    println!("transcript {:?} -> {:?}", out.bits, out.decoded);

    let mut exp = ClassicalDecodeExperiment::new(dmc, n, 0.3);
    exp.trials = 100;
    exp.codebook_samples = 5;
    let res = classical_decode_experiment(&exp)?;
    println!(
        "P_e bisection {:.4}, classical {:.4}, exact {:.4}, {} measurements per block",
        res.p_err, res.classical_p_err, res.exact_p_err, res.n_measurements
    );
    Ok(())
}
