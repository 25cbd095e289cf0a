//! Sizes and masses of typical subspaces as the block length grows.

use cq_lab::codec::ProductState;
use cq_lab::quantum::{von_neumann_entropy, DensityMatrix};
use cq_lab::typicality::{
    compressed_norm, compressed_trace, conditional_typical_subspace, relative_typical, universal_typical,
    TypicalSetParams,
};

fn main() -> cq_lab::Result<()> {
    let rho = DensityMatrix::diagonal(&[0.8, 0.2])?;
    let sigma = DensityMatrix::diagonal(&[0.5, 0.5])?;
    println!("S(rho) = {:.4}", von_neumann_entropy(&rho));
    println!(
        "{:>3} {:>6} {:>8} {:>10} {:>10} {:>10}",
        "n", "rank", "mass", "cond_rank", "rel_mass", "sigma_norm"
    );
    for n in [4, 6, 8, 10] {
        let params = TypicalSetParams::new(n, 0.5, 0.1)?;
        let ut = universal_typical(&rho, &params)?;
        let word = ProductState::new(vec![rho.clone(); n])?;
        let cond = conditional_typical_subspace(word.spectral(), von_neumann_entropy(&rho), &params)?;
        let rel = relative_typical(&rho, &sigma, &params)?;
        println!(
            "{n:>3} {:>6} {:>8.4} {:>10} {:>10.4} {:>10.4}",
            ut.subspace.rank(),
            ut.mass,
            cond.rank(),
            compressed_trace(&rel.projector, &rho, n),
            compressed_norm(&rel.projector, &sigma, n),
        );
    }
    Ok(())
}
