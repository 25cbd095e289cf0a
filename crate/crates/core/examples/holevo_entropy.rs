//! Entropies and the Holevo quantity of a two-state qubit source.

use std::f64::consts::FRAC_1_SQRT_2;

use cq_lab::linalg::cx;
use cq_lab::quantum::{
    holevo_quantity, relative_entropy, von_neumann_entropy, CqSource, DensityMatrix, QuantumChannel,
};

fn main() -> cq_lab::Result<()> {
    let zero = DensityMatrix::basis(2, 0)?;
    let plus = DensityMatrix::pure(&[cx(FRAC_1_SQRT_2, 0.0), cx(FRAC_1_SQRT_2, 0.0)])?;
    let src = CqSource::new(vec![zero.clone(), plus.clone()], vec![0.5, 0.5])?;

    let avg = src.mixture()?;
    println!("S(avg)            = {:.6}", von_neumann_entropy(&avg));
    for (name, ch) in [
        ("identity", QuantumChannel::identity(2)),
        ("dephasing", QuantumChannel::dephasing(2)),
        ("depolarizing", QuantumChannel::fully_depolarizing(2)),
    ] {
        println!("chi({name:<12}) = {:.6}", holevo_quantity(&src, &ch)?);
    }

    let mixed = DensityMatrix::diagonal(&[0.8, 0.2])?;
    println!("D(mixed||avg)     = {:?}", relative_entropy(&mixed, &avg)?);
    println!("D(avg|||0><0|)    = {:?}", relative_entropy(&avg, &zero)?);
    Ok(())
}
