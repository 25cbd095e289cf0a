use crate::error::Result;
use crate::linalg;

use super::channel::{CqSource, QuantumChannel};
use super::operator::{same_dim, spectral_decomposition, DensityMatrix};
use super::{TAU_STATE, TAU_SUPPORT};

/// `-x log₂ x` with `0 log 0 = 0`.
pub fn eta(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        -x * x.log2()
    }
}

/// Shannon entropy of a probability vector, bits.
pub fn shannon_entropy(p: &[f64]) -> f64 {
    p.iter().copied().map(eta).sum()
}

/// `−Σ λ log₂ λ` over the spectrum of `ρ`.
pub fn von_neumann_entropy(rho: &DensityMatrix) -> f64 {
    let d = rho.dim() as f64;
    let s: f64 = rho.operator().eigenvalues().into_iter().map(eta).sum();
    s.clamp(0.0, d.log2())
}

/// Value of `D(ρ‖σ)`: a finite number of bits, or the infinite marker.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RelativeEntropy {
    Finite(f64),
    Infinite,
}

impl RelativeEntropy {
    pub fn finite(self) -> Option<f64> {
        match self {
            RelativeEntropy::Finite(x) => Some(x),
            RelativeEntropy::Infinite => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, RelativeEntropy::Infinite)
    }
}

impl PartialOrd for RelativeEntropy {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        use RelativeEntropy::*;
        match (self, other) {
            (Finite(a), Finite(b)) => a.partial_cmp(b),
            (Finite(_), Infinite) => Some(std::cmp::Ordering::Less),
            (Infinite, Finite(_)) => Some(std::cmp::Ordering::Greater),
            (Infinite, Infinite) => Some(std::cmp::Ordering::Equal),
        }
    }
}

/// `Tr ρ(log₂ρ − log₂σ)` evaluated in the two eigenbases.
pub fn relative_entropy(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<RelativeEntropy> {
    same_dim("relative_entropy", rho.dim(), sigma.dim())?;
    let r = spectral_decomposition(rho.operator());
    let s = spectral_decomposition(sigma.operator());
    // overlaps |<r_i|s_j>|²
    let overlap = r.eigenvectors.adjoint() * &s.eigenvectors;
    let mut cross = 0.0;
    for (i, &ri) in r.eigenvalues.iter().enumerate() {
        if ri <= TAU_SUPPORT {
            continue;
        }
        for (j, &sj) in s.eigenvalues.iter().enumerate() {
            let w = overlap.read(i, j).norm_sqr();
            if w <= TAU_SUPPORT {
                continue;
            }
            if sj <= TAU_SUPPORT {
                return Ok(RelativeEntropy::Infinite);
            }
            cross += ri * w * sj.log2();
        }
    }
    let neg_entropy: f64 = r.eigenvalues.iter().map(|&x| -eta(x)).sum();
    Ok(RelativeEntropy::Finite((neg_entropy - cross).max(0.0)))
}

/// `S(E(ω)) − Σ p_i S(E(ω_i))` with `ω = Σ p_i ω_i`.
pub fn holevo_quantity(src: &CqSource, ch: &QuantumChannel) -> Result<f64> {
    let outputs = src.outputs(ch)?;
    Ok(holevo_of_outputs(src.prior(), &outputs))
}

/// Holevo quantity of an ensemble of already-transmitted states.
pub fn holevo_of_outputs(prior: &[f64], outputs: &[DensityMatrix]) -> f64 {
    let d = outputs[0].dim();
    let mut avg = faer::Mat::zeros(d, d);
    for (p, rho) in prior.iter().zip(outputs) {
        avg = &avg + faer::scale(linalg::cx(*p, 0.0)) * rho.matrix();
    }
    let avg = DensityMatrix::from_trusted(avg);
    let conditional: f64 = prior.iter().zip(outputs).map(|(p, rho)| p * von_neumann_entropy(rho)).sum();
    let chi = von_neumann_entropy(&avg) - conditional;
    if (-TAU_STATE..0.0).contains(&chi) {
        0.0
    } else {
        chi
    }
}

/// Conditional entropy `Σ p_j S(ρ_j)`.
pub fn mean_entropy(prior: &[f64], states: &[DensityMatrix]) -> f64 {
    prior.iter().zip(states).map(|(p, s)| p * von_neumann_entropy(s)).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::cx;

    fn binary_entropy(p: f64) -> f64 {
        let q = 1.0 - p;
        -(p * p.log2() + q * q.log2())
    }

    #[test]
    fn entropy_values() {
        assert_eq!(von_neumann_entropy(&DensityMatrix::basis(2, 0).unwrap()), 0.0);
        assert!((von_neumann_entropy(&DensityMatrix::maximally_mixed(2)) - 1.0).abs() < 1e-15);
        let s = von_neumann_entropy(&DensityMatrix::diagonal(&[0.25, 0.75]).unwrap());
        assert!((s - 0.811278124459133).abs() < 1e-12);
    }

    #[test]
    fn relative_entropy_values() {
        let r = DensityMatrix::diagonal(&[0.3, 0.7]).unwrap();
        assert_eq!(relative_entropy(&r, &r).unwrap(), RelativeEntropy::Finite(0.0));
        let pure = DensityMatrix::basis(2, 0).unwrap();
        let mixed = DensityMatrix::maximally_mixed(2);
        let d = relative_entropy(&pure, &mixed).unwrap().finite().unwrap();
        assert!((d - 1.0).abs() < 1e-12);
        let other = DensityMatrix::basis(2, 1).unwrap();
        assert!(relative_entropy(&pure, &other).unwrap().is_infinite());
        assert!(relative_entropy(&pure, &DensityMatrix::maximally_mixed(3)).is_err());
    }

    #[test]
    fn relative_entropy_matches_kl_on_diagonals() {
        let p: [f64; 2] = [0.9, 0.1];
        let q = [0.5, 0.5];
        let kl: f64 = p.iter().zip(&q).map(|(a, b)| a * (a / b).log2()).sum();
        let d =
            relative_entropy(&DensityMatrix::diagonal(&p).unwrap(), &DensityMatrix::diagonal(&q).unwrap())
                .unwrap()
                .finite()
                .unwrap();
        assert!((d - kl).abs() < 1e-12);
        assert!((kl - (1.0 - binary_entropy(0.1))).abs() < 1e-12);
    }

    #[test]
    fn holevo_of_zero_plus_source() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let src = CqSource::new(
            vec![
                DensityMatrix::basis(2, 0).unwrap(),
                DensityMatrix::pure(&[cx(h, 0.0), cx(h, 0.0)]).unwrap(),
            ],
            vec![0.5, 0.5],
        )
        .unwrap();
        let chi = holevo_quantity(&src, &QuantumChannel::identity(2)).unwrap();
        let lam = (1.0 + h) / 2.0;
        assert!((chi - binary_entropy(lam)).abs() < 1e-12);
        assert!((chi - 0.600876).abs() < 1e-6);

        let same = CqSource::new(vec![DensityMatrix::basis(2, 0).unwrap(); 2], vec![0.5, 0.5]).unwrap();
        assert_eq!(holevo_quantity(&same, &QuantumChannel::identity(2)).unwrap(), 0.0);
        let bit = CqSource::new(
            vec![DensityMatrix::basis(2, 0).unwrap(), DensityMatrix::basis(2, 1).unwrap()],
            vec![0.5, 0.5],
        )
        .unwrap();
        assert!((holevo_quantity(&bit, &QuantumChannel::identity(2)).unwrap() - 1.0).abs() < 1e-12);
    }
}
