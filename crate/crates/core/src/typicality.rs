//! Typical sequences and typical subspaces.
//!
//! Symbols and eigen-indices are 0-based. A multi-index `k` into a product of
//! `n` factors of dimension `d` is read as `n` base-`d` digits, most
//! significant first, matching the row order of Kronecker products.

use faer::complex_native::c64;
use faer::Mat;

use crate::error::{checked_pow, Error, Result};
use crate::linalg::{self, CMat};
use crate::quantum::{
    relative_entropy, spectral_decomposition, tensor_power_of, von_neumann_entropy, DensityMatrix,
    HermitianOperator, RelativeEntropy, SpectralDecomposition, Subspace, TAU_SUPPORT,
};

/// Block length and window constants.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TypicalSetParams {
    pub n: usize,
    /// Window constant for sequence and eigenvalue typicality.
    pub delta: f64,
    /// Slack used by codeword typicality and relative typicality.
    pub epsilon: f64,
    /// Largest ambient dimension `d^n` that may be materialized.
    pub max_dim: usize,
}

impl TypicalSetParams {
    pub fn new(n: usize, delta: f64, epsilon: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::param("n", "must be at least 1"));
        }
        if delta <= 0.0 || !delta.is_finite() {
            return Err(Error::param("delta", "must be positive"));
        }
        if epsilon <= 0.0 || !epsilon.is_finite() {
            return Err(Error::param("epsilon", "must be positive"));
        }
        Ok(Self { n, delta, epsilon, max_dim: crate::DEFAULT_MAX_DIM })
    }

    pub fn with_max_dim(mut self, max_dim: usize) -> Self {
        self.max_dim = max_dim;
        self
    }

    /// Sequence window `δ / n^{1/4}`.
    pub fn sequence_window(&self) -> f64 {
        self.delta / (self.n as f64).powf(0.25)
    }
}

fn check_symbols(x: &[usize], alphabet: usize) -> Result<()> {
    match x.iter().find(|&&a| a >= alphabet) {
        Some(&a) => Err(Error::IndexOutOfRange { what: "symbol", index: a, limit: alphabet }),
        None => Ok(()),
    }
}

fn counts(x: &[usize], alphabet: usize) -> Vec<usize> {
    let mut c = vec![0; alphabet];
    for &a in x {
        c[a] += 1;
    }
    c
}

/// `|N(a|x)/n − P(a)| ≤ δ/n^{1/4}` for every `a`, and no symbol of zero
/// probability occurs. The block length is `x.len()`.
pub fn is_p_typical(x: &[usize], p: &[f64], params: &TypicalSetParams) -> Result<bool> {
    check_symbols(x, p.len())?;
    let n = x.len();
    let window = params.delta / (n as f64).powf(0.25);
    Ok(counts_are_typical(&counts(x, p.len()), n, p, window))
}

fn counts_are_typical(c: &[usize], n: usize, p: &[f64], window: f64) -> bool {
    c.iter().zip(p).all(
        |(&na, &pa)| {
            if pa == 0.0 {
                na == 0
            } else {
                (na as f64 / n as f64 - pa).abs() <= window + 1e-12
            }
        },
    )
}

/// `log₂ P^n(x)`, `-inf` when a zero-probability symbol occurs.
pub fn sequence_log_prob(x: &[usize], p: &[f64]) -> f64 {
    x.iter().map(|&a| p[a].log2()).sum()
}

/// `2^{−n(H(P)+ε)} ≤ P^n(α) ≤ 2^{−n(H(P)−ε)}`, checked in the log domain.
pub fn is_eps_typical_codeword(alpha: &[usize], p: &[f64], params: &TypicalSetParams) -> Result<bool> {
    check_symbols(alpha, p.len())?;
    let n = alpha.len() as f64;
    let h = crate::quantum::shannon_entropy(p);
    let lp = sequence_log_prob(alpha, p);
    Ok(in_window(lp, -n * (h + params.epsilon), -n * (h - params.epsilon)))
}

fn in_window(x: f64, lo: f64, hi: f64) -> bool {
    const SLACK: f64 = 1e-9;
    x.is_finite() && x >= lo - SLACK && x <= hi + SLACK
}

/// Per-factor spectral data of `ρ_1 ⊗ … ⊗ ρ_n`.
#[derive(Debug, Clone)]
pub struct ProductSpectral {
    per_symbol: Vec<SpectralDecomposition>,
    d: usize,
}

impl ProductSpectral {
    /// Eigenvalues below the support tolerance are clamped to zero.
    pub fn new(per_symbol: Vec<SpectralDecomposition>) -> Result<Self> {
        let d = per_symbol
            .first()
            .map(|s| s.dim())
            .ok_or_else(|| Error::param("n", "product needs at least one factor"))?;
        let per_symbol = per_symbol
            .into_iter()
            .map(|mut s| {
                if s.dim() != d {
                    return Err(Error::DimensionMismatch {
                        context: "product factors",
                        expected: d,
                        found: s.dim(),
                    });
                }
                for v in s.eigenvalues.iter_mut() {
                    if *v < TAU_SUPPORT {
                        *v = 0.0;
                    }
                }
                Ok(s)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { per_symbol, d })
    }

    pub fn from_states(states: &[&DensityMatrix]) -> Result<Self> {
        Self::new(states.iter().map(|s| spectral_decomposition(s.operator())).collect())
    }

    /// `n` copies of one decomposition.
    pub fn power(sd: &SpectralDecomposition, n: usize) -> Result<Self> {
        Self::new(vec![sd.clone(); n])
    }

    pub fn n(&self) -> usize {
        self.per_symbol.len()
    }

    pub fn symbol_dim(&self) -> usize {
        self.d
    }

    pub fn factors(&self) -> &[SpectralDecomposition] {
        &self.per_symbol
    }

    pub fn ambient_dim(&self, max_dim: usize) -> Result<usize> {
        checked_pow(self.d, self.n(), max_dim)
    }

    pub fn digits(&self, k: usize) -> Vec<usize> {
        linalg::digits(k, self.d, self.n())
    }

    pub fn eigenvalue(&self, k: usize) -> f64 {
        self.digits(k).iter().zip(&self.per_symbol).map(|(&s, sd)| sd.eigenvalues[s]).product()
    }

    /// `log₂ λ_k`, `-inf` for a zero eigenvalue.
    pub fn log2_eigenvalue(&self, k: usize) -> f64 {
        self.digits(k).iter().zip(&self.per_symbol).map(|(&s, sd)| sd.eigenvalues[s].log2()).sum()
    }

    /// All `d^n` log-eigenvalues in multi-index order.
    pub fn log2_eigenvalues(&self, max_dim: usize) -> Result<Vec<f64>> {
        self.ambient_dim(max_dim)?;
        let mut out = vec![0.0];
        for sd in &self.per_symbol {
            let logs: Vec<f64> = sd.eigenvalues.iter().map(|v| v.log2()).collect();
            out = out.iter().flat_map(|&a| logs.iter().map(move |&b| a + b)).collect();
        }
        Ok(out)
    }

    pub fn eigenvector(&self, k: usize) -> Vec<c64> {
        let cols: Vec<Vec<c64>> =
            self.digits(k).iter().zip(&self.per_symbol).map(|(&s, sd)| sd.vector(s)).collect();
        let refs: Vec<&[c64]> = cols.iter().map(|c| c.as_slice()).collect();
        linalg::kron_vectors(&refs)
    }

    /// Product eigenvectors for the listed multi-indices, as columns.
    pub fn eigenvectors(&self, indices: &[usize], max_dim: usize) -> Result<CMat> {
        let dim = self.ambient_dim(max_dim)?;
        let mut out = Mat::<c64>::zeros(dim, indices.len());
        for (c, &k) in indices.iter().enumerate() {
            for (r, z) in self.eigenvector(k).into_iter().enumerate() {
                out.write(r, c, z);
            }
        }
        Ok(out)
    }
}

/// Multi-indices with `−n(s̄+δ) ≤ log₂ λ_k ≤ −n(s̄−δ)`.
pub fn conditional_typical_indices(
    prod: &ProductSpectral,
    s_bar: f64,
    params: &TypicalSetParams,
) -> Result<Vec<usize>> {
    let n = prod.n() as f64;
    let (lo, hi) = (-n * (s_bar + params.delta), -n * (s_bar - params.delta));
    Ok(prod
        .log2_eigenvalues(params.max_dim)?
        .into_iter()
        .enumerate()
        .filter(|(_, l)| in_window(*l, lo, hi))
        .map(|(k, _)| k)
        .collect())
}

/// Span of the product eigenvectors inside the conditional window.
pub fn conditional_typical_subspace(
    prod: &ProductSpectral,
    s_bar: f64,
    params: &TypicalSetParams,
) -> Result<Subspace> {
    let idx = conditional_typical_indices(prod, s_bar, params)?;
    Ok(Subspace::from_trusted(prod.eigenvectors(&idx, params.max_dim)?))
}

/// Whether `(α, k)` is a typical pair:
/// `log₂(P^n(α) λ_{α,k}) ∈ [−n(H(P)+s̄+δ), −n(H(P)+s̄−δ)]`.
pub fn typical_pair(
    alpha: &[usize],
    k: usize,
    prod: &ProductSpectral,
    p: &[f64],
    s_bar: f64,
    params: &TypicalSetParams,
) -> Result<bool> {
    check_symbols(alpha, p.len())?;
    let dim = prod.ambient_dim(params.max_dim)?;
    if k >= dim {
        return Err(Error::IndexOutOfRange { what: "eigen multi-index", index: k, limit: dim });
    }
    let n = alpha.len() as f64;
    let h = crate::quantum::shannon_entropy(p);
    let l = sequence_log_prob(alpha, p) + prod.log2_eigenvalue(k);
    Ok(in_window(l, -n * (h + s_bar + params.delta), -n * (h + s_bar - params.delta)))
}

/// Universal typical subspace of `ρ^{⊗n}` together with its `ρ^{⊗n}` mass.
#[derive(Debug, Clone)]
pub struct UniversalTypical {
    pub subspace: Subspace,
    /// Multi-indices of the typical eigen-sequences.
    pub sequences: Vec<usize>,
    /// `P^n(T)`, equal to `Tr(Π̂ ρ^{⊗n} Π̂)`.
    pub mass: f64,
    pub spectral: ProductSpectral,
}

/// Span of `u_{x_1} ⊗ … ⊗ u_{x_n}` over P-typical `x`, with `P` the spectrum of `ρ`.
pub fn universal_typical(rho: &DensityMatrix, params: &TypicalSetParams) -> Result<UniversalTypical> {
    let sd = spectral_decomposition(rho.operator());
    let prod = ProductSpectral::power(&sd, params.n)?;
    let d = prod.symbol_dim();
    let dim = prod.ambient_dim(params.max_dim)?;
    let p = prod.factors()[0].eigenvalues.clone();
    let window = params.sequence_window();
    let mut sequences = Vec::new();
    let mut mass = 0.0;
    for k in 0..dim {
        let x = linalg::digits(k, d, params.n);
        if counts_are_typical(&counts(&x, d), params.n, &p, window) {
            mass += x.iter().map(|&a| p[a]).product::<f64>();
            sequences.push(k);
        }
    }
    let subspace = Subspace::from_trusted(prod.eigenvectors(&sequences, params.max_dim)?);
    Ok(UniversalTypical { subspace, sequences, mass, spectral: prod })
}

pub fn universal_typical_subspace(rho: &DensityMatrix, params: &TypicalSetParams) -> Result<Subspace> {
    Ok(universal_typical(rho, params)?.subspace)
}

/// Nonnegative eigenspace of `ρ^{⊗n} − 2^{n·exponent} σ^{⊗n}`.
pub fn neyman_pearson_subspace(
    rho: &DensityMatrix,
    sigma: &DensityMatrix,
    n: usize,
    exponent: f64,
    max_dim: usize,
) -> Result<Subspace> {
    crate::quantum::same_dim("neyman_pearson_subspace", rho.dim(), sigma.dim())?;
    checked_pow(rho.dim(), n, max_dim)?;
    let r = tensor_power_of(&vec![rho; n], max_dim)?;
    let s = tensor_power_of(&vec![sigma; n], max_dim)?;
    let scale = (n as f64 * exponent).exp2();
    let a = r.matrix() - faer::scale(linalg::cx(scale, 0.0)) * s.matrix();
    let (values, vectors) = linalg::hermitian_eigen(a.as_ref());
    let norm = values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let floor = -64.0 * f64::EPSILON * norm;
    let first = values.iter().position(|v| *v >= floor).unwrap_or(values.len());
    let keep = values.len() - first;
    Ok(Subspace::from_trusted(vectors.as_ref().subcols(first, keep).to_owned()))
}

/// The pieces of a relative typical projector `Π = Π̂ ∧ Π̃`.
#[derive(Debug, Clone)]
pub struct RelativeTypical {
    pub projector: Subspace,
    pub universal: Subspace,
    pub neyman_pearson: Subspace,
    /// `D(ρ‖σ)` in bits.
    pub divergence: f64,
}

pub fn relative_typical(
    rho: &DensityMatrix,
    sigma: &DensityMatrix,
    params: &TypicalSetParams,
) -> Result<RelativeTypical> {
    let divergence = match relative_entropy(rho, sigma)? {
        RelativeEntropy::Finite(v) => v,
        RelativeEntropy::Infinite => return Err(Error::InfiniteRelativeEntropy),
    };
    let universal = universal_typical_subspace(rho, params)?;
    let neyman_pearson =
        neyman_pearson_subspace(rho, sigma, params.n, divergence - params.epsilon, params.max_dim)?;
    let projector = universal.meet(&neyman_pearson)?;
    Ok(RelativeTypical { projector, universal, neyman_pearson, divergence })
}

/// `Π̂ ∧ Π̃` for the pair `(ρ, σ)`.
pub fn relative_typical_subspace(
    rho: &DensityMatrix,
    sigma: &DensityMatrix,
    params: &TypicalSetParams,
) -> Result<Subspace> {
    Ok(relative_typical(rho, sigma, params)?.projector)
}

/// Support of `ρ^{⊗n}`.
pub fn support_subspace(rho: &DensityMatrix, n: usize, max_dim: usize) -> Result<Subspace> {
    let prod = ProductSpectral::power(&spectral_decomposition(rho.operator()), n)?;
    let idx: Vec<usize> = prod
        .log2_eigenvalues(max_dim)?
        .into_iter()
        .enumerate()
        .filter(|(_, l)| l.is_finite())
        .map(|(k, _)| k)
        .collect();
    Ok(Subspace::from_trusted(prod.eigenvectors(&idx, max_dim)?))
}

/// Largest eigenvalue of `Π ρ^{⊗n} Π`, evaluated on the range of `Π`.
pub fn compressed_norm(sub: &Subspace, rho: &DensityMatrix, n: usize) -> f64 {
    if sub.rank() == 0 {
        return 0.0;
    }
    let factors: Vec<_> = (0..n).map(|_| rho.matrix()).collect();
    let av = linalg::apply_kron_factors(&factors, sub.basis());
    let g = sub.basis().adjoint() * &av;
    HermitianOperator::from_trusted(linalg::hermitian_part(g.as_ref())).op_norm()
}

/// `Tr(Π ρ^{⊗n} Π)` without materializing `ρ^{⊗n}`.
pub fn compressed_trace(sub: &Subspace, rho: &DensityMatrix, n: usize) -> f64 {
    if sub.rank() == 0 {
        return 0.0;
    }
    let factors: Vec<_> = (0..n).map(|_| rho.matrix()).collect();
    let av = linalg::apply_kron_factors(&factors, sub.basis());
    linalg::re_inner(sub.basis(), av.as_ref())
}

/// `2^{−n(S(ρ) − slack)}`.
pub fn eigenvalue_ceiling(rho: &DensityMatrix, n: usize, slack: f64) -> f64 {
    (-(n as f64) * (von_neumann_entropy(rho) - slack)).exp2()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::cx;
    use crate::quantum::shannon_entropy;

    fn params(n: usize, delta: f64, epsilon: f64) -> TypicalSetParams {
        TypicalSetParams::new(n, delta, epsilon).unwrap()
    }

    #[test]
    fn p_typical_examples() {
        let half = [0.5, 0.5];
        assert!(is_p_typical(&[0, 1, 0, 1], &half, &params(4, 0.5, 0.1)).unwrap());
        assert!(!is_p_typical(&[0, 1, 0], &[1.0, 0.0], &params(3, 5.0, 0.1)).unwrap());
        // 12 of 16 equal: deviation 0.25 = 0.5 / 16^{1/4}
        let mut x = vec![0; 12];
        x.extend([1; 4]);
        assert!(is_p_typical(&x, &half, &params(16, 0.5, 0.1)).unwrap());
        x[12] = 0;
        assert!(!is_p_typical(&x, &half, &params(16, 0.5, 0.1)).unwrap());
        assert!(is_p_typical(&[2], &half, &params(1, 0.5, 0.1)).is_err());
    }

    #[test]
    fn eps_typical_examples() {
        assert!(is_eps_typical_codeword(&[0, 1, 1, 0, 0], &[0.5, 0.5], &params(5, 0.5, 1e-6)).unwrap());
        let skew = [0.9, 0.1];
        // log₂ 0.1 = −3.32, window around H = 0.469 is [0.459, 0.479]
        assert!(!is_eps_typical_codeword(&[1], &skew, &params(1, 0.5, 0.01)).unwrap());
        assert!(is_eps_typical_codeword(&[1, 1, 0], &skew, &params(3, 0.5, 5.0)).unwrap());
    }

    fn diag(p: &[f64]) -> DensityMatrix {
        DensityMatrix::diagonal(p).unwrap()
    }

    #[test]
    fn product_spectral_matches_dense() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let plus = DensityMatrix::pure(&[cx(h, 0.0), cx(h, 0.0)]).unwrap();
        let mix = DensityMatrix::mixture(&[0.3, 0.7], &[diag(&[1.0, 0.0]), plus]).unwrap();
        let a = diag(&[0.2, 0.8]);
        let states = [&mix, &a, &mix];
        let prod = ProductSpectral::from_states(&states).unwrap();
        let dense = tensor_power_of(&states, 64).unwrap();
        let mut ours: Vec<f64> = (0..8).map(|k| prod.eigenvalue(k)).collect();
        ours.sort_by(|x, y| y.total_cmp(x));
        let theirs = dense.operator().eigenvalues();
        for (x, y) in ours.iter().zip(&theirs) {
            assert!((x - y).abs() < 1e-12);
        }
        for k in 0..8 {
            let v = prod.eigenvector(k);
            let col = Mat::from_fn(8, 1, |i, _| v[i]);
            let av = dense.matrix() * &col;
            let resid = &av - faer::scale(cx(prod.eigenvalue(k), 0.0)) * &col;
            assert!(resid.norm_max() < 1e-12);
        }
    }

    #[test]
    fn conditional_subspace_matches_enumeration() {
        let rho = diag(&[0.7, 0.3]);
        let s = von_neumann_entropy(&rho);
        let p = params(4, 0.2, 0.1);
        let prod = ProductSpectral::power(&spectral_decomposition(rho.operator()), 4).unwrap();
        let sub = conditional_typical_subspace(&prod, s, &p).unwrap();
        // eigenvalue of a sequence with j factors of 0.3
        let mut expect = 0;
        for k in 0..16usize {
            let j = k.count_ones() as i32;
            let l = (0.7f64.powi(4 - j) * 0.3f64.powi(j)).log2();
            if l >= -4.0 * (s + 0.2) && l <= -4.0 * (s - 0.2) {
                expect += 1;
            }
        }
        assert_eq!(sub.rank(), expect);
        assert!(sub.rank() as f64 <= (4.0 * (s + 0.2)).exp2());
    }

    #[test]
    fn conditional_subspace_edge_cases() {
        let pure = diag(&[1.0, 0.0]);
        let prod = ProductSpectral::power(&spectral_decomposition(pure.operator()), 5).unwrap();
        assert_eq!(conditional_typical_subspace(&prod, 0.0, &params(5, 0.5, 0.1)).unwrap().rank(), 1);
        let rho = diag(&[0.6, 0.4, 0.0]);
        let prod = ProductSpectral::power(&spectral_decomposition(rho.operator()), 3).unwrap();
        assert_eq!(conditional_typical_subspace(&prod, 0.5, &params(3, 1e6, 0.1)).unwrap().rank(), 8);
    }

    #[test]
    fn typical_pair_examples() {
        let pure = diag(&[1.0, 0.0]);
        let prod = ProductSpectral::power(&spectral_decomposition(pure.operator()), 3).unwrap();
        let p = [0.5, 0.5];
        let tp = params(3, 0.5, 0.5);
        let alpha = [0, 1, 0];
        assert_eq!(
            typical_pair(&alpha, 0, &prod, &p, 0.0, &tp).unwrap(),
            is_eps_typical_codeword(&alpha, &p, &tp).unwrap()
        );
        assert!(!typical_pair(&alpha, 1, &prod, &p, 0.0, &tp).unwrap());

        let states = [diag(&[0.8, 0.2]), diag(&[0.4, 0.6])];
        let s_bar = 0.5 * (von_neumann_entropy(&states[0]) + von_neumann_entropy(&states[1]));
        let alpha = [0, 1, 1];
        let refs: Vec<&DensityMatrix> = alpha.iter().map(|&a| &states[a]).collect();
        let prod = ProductSpectral::from_states(&refs).unwrap();
        let tp = params(3, 0.3, 0.5);
        let h = shannon_entropy(&p);
        for k in 0..8 {
            let bits = linalg::digits(k, 2, 3);
            // spectral order is descending, so digit 0 is the larger diagonal entry
            let mut lam = 1.0;
            for (j, &b) in bits.iter().enumerate() {
                let mut e =
                    [states[alpha[j]].matrix().read(0, 0).re, states[alpha[j]].matrix().read(1, 1).re];
                e.sort_by(|x, y| y.total_cmp(x));
                lam *= e[b];
            }
            let l = (0.125 * lam).log2();
            let expect = l >= -3.0 * (h + s_bar + 0.3) - 1e-9 && l <= -3.0 * (h + s_bar - 0.3) + 1e-9;
            assert_eq!(typical_pair(&alpha, k, &prod, &p, s_bar, &tp).unwrap(), expect);
        }
    }

    #[test]
    fn universal_subspace_rank_matches_enumeration() {
        let rho = diag(&[0.75, 0.25]);
        let p = params(8, 1.0, 0.1);
        let u = universal_typical(&rho, &p).unwrap();
        let mut expect = 0;
        let mut mass = 0.0;
        for k in 0..256usize {
            let ones = k.count_ones() as f64;
            if ((8.0 - ones) / 8.0 - 0.75).abs() <= 1.0 / 8f64.powf(0.25) {
                expect += 1;
                mass += 0.75f64.powf(8.0 - ones) * 0.25f64.powf(ones);
            }
        }
        assert_eq!(u.subspace.rank(), expect);
        assert!((u.mass - mass).abs() < 1e-12);
        assert!((compressed_trace(&u.subspace, &rho, 8) - mass).abs() < 1e-12);

        assert_eq!(universal_typical_subspace(&diag(&[1.0, 0.0]), &p).unwrap().rank(), 1);
        assert_eq!(universal_typical_subspace(&diag(&[0.5, 0.5]), &p).unwrap().rank(), 256);
    }

    #[test]
    fn relative_typical_of_identical_pair_is_universal() {
        let rho = diag(&[0.7, 0.3]);
        let p = params(6, 0.5, 0.1);
        let rt = relative_typical(&rho, &rho, &p).unwrap();
        assert_eq!(rt.divergence, 0.0);
        assert_eq!(rt.neyman_pearson.rank(), 64);
        assert!(rt.projector.range_distance(&rt.universal) < 1e-10);
    }

    #[test]
    fn relative_typical_rejects_disjoint_supports() {
        let p = params(2, 0.5, 0.1);
        assert!(matches!(
            relative_typical(&diag(&[1.0, 0.0]), &diag(&[0.0, 1.0]), &p),
            Err(Error::InfiniteRelativeEntropy)
        ));
    }

    #[test]
    fn diagonal_neyman_pearson_accepts_likelihood_ratio_region() {
        let rho = diag(&[0.9, 0.1]);
        let sigma = diag(&[0.5, 0.5]);
        let n = 6;
        let t: f64 = 0.3;
        let np = neyman_pearson_subspace(&rho, &sigma, n, t, 4096).unwrap();
        let mut expect = 0;
        for k in 0..(1usize << n) {
            let ones = k.count_ones() as i32;
            let r = 0.9f64.powi(n as i32 - ones) * 0.1f64.powi(ones);
            if r - (n as f64 * t).exp2() * 0.5f64.powi(n as i32) >= 0.0 {
                expect += 1;
            }
        }
        assert_eq!(np.rank(), expect);
    }
}
