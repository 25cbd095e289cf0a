//! Random codebooks, product codeword states and the sequential decoder.

use faer::complex_native::c64;
use faer::{Mat, MatRef};
use rand::distributions::{Distribution, WeightedIndex};
use rand::Rng;

use crate::error::{checked_pow, Error, Result};
use crate::linalg::{self, CMat};
use crate::quantum::{tensor_power_of, validate_prior, DensityMatrix, OperatorMap, Subspace, TAU_RANK};
use crate::rng::{self, Purpose};
use crate::typicality::{conditional_typical_indices, ProductSpectral, TypicalSetParams};

/// Residual norms below this are dropped whatever the batch scale.
pub const TAU_RESIDUAL_FLOOR: f64 = 1e-10;

/// Largest message count a codebook may have.
pub const MAX_MESSAGES: usize = 1 << 20;

/// `max(1, ⌈2^{nR}⌉)`, with `2^{nR}` snapped to an integer when within a
/// relative 1e-9 of it.
pub fn message_count(n: usize, rate: f64) -> Result<usize> {
    if rate <= 0.0 || !rate.is_finite() {
        return Err(Error::param("rate", "must be positive"));
    }
    let mut x = (n as f64 * rate).exp2();
    if (x - x.round()).abs() < 1e-9 * x.max(1.0) {
        x = x.round();
    }
    let m = x.ceil();
    if m > MAX_MESSAGES as f64 {
        return Err(Error::param(
            "rate",
            format!("2^(nR) = {m:.3e} messages exceeds the limit {MAX_MESSAGES}"),
        ));
    }
    Ok((m as usize).max(1))
}

/// `M` codewords of length `n` over the input alphabet `0..l`.
#[derive(Debug, Clone, PartialEq)]
pub struct Codebook {
    pub n: usize,
    pub rate: f64,
    pub alphabet: usize,
    pub codewords: Vec<Vec<usize>>,
    pub seed: u64,
    /// Index of the codebook stream under `seed`.
    pub sample: u64,
}

impl Codebook {
    /// Builds a codebook from explicit codewords.
    pub fn from_codewords(codewords: Vec<Vec<usize>>, alphabet: usize, rate: f64) -> Result<Self> {
        let n = codewords.first().map(|c| c.len()).unwrap_or(0);
        if n == 0 {
            return Err(Error::param("codewords", "need at least one nonempty codeword"));
        }
        for c in &codewords {
            if c.len() != n {
                return Err(Error::DimensionMismatch {
                    context: "codeword length",
                    expected: n,
                    found: c.len(),
                });
            }
            if let Some(&a) = c.iter().find(|&&a| a >= alphabet) {
                return Err(Error::IndexOutOfRange { what: "symbol", index: a, limit: alphabet });
            }
        }
        Ok(Self { n, rate, alphabet, codewords, seed: 0, sample: 0 })
    }

    pub fn len(&self) -> usize {
        self.codewords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.codewords.is_empty()
    }

    pub fn codeword(&self, i: usize) -> Result<&[usize]> {
        self.codewords.get(i).map(|c| c.as_slice()).ok_or(Error::IndexOutOfRange {
            what: "message",
            index: i,
            limit: self.codewords.len(),
        })
    }
}

/// Codebook number `sample` under `seed`: symbols i.i.d. from `p`.
pub fn generate_codebook_sample(p: &[f64], n: usize, rate: f64, seed: u64, sample: u64) -> Result<Codebook> {
    validate_prior(p)?;
    if n == 0 {
        return Err(Error::param("n", "must be at least 1"));
    }
    let m = message_count(n, rate)?;
    let dist = WeightedIndex::new(p).map_err(|e| Error::param("prior", e.to_string()))?;
    let mut rng = rng::stream(seed, Purpose::Codebook, sample);
    let codewords = (0..m).map(|_| (0..n).map(|_| dist.sample(&mut rng)).collect()).collect();
    Ok(Codebook { n, rate, alphabet: p.len(), codewords, seed, sample })
}

pub fn generate_codebook(p: &[f64], n: usize, rate: f64, seed: u64) -> Result<Codebook> {
    generate_codebook_sample(p, n, rate, seed, 0)
}

/// `ρ_{α(1)} ⊗ … ⊗ ρ_{α(n)}` kept in factored form.
#[derive(Debug, Clone)]
pub struct ProductState {
    factors: Vec<DensityMatrix>,
    spectral: ProductSpectral,
    dense: Option<CMat>,
}

impl ProductState {
    pub fn new(factors: Vec<DensityMatrix>) -> Result<Self> {
        let refs: Vec<&DensityMatrix> = factors.iter().collect();
        let spectral = ProductSpectral::from_states(&refs)?;
        Ok(Self { factors, spectral, dense: None })
    }

    pub fn n(&self) -> usize {
        self.factors.len()
    }

    pub fn symbol_dim(&self) -> usize {
        self.spectral.symbol_dim()
    }

    pub fn ambient_dim(&self) -> usize {
        self.symbol_dim().pow(self.n() as u32)
    }

    pub fn factors(&self) -> &[DensityMatrix] {
        &self.factors
    }

    pub fn spectral(&self) -> &ProductSpectral {
        &self.spectral
    }

    /// Builds and keeps the dense `d^n × d^n` matrix.
    pub fn materialize(&mut self, max_dim: usize) -> Result<&CMat> {
        if self.dense.is_none() {
            let refs: Vec<&DensityMatrix> = self.factors.iter().collect();
            self.dense = Some(tensor_power_of(&refs, max_dim)?.operator().clone().into_matrix());
        }
        Ok(self.dense.as_ref().unwrap())
    }

    pub fn dense(&self) -> Option<&CMat> {
        self.dense.as_ref()
    }

    pub fn to_density(&self, max_dim: usize) -> Result<DensityMatrix> {
        let refs: Vec<&DensityMatrix> = self.factors.iter().collect();
        tensor_power_of(&refs, max_dim)
    }

    /// `ρ X` through per-factor mode products.
    pub fn apply(&self, x: MatRef<'_, c64>) -> CMat {
        let f: Vec<_> = self.factors.iter().map(|s| s.matrix()).collect();
        linalg::apply_kron_factors(&f, x)
    }

    /// `Tr(W† ρ W)`.
    pub fn sandwich_trace(&self, w: MatRef<'_, c64>) -> f64 {
        if w.ncols() == 0 {
            return 0.0;
        }
        linalg::re_inner(w, self.apply(w).as_ref())
    }

    /// `X` with `X X† = Π_T ρ Π_T` for the eigen multi-indices `T`, columns `√λ_k |s_k>`.
    pub fn compressed_factor(&self, indices: &[usize]) -> CMat {
        let d = self.ambient_dim();
        let mut x = Mat::<c64>::zeros(d, indices.len());
        for (c, &k) in indices.iter().enumerate() {
            let s = self.spectral.eigenvalue(k).sqrt();
            for (r, z) in self.spectral.eigenvector(k).into_iter().enumerate() {
                x.write(r, c, z * s);
            }
        }
        x
    }

    /// Draws a product eigenvector with probability equal to its eigenvalue.
    ///
    /// Measuring the returned pure state reproduces the outcome statistics of
    /// the mixed state.
    pub fn sample_component<R: Rng>(&self, rng: &mut R) -> Vec<c64> {
        let cols: Vec<Vec<c64>> = self
            .spectral
            .factors()
            .iter()
            .map(|sd| {
                let u: f64 = rng.gen();
                let mut acc = 0.0;
                let mut pick = sd.dim() - 1;
                for (k, &l) in sd.eigenvalues.iter().enumerate() {
                    acc += l;
                    if u < acc {
                        pick = k;
                        break;
                    }
                }
                sd.vector(pick)
            })
            .collect();
        let refs: Vec<&[c64]> = cols.iter().map(|c| c.as_slice()).collect();
        linalg::kron_vectors(&refs)
    }
}

/// Channel outputs `ρ_1..ρ_l` for the input alphabet.
pub fn quantum_codeword(cb: &Codebook, i: usize, outputs: &[DensityMatrix]) -> Result<ProductState> {
    if outputs.len() != cb.alphabet {
        return Err(Error::DimensionMismatch {
            context: "output alphabet",
            expected: cb.alphabet,
            found: outputs.len(),
        });
    }
    let word = cb.codeword(i)?;
    ProductState::new(word.iter().map(|&a| outputs[a].clone()).collect())
}

/// `E[ρ_α] = ρ^{⊗n}` with `ρ = Σ p_i ρ_i`.
pub fn expected_codeword_state(
    p: &[f64],
    outputs: &[DensityMatrix],
    n: usize,
    max_dim: usize,
) -> Result<DensityMatrix> {
    validate_prior(p)?;
    let rho = DensityMatrix::mixture(p, outputs)?;
    checked_pow(rho.dim(), n, max_dim)?;
    tensor_power_of(&vec![&rho; n], max_dim)
}

/// Conditional typical subspace of each codeword's output state.
pub fn codeword_typical_subspaces(
    states: &[ProductState],
    s_bar: f64,
    params: &TypicalSetParams,
) -> Result<Vec<Subspace>> {
    states
        .iter()
        .map(|s| crate::typicality::conditional_typical_subspace(s.spectral(), s_bar, params))
        .collect()
}

/// Multi-indices of each codeword's conditional typical eigenvectors.
pub fn codeword_typical_indices(
    states: &[ProductState],
    s_bar: f64,
    params: &TypicalSetParams,
) -> Result<Vec<Vec<usize>>> {
    states.iter().map(|s| conditional_typical_indices(s.spectral(), s_bar, params)).collect()
}

/// Outcome of a decoder measurement.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Decoded {
    /// 0-based message index.
    Message(usize),
    Error,
}

/// Ordered, mutually orthogonal projectors plus the error complement.
#[derive(Debug, Clone)]
pub struct SequentialPovm {
    parts: Vec<Subspace>,
    error_part: Subspace,
}

impl SequentialPovm {
    /// Assembles a measurement from orthogonal parts; the error part is the
    /// orthogonal complement of their sum.
    pub fn from_parts(parts: Vec<Subspace>) -> Result<Self> {
        let d = parts
            .first()
            .map(|p| p.ambient_dim())
            .ok_or_else(|| Error::param("parts", "need at least one part"))?;
        let mut acc = Mat::<c64>::zeros(d, 0);
        for p in &parts {
            crate::quantum::same_dim("povm parts", d, p.ambient_dim())?;
            acc = linalg::hstack(acc.as_ref(), p.basis());
        }
        let error_part = Subspace::from_trusted(linalg::complement_basis(acc.as_ref()));
        Ok(Self { parts, error_part })
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn ambient_dim(&self) -> usize {
        self.error_part.ambient_dim()
    }

    pub fn parts(&self) -> &[Subspace] {
        &self.parts
    }

    pub fn part(&self, i: usize) -> Result<&Subspace> {
        self.parts.get(i).ok_or(Error::IndexOutOfRange {
            what: "povm part",
            index: i,
            limit: self.parts.len(),
        })
    }

    pub fn error_part(&self) -> &Subspace {
        &self.error_part
    }

    /// Parts followed by the error part; index `len()` is the error outcome.
    pub fn outcome_subspace(&self, outcome: usize) -> Result<&Subspace> {
        if outcome == self.parts.len() {
            Ok(&self.error_part)
        } else {
            self.part(outcome)
        }
    }

    pub fn outcome_label(&self, outcome: usize) -> Decoded {
        if outcome < self.parts.len() {
            Decoded::Message(outcome)
        } else {
            Decoded::Error
        }
    }

    pub fn ranks(&self) -> Vec<usize> {
        self.parts.iter().map(|p| p.rank()).collect()
    }

    /// Stacked bases of `Π̃_0..Π̃_{i-1}`.
    pub fn preceding_basis(&self, i: usize) -> CMat {
        let d = self.ambient_dim();
        let mut acc = Mat::<c64>::zeros(d, 0);
        for p in &self.parts[..i.min(self.parts.len())] {
            acc = linalg::hstack(acc.as_ref(), p.basis());
        }
        acc
    }

    /// All bases, parts then error part.
    pub fn stacked_basis(&self) -> CMat {
        linalg::hstack(self.preceding_basis(self.parts.len()).as_ref(), self.error_part.basis())
    }

    /// Largest `‖V_i† V_j‖_op` over distinct outcomes, error part included.
    pub fn max_cross_overlap(&self) -> f64 {
        let all: Vec<&Subspace> = self.parts.iter().chain(std::iter::once(&self.error_part)).collect();
        let mut worst: f64 = 0.0;
        for i in 0..all.len() {
            for j in (i + 1)..all.len() {
                if all[i].rank() > 0 && all[j].rank() > 0 {
                    worst = worst.max(all[i].overlap(all[j]));
                }
            }
        }
        worst
    }

    /// `max |(B†B − I)_{ij}|` for the stacked basis `B`, or 1 when ranks do not add up.
    pub fn completeness_residual(&self) -> f64 {
        let b = self.stacked_basis();
        if b.ncols() != self.ambient_dim() {
            return 1.0;
        }
        let g = b.adjoint() * &b;
        (&g - linalg::identity(b.ncols())).norm_max()
    }
}

/// Sequential decoder with `Π` given as a general map.
///
/// For each `i` in order the basis of `typ[i]` is pushed through `map`,
/// deflated against everything accepted so far and orthonormalized; columns
/// whose residual falls below `TAU_RANK` times the largest residual of the
/// batch (or below [`TAU_RESIDUAL_FLOOR`]) are dropped.
pub fn build_sequential_povm_with(map: &dyn OperatorMap, typ: &[Subspace]) -> Result<SequentialPovm> {
    let d = map.ambient_dim();
    if typ.is_empty() {
        return Err(Error::param("typical subspaces", "need at least one codeword"));
    }
    let mut acc = Mat::<c64>::zeros(d, 0);
    let mut parts = Vec::with_capacity(typ.len());
    for t in typ {
        crate::quantum::same_dim("sequential povm", d, t.ambient_dim())?;
        let pushed = map.apply(t.basis());
        let fresh =
            linalg::deflate_orthonormalize(pushed.as_ref(), acc.as_ref(), TAU_RANK, TAU_RESIDUAL_FLOOR);
        acc = linalg::hstack(acc.as_ref(), fresh.as_ref());
        parts.push(Subspace::from_trusted(fresh));
    }
    let error_part = Subspace::from_trusted(linalg::complement_basis(acc.as_ref()));
    Ok(SequentialPovm { parts, error_part })
}

/// Sequential decoder `Π̃_1..Π̃_M` for a codebook, decoding projector `pi` and
/// the codewords' typical subspaces.
pub fn build_sequential_povm(cb: &Codebook, pi: &Subspace, typ: &[Subspace]) -> Result<SequentialPovm> {
    if typ.len() != cb.len() {
        return Err(Error::DimensionMismatch {
            context: "typical subspaces per codeword",
            expected: cb.len(),
            found: typ.len(),
        });
    }
    build_sequential_povm_with(pi, typ)
}

/// Both sides of the projection-length inequality for message `i`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProjLemBound {
    /// `Tr(Π̃_i ρ_{α_i} Π̃_i)`.
    pub lhs: f64,
    /// `(Tr(Π ρ̃ Π) − Tr(Π̃_{i−} Π ρ̃ Π Π̃_{i−}))²`, clamped at zero inside.
    pub rhs: f64,
}

impl ProjLemBound {
    pub fn holds(&self, slack: f64) -> bool {
        self.lhs >= self.rhs - slack
    }
}

/// `rho_tilde_factor` is any `X` with `X X† = ρ̃_{α_i}`, for instance
/// [`ProductState::compressed_factor`] on the typical indices.
pub fn proj_lem_bound(
    povm: &SequentialPovm,
    i: usize,
    rho: &ProductState,
    rho_tilde_factor: MatRef<'_, c64>,
    pi: &dyn OperatorMap,
) -> Result<ProjLemBound> {
    let part = povm.part(i)?;
    let lhs = rho.sandwich_trace(part.basis());
    let px = pi.apply(rho_tilde_factor);
    let inner = linalg::frobenius_sqr(px.as_ref());
    let before = povm.preceding_basis(i);
    let lost = linalg::frobenius_sqr((before.adjoint() * &px).as_ref());
    let diff = (inner - lost).max(0.0);
    Ok(ProjLemBound { lhs, rhs: diff * diff })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::cx;

    fn diag(p: &[f64]) -> DensityMatrix {
        DensityMatrix::diagonal(p).unwrap()
    }

    #[test]
    fn message_counts() {
        assert_eq!(message_count(4, 0.5).unwrap(), 4);
        assert_eq!(message_count(10, 0.3).unwrap(), 8);
        assert_eq!(message_count(10, 0.25).unwrap(), 6);
        assert_eq!(message_count(1, 0.01).unwrap(), 2);
        assert_eq!(message_count(3, 1.0 / 3.0).unwrap(), 2);
        assert!(message_count(4, 0.0).is_err());
    }

    #[test]
    fn deterministic_source_gives_constant_codewords() {
        let cb = generate_codebook(&[1.0], 5, 0.4, 3).unwrap();
        assert_eq!(cb.len(), 4);
        assert!(cb.codewords.iter().all(|c| c.iter().all(|&a| a == 0)));
    }

    #[test]
    fn codebook_frequency_is_binomial() {
        let cb = generate_codebook(&[0.5, 0.5], 8, 0.5, 42).unwrap();
        let total = (cb.len() * cb.n) as f64;
        let ones: usize = cb.codewords.iter().flatten().filter(|&&a| a == 1).count();
        let sigma = (total * 0.25).sqrt();
        assert!((ones as f64 - total / 2.0).abs() <= 4.0 * sigma);
        assert_eq!(cb, generate_codebook(&[0.5, 0.5], 8, 0.5, 42).unwrap());
        assert_ne!(cb, generate_codebook_sample(&[0.5, 0.5], 8, 0.5, 42, 1).unwrap());
    }

    #[test]
    fn codeword_dense_matches_kron() {
        let outs = vec![diag(&[0.9, 0.1]), diag(&[0.3, 0.7])];
        let cb = Codebook::from_codewords(vec![vec![0, 1, 1]], 2, 0.1).unwrap();
        let mut st = quantum_codeword(&cb, 0, &outs).unwrap();
        let dense = st.materialize(64).unwrap().clone();
        let oracle =
            linalg::kron(linalg::kron(outs[0].matrix(), outs[1].matrix()).as_ref(), outs[1].matrix());
        assert!((&dense - &oracle).norm_max() < 1e-15);
        assert!(quantum_codeword(&cb, 1, &outs).is_err());
    }

    #[test]
    fn expected_state_is_tensor_power_of_average() {
        let outs = vec![diag(&[0.9, 0.1]), diag(&[0.3, 0.7])];
        let e = expected_codeword_state(&[0.25, 0.75], &outs, 1, 64).unwrap();
        let avg = DensityMatrix::mixture(&[0.25, 0.75], &outs).unwrap();
        assert!((e.matrix() - avg.matrix()).norm_max() < 1e-15);
    }

    #[test]
    fn single_codeword_full_space_keeps_its_typical_subspace() {
        let t = Subspace::coordinate(4, &[1, 2]).unwrap();
        let cb = Codebook::from_codewords(vec![vec![0, 0]], 1, 0.1).unwrap();
        let povm = build_sequential_povm(&cb, &Subspace::full(4), std::slice::from_ref(&t)).unwrap();
        assert!(povm.part(0).unwrap().range_distance(&t) < 1e-12);
        assert!(povm.error_part().range_distance(&t.complement()) < 1e-12);
        assert!(povm.completeness_residual() < 1e-12);
    }

    #[test]
    fn overlapping_pair_matches_gram_schmidt() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let a = Subspace::coordinate(4, &[0]).unwrap();
        // span{(e0 + e1)/√2, e2}
        let b = Subspace::new(Mat::from_fn(4, 2, |i, j| match (i, j) {
            (0, 0) | (1, 0) => cx(s, 0.0),
            (2, 1) => cx(1.0, 0.0),
            _ => cx(0.0, 0.0),
        }))
        .unwrap();
        let cb = Codebook::from_codewords(vec![vec![0], vec![1]], 2, 1.0).unwrap();
        let povm = build_sequential_povm(&cb, &Subspace::full(4), &[a, b]).unwrap();
        assert_eq!(povm.ranks(), vec![1, 2]);
        // Gram-Schmidt by hand: e1 and e2 remain after removing e0
        let expect = Subspace::coordinate(4, &[1, 2]).unwrap();
        assert!(povm.part(1).unwrap().range_distance(&expect) < 1e-12);
        assert!(povm.max_cross_overlap() < 1e-12);
        assert_eq!(povm.error_part().rank(), 1);
    }

    #[test]
    fn proj_lem_holds_for_single_codeword() {
        let outs = vec![diag(&[0.8, 0.2])];
        let cb = Codebook::from_codewords(vec![vec![0, 0, 0]], 1, 0.1).unwrap();
        let st = quantum_codeword(&cb, 0, &outs).unwrap();
        let params = TypicalSetParams::new(3, 0.4, 0.1).unwrap();
        let s_bar = crate::quantum::von_neumann_entropy(&outs[0]);
        let idx = codeword_typical_indices(std::slice::from_ref(&st), s_bar, &params).unwrap();
        let typ = codeword_typical_subspaces(std::slice::from_ref(&st), s_bar, &params).unwrap();
        let pi = Subspace::full(8);
        let povm = build_sequential_povm(&cb, &pi, &typ).unwrap();
        let b = proj_lem_bound(&povm, 0, &st, st.compressed_factor(&idx[0]).as_ref(), &pi).unwrap();
        let mass: f64 = idx[0].iter().map(|&k| st.spectral().eigenvalue(k)).sum();
        assert!((b.lhs - mass).abs() < 1e-12);
        assert!((b.rhs - mass * mass).abs() < 1e-12);
        assert!(b.holds(1e-8));
    }
}
