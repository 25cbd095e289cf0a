//! Decoding by a binary tree of two-outcome measurements, and classical
//! memoryless channels run through the quantum decoder.

use std::time::Instant;

use faer::complex_native::c64;
use faer::{Mat, MatRef};
use rand::distributions::{Distribution, WeightedIndex};
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::codec::{
    generate_codebook_sample, message_count, Codebook, Decoded, ProductState, SequentialPovm,
};
use crate::error::{checked_pow, Error, ModuleContext, Result};
use crate::linalg::{self, CMat};
use crate::quantum::{
    same_dim, shannon_entropy, spectral_decomposition, CqSource, DensityMatrix, QuantumChannel, Subspace,
    TAU_PRIOR,
};
use crate::rng::{self, sub_index, Purpose};
use crate::simulator::{codebook_error, success_probability, DecoderProjector, DecoderSetup};
use crate::stats;
use crate::typicality::TypicalSetParams;

/// A decoder whose outcome count is a power of two.
///
/// Outcomes `0..M` are messages, the last outcome is the error part, and the
/// zero-rank padding sits in between.
#[derive(Debug, Clone)]
pub struct PaddedPovm {
    outcomes: Vec<Subspace>,
    messages: usize,
}

impl PaddedPovm {
    pub fn len(&self) -> usize {
        self.outcomes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.outcomes.is_empty()
    }

    pub fn messages(&self) -> usize {
        self.messages
    }

    pub fn padding(&self) -> usize {
        self.outcomes.len() - self.messages - 1
    }

    pub fn depth(&self) -> usize {
        self.outcomes.len().trailing_zeros() as usize
    }

    pub fn ambient_dim(&self) -> usize {
        self.outcomes[0].ambient_dim()
    }

    pub fn outcomes(&self) -> &[Subspace] {
        &self.outcomes
    }

    /// `None` for padding outcomes.
    pub fn label(&self, outcome: usize) -> Option<Decoded> {
        if outcome < self.messages {
            Some(Decoded::Message(outcome))
        } else if outcome + 1 == self.outcomes.len() {
            Some(Decoded::Error)
        } else {
            None
        }
    }

    /// Outcome position of a message or the error label.
    pub fn position(&self, label: Decoded) -> Result<usize> {
        match label {
            Decoded::Message(i) if i < self.messages => Ok(i),
            Decoded::Message(i) => {
                Err(Error::IndexOutOfRange { what: "message", index: i, limit: self.messages })
            }
            Decoded::Error => Ok(self.outcomes.len() - 1),
        }
    }

    /// `D_{lo,hi}`: direct sum of outcomes `lo..hi` (exclusive end).
    pub fn aggregate(&self, lo: usize, hi: usize) -> Result<AggregatedProjector> {
        if lo >= hi || hi > self.outcomes.len() {
            return Err(Error::Precondition(format!(
                "invalid outcome range {lo}..{hi} for {} outcomes",
                self.outcomes.len()
            )));
        }
        let mut basis = Mat::<c64>::zeros(self.ambient_dim(), 0);
        for o in &self.outcomes[lo..hi] {
            basis = linalg::hstack(basis.as_ref(), o.basis());
        }
        Ok(AggregatedProjector { lo, hi, subspace: Subspace::from_trusted(basis) })
    }
}

/// Direct sum `Π̃_lo ⊕ … ⊕ Π̃_{hi−1}`.
#[derive(Debug, Clone)]
pub struct AggregatedProjector {
    pub lo: usize,
    pub hi: usize,
    pub subspace: Subspace,
}

/// Inserts zero-rank outcomes before the error part until the outcome count
/// `M + 1` is a power of two.
pub fn pad_povm(povm: &SequentialPovm) -> PaddedPovm {
    let m = povm.len();
    let total = (m + 1).next_power_of_two();
    let d = povm.ambient_dim();
    let mut outcomes: Vec<Subspace> = povm.parts().to_vec();
    outcomes.extend((0..total - m - 1).map(|_| Subspace::zero(d)));
    outcomes.push(povm.error_part().clone());
    PaddedPovm { outcomes, messages: m }
}

/// Result of one bisection decode.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BisectionOutcome {
    pub decoded: Decoded,
    /// Outcome position in binary, most significant bit first.
    pub bits: Vec<u8>,
    pub n_measurements: usize,
}

fn factor_of(rho: &DensityMatrix) -> CMat {
    let sd = spectral_decomposition(rho.operator());
    let v = &sd.eigenvectors;
    Mat::from_fn(v.nrows(), v.ncols(), |i, j| v.read(i, j) * sd.eigenvalues[j].max(0.0).sqrt())
}

/// Bisection on a state given by a factor `X` with `ρ ∝ X X†`.
pub fn bisect_decode_factor<R: Rng>(
    padded: &PaddedPovm,
    x: MatRef<'_, c64>,
    rng: &mut R,
) -> Result<BisectionOutcome> {
    same_dim("bisect_decode", padded.ambient_dim(), x.nrows())?;
    let mut state = x.to_owned();
    let (mut lo, mut hi) = (0, padded.len());
    let mut bits = Vec::with_capacity(padded.depth());
    while hi - lo > 1 {
        let mid = (lo + hi) / 2;
        let left = padded.aggregate(lo, mid)?;
        let total = linalg::frobenius_sqr(state.as_ref());
        let kept = left.subspace.project(state.as_ref());
        let p_left = if total > 0.0 { linalg::frobenius_sqr(kept.as_ref()) / total } else { 0.0 };
        if rng.gen::<f64>() < p_left {
            bits.push(0);
            state = kept;
            hi = mid;
        } else {
            bits.push(1);
            state = left.subspace.project_complement(state.as_ref());
            lo = mid;
        }
    }
    let decoded = padded
        .label(lo)
        .ok_or_else(|| Error::Precondition(format!("bisection landed on padding outcome {lo}")))?;
    Ok(BisectionOutcome { decoded, n_measurements: bits.len(), bits })
}

/// Halves the outcome interval with two-outcome measurements `{D_lo-half, D_hi-half}`,
/// collapsing the state after each answer.
pub fn bisect_decode<R: Rng>(
    padded: &PaddedPovm,
    rho: &DensityMatrix,
    rng: &mut R,
) -> Result<BisectionOutcome> {
    same_dim("bisect_decode", padded.ambient_dim(), rho.dim())?;
    bisect_decode_factor(padded, factor_of(rho).as_ref(), rng)
}

/// Product of the conditional probabilities along the tree path to outcome
/// `i` (which may be the error label).
pub fn cascade_success_probability(padded: &PaddedPovm, label: Decoded, rho: &DensityMatrix) -> Result<f64> {
    same_dim("cascade_success_probability", padded.ambient_dim(), rho.dim())?;
    cascade_path_probability(padded, padded.position(label)?, factor_of(rho).as_ref())
}

pub fn cascade_path_probability(padded: &PaddedPovm, target: usize, x: MatRef<'_, c64>) -> Result<f64> {
    let mut state = x.to_owned();
    let (mut lo, mut hi) = (0, padded.len());
    let mut prob = 1.0;
    while hi - lo > 1 {
        let mid = (lo + hi) / 2;
        let left = padded.aggregate(lo, mid)?;
        let total = linalg::frobenius_sqr(state.as_ref());
        if total <= 0.0 {
            return Ok(0.0);
        }
        let next = if target < mid {
            hi = mid;
            left.subspace.project(state.as_ref())
        } else {
            lo = mid;
            left.subspace.project_complement(state.as_ref())
        };
        prob *= linalg::frobenius_sqr(next.as_ref()) / total;
        state = next;
    }
    Ok(prob * linalg::frobenius_sqr(x))
}

/// Classical channel `W(y|x)` with an input prior.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassicalDmc {
    w: Vec<Vec<f64>>,
    prior: Vec<f64>,
}

impl ClassicalDmc {
    pub fn new(w: Vec<Vec<f64>>, prior: Vec<f64>) -> Result<Self> {
        let d = w.first().map(|r| r.len()).unwrap_or(0);
        if d == 0 {
            return Err(Error::param("W", "need at least one row and one column"));
        }
        for (x, row) in w.iter().enumerate() {
            if row.len() != d {
                return Err(Error::param("W", format!("row {x} has {} entries, expected {d}", row.len())));
            }
            if row.iter().any(|v| !v.is_finite() || *v < 0.0) {
                return Err(Error::param("W", format!("row {x} has a negative entry")));
            }
            let s: f64 = row.iter().sum();
            if (s - 1.0).abs() > TAU_PRIOR {
                return Err(Error::param("W", format!("row {x} sums to {s}")));
            }
        }
        if prior.len() != w.len() {
            return Err(Error::param("prior", format!("has {} entries for {} inputs", prior.len(), w.len())));
        }
        crate::quantum::validate_prior(&prior)?;
        Ok(Self { w, prior })
    }

    pub fn binary_symmetric(flip: f64) -> Result<Self> {
        Self::new(vec![vec![1.0 - flip, flip], vec![flip, 1.0 - flip]], vec![0.5, 0.5])
    }

    pub fn inputs(&self) -> usize {
        self.w.len()
    }

    pub fn outputs(&self) -> usize {
        self.w[0].len()
    }

    pub fn row(&self, x: usize) -> &[f64] {
        &self.w[x]
    }

    pub fn prior(&self) -> &[f64] {
        &self.prior
    }

    /// Output distribution `(PW)(y)`.
    pub fn output_distribution(&self) -> Vec<f64> {
        (0..self.outputs()).map(|y| self.w.iter().zip(&self.prior).map(|(r, p)| p * r[y]).sum()).collect()
    }

    /// `I(P, W) = H(PW) − Σ_x P(x) H(W(·|x))`.
    pub fn mutual_information(&self) -> f64 {
        let cond: f64 = self.w.iter().zip(&self.prior).map(|(r, p)| p * shannon_entropy(r)).sum();
        shannon_entropy(&self.output_distribution()) - cond
    }

    /// `W^n(y|α)`.
    pub fn sequence_probability(&self, y: &[usize], alpha: &[usize]) -> f64 {
        y.iter().zip(alpha).map(|(&b, &a)| self.w[a][b]).product()
    }

    pub fn sample_output<R: Rng>(&self, alpha: &[usize], rng: &mut R) -> Vec<usize> {
        alpha.iter().map(|&a| WeightedIndex::new(&self.w[a]).expect("validated row").sample(rng)).collect()
    }
}

/// `ρ_x = diag(W(·|x))` with the prior of `dmc`, sent through the identity.
pub fn embed_dmc(dmc: &ClassicalDmc) -> Result<(CqSource, QuantumChannel)> {
    let states =
        (0..dmc.inputs()).map(|x| DensityMatrix::diagonal(dmc.row(x))).collect::<Result<Vec<_>>>()?;
    Ok((CqSource::new(states, dmc.prior().to_vec())?, QuantumChannel::identity(dmc.outputs())))
}

/// `μ_y = E_{y_1 y_1} ⊗ … ⊗ E_{y_n y_n}`.
pub fn encode_output_sequence(y: &[usize], d: usize) -> Result<ProductState> {
    if y.is_empty() {
        return Err(Error::param("y", "empty output sequence"));
    }
    let factors = y.iter().map(|&b| DensityMatrix::basis(d, b)).collect::<Result<Vec<_>>>()?;
    ProductState::new(factors)
}

/// Row index of `μ_y`'s basis vector.
pub fn output_index(y: &[usize], d: usize) -> usize {
    linalg::from_digits(y, d)
}

/// `Σ_y W^n(y|α) μ_y`, by enumerating every output sequence.
pub fn expected_output_state(dmc: &ClassicalDmc, alpha: &[usize], max_dim: usize) -> Result<DensityMatrix> {
    let d = dmc.outputs();
    let dim = checked_pow(d, alpha.len(), max_dim)?;
    let mut diag = vec![0.0; dim];
    for (k, slot) in diag.iter_mut().enumerate() {
        let y = linalg::digits(k, d, alpha.len());
        *slot = dmc.sequence_probability(&y, alpha);
    }
    DensityMatrix::diagonal(&diag)
}

/// Wall-clock split of a decode experiment.
#[derive(Debug, Clone, Copy, Default, Serialize)]
pub struct TimingProfile {
    pub build_seconds: f64,
    pub decode_seconds: f64,
    pub decodes: usize,
}

/// Output of [`classical_decode_experiment`].
#[derive(Debug, Clone, Serialize)]
pub struct ClassicalDecodeResult {
    pub n: usize,
    pub rate: f64,
    pub m: usize,
    pub trials: usize,
    pub codebook_samples: usize,
    pub seed: u64,
    /// Holevo quantity of the embedding, equal to `I(P, W)`.
    pub chi: f64,
    pub mutual_information: f64,
    /// Error rate of the sampled bisection decodes.
    pub p_err: f64,
    pub p_err_ci95: f64,
    /// Same codebooks, messages and channel draws, decoded classically.
    pub classical_p_err: f64,
    pub classical_p_err_ci95: f64,
    /// Exact average error of the quantum decoder.
    pub exact_p_err: f64,
    pub exact_p_err_ci95: f64,
    /// Binary measurements per decoded block.
    pub n_measurements: usize,
    pub timing: TimingProfile,
}

/// Inputs of [`classical_decode_experiment`].
#[derive(Debug, Clone)]
pub struct ClassicalDecodeExperiment {
    pub dmc: ClassicalDmc,
    pub n: usize,
    pub rate: f64,
    pub delta: f64,
    pub trials: usize,
    pub codebook_samples: usize,
    pub seed: u64,
    pub max_dim: usize,
}

impl ClassicalDecodeExperiment {
    pub fn new(dmc: ClassicalDmc, n: usize, rate: f64) -> Self {
        Self {
            dmc,
            n,
            rate,
            delta: 0.5,
            trials: 200,
            codebook_samples: 20,
            seed: 0,
            max_dim: crate::DEFAULT_MAX_DIM,
        }
    }
}

/// Typical-set decoder on classical sequences: the first message whose
/// codeword makes `y` conditionally typical, provided `y` is typical for the
/// output distribution.
pub fn classical_typical_decode(
    dmc: &ClassicalDmc,
    cb: &Codebook,
    y: &[usize],
    params: &TypicalSetParams,
) -> Result<Decoded> {
    let n = y.len() as f64;
    let py = dmc.output_distribution();
    if !crate::typicality::is_p_typical(y, &py, params)? {
        return Ok(Decoded::Error);
    }
    let s_bar: f64 = (0..dmc.inputs()).map(|x| dmc.prior()[x] * shannon_entropy(dmc.row(x))).sum();
    let (lo, hi) = (-n * (s_bar + params.delta), -n * (s_bar - params.delta));
    for (i, alpha) in cb.codewords.iter().enumerate() {
        let l: f64 = y.iter().zip(alpha).map(|(&b, &a)| dmc.row(a)[b].log2()).sum();
        if l.is_finite() && l >= lo - 1e-9 && l <= hi + 1e-9 {
            return Ok(Decoded::Message(i));
        }
    }
    Ok(Decoded::Error)
}

/// Sends random messages through `W`, encodes the received sequence as
/// `μ_y` and decodes it with the bisection cascade.
pub fn classical_decode_experiment(exp: &ClassicalDecodeExperiment) -> Result<ClassicalDecodeResult> {
    classical_inner(exp).module("cascade")
}

struct CodebookRow {
    quantum_errors: usize,
    classical_errors: usize,
    exact: f64,
    depth: usize,
    build: f64,
    decode: f64,
}

fn classical_inner(exp: &ClassicalDecodeExperiment) -> Result<ClassicalDecodeResult> {
    if exp.codebook_samples == 0 {
        return Err(Error::param("codebook_samples", "must be at least 1"));
    }
    let m = message_count(exp.n, exp.rate)?;
    let (source, channel) = embed_dmc(&exp.dmc)?;
    let d = exp.dmc.outputs();
    checked_pow(d, exp.n, exp.max_dim)?;
    let params = TypicalSetParams::new(exp.n, exp.delta, 0.1)?.with_max_dim(exp.max_dim);
    let setup = DecoderSetup::new(&source, &channel, params, DecoderProjector::Typical)?;

    let rows: Vec<CodebookRow> = (0..exp.codebook_samples as u64)
        .into_par_iter()
        .map(|s| -> Result<CodebookRow> {
            let start = Instant::now();
            let cb = generate_codebook_sample(source.prior(), exp.n, exp.rate, exp.seed, s)?;
            let (states, povm) = setup.decoder(&cb)?;
            let padded = pad_povm(&povm);
            let exact = codebook_error(&povm, &states)?;
            let build = start.elapsed().as_secs_f64();

            let start = Instant::now();
            let dim = padded.ambient_dim();
            let (mut q_err, mut c_err) = (0, 0);
            for t in 0..exp.trials as u64 {
                let id = sub_index(s, t);
                let msg = rng::stream(exp.seed, Purpose::Message, id).gen_range(0..m);
                let y = exp
                    .dmc
                    .sample_output(&cb.codewords[msg], &mut rng::stream(exp.seed, Purpose::Channel, id));
                let idx = output_index(&y, d);
                let e =
                    Mat::from_fn(dim, 1, |r, _| if r == idx { linalg::cx(1.0, 0.0) } else { linalg::zero() });
                let out = bisect_decode_factor(
                    &padded,
                    e.as_ref(),
                    &mut rng::stream(exp.seed, Purpose::Measurement, id),
                )?;
                if out.decoded != Decoded::Message(msg) {
                    q_err += 1;
                }
                if classical_typical_decode(&exp.dmc, &cb, &y, &params)? != Decoded::Message(msg) {
                    c_err += 1;
                }
            }
            Ok(CodebookRow {
                quantum_errors: q_err,
                classical_errors: c_err,
                exact,
                depth: padded.depth(),
                build,
                decode: start.elapsed().as_secs_f64(),
            })
        })
        .collect::<Result<_>>()?;

    let per = |f: fn(&CodebookRow) -> usize| -> Vec<f64> {
        rows.iter().map(|r| if exp.trials == 0 { 0.0 } else { f(r) as f64 / exp.trials as f64 }).collect()
    };
    let q = per(|r| r.quantum_errors);
    let c = per(|r| r.classical_errors);
    let exact: Vec<f64> = rows.iter().map(|r| r.exact).collect();
    Ok(ClassicalDecodeResult {
        n: exp.n,
        rate: exp.rate,
        m,
        trials: exp.trials,
        codebook_samples: exp.codebook_samples,
        seed: exp.seed,
        chi: setup.chi,
        mutual_information: exp.dmc.mutual_information(),
        p_err: stats::mean(&q),
        p_err_ci95: stats::ci95(&q),
        classical_p_err: stats::mean(&c),
        classical_p_err_ci95: stats::ci95(&c),
        exact_p_err: stats::mean(&exact),
        exact_p_err_ci95: stats::ci95(&exact),
        n_measurements: rows[0].depth,
        timing: TimingProfile {
            build_seconds: rows.iter().map(|r| r.build).sum(),
            decode_seconds: rows.iter().map(|r| r.decode).sum(),
            decodes: exp.trials * exp.codebook_samples,
        },
    })
}

/// Comparison of bisection and direct decoding on one setup.
#[derive(Debug, Clone, Serialize)]
pub struct CascadeComparison {
    pub n: usize,
    pub rate: f64,
    pub m: usize,
    pub codebook_samples: usize,
    pub chi: f64,
    /// Largest `|cascade − direct|` success probability over all messages.
    pub max_deviation: f64,
    pub p_err_mean: f64,
    pub p_err_ci95: f64,
    pub n_measurements: usize,
}

/// Checks the bisection cascade against direct measurement for random
/// codebooks of a cq source.
pub fn run_cascade_experiment(
    source: &CqSource,
    channel: &QuantumChannel,
    params: TypicalSetParams,
    rate: f64,
    codebook_samples: usize,
    seed: u64,
) -> Result<CascadeComparison> {
    let m = message_count(params.n, rate)?;
    let setup = DecoderSetup::new(source, channel, params, DecoderProjector::Typical).module("cascade")?;
    let rows: Vec<(f64, f64, usize)> = (0..codebook_samples as u64)
        .into_par_iter()
        .map(|s| -> Result<(f64, f64, usize)> {
            let cb = generate_codebook_sample(source.prior(), params.n, rate, seed, s)?;
            let (states, povm) = setup.decoder(&cb)?;
            let padded = pad_povm(&povm);
            let mut worst: f64 = 0.0;
            let mut success = 0.0;
            for (i, st) in states.iter().enumerate() {
                let direct = success_probability(&povm, i, st)?;
                let x = product_factor(st);
                let via = cascade_path_probability(&padded, i, x.as_ref())?;
                worst = worst.max((via - direct).abs());
                success += via;
            }
            Ok((worst, 1.0 - success / m as f64, padded.depth()))
        })
        .collect::<Result<_>>()
        .module("cascade")?;
    let errs: Vec<f64> = rows.iter().map(|r| r.1).collect();
    Ok(CascadeComparison {
        n: params.n,
        rate,
        m,
        codebook_samples,
        chi: setup.chi,
        max_deviation: rows.iter().map(|r| r.0).fold(0.0, f64::max),
        p_err_mean: stats::mean(&errs),
        p_err_ci95: stats::ci95(&errs),
        n_measurements: rows.first().map(|r| r.2).unwrap_or(0),
    })
}

/// Factor `X` with `X X† = ρ_1 ⊗ … ⊗ ρ_n`, dropping zero-weight columns.
pub fn product_factor(state: &ProductState) -> CMat {
    let sp = state.spectral();
    let dim = state.ambient_dim();
    let keep: Vec<usize> = (0..dim).filter(|&k| sp.eigenvalue(k) > 0.0).collect();
    state.compressed_factor(&keep)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn povm_with(m: usize) -> SequentialPovm {
        let parts = (0..m).map(|i| Subspace::coordinate(m + 2, &[i]).unwrap()).collect();
        SequentialPovm::from_parts(parts).unwrap()
    }

    #[test]
    fn padding_sizes() {
        assert_eq!(pad_povm(&povm_with(3)).padding(), 0);
        assert_eq!(pad_povm(&povm_with(2)).padding(), 1);
        assert_eq!(pad_povm(&povm_with(4)).padding(), 3);
        assert_eq!(pad_povm(&povm_with(15)).depth(), 4);
    }

    #[test]
    fn basis_states_decode_deterministically() {
        let padded = pad_povm(&povm_with(3));
        let mut rng = rng::stream(0, Purpose::Test, 0);
        let first = DensityMatrix::basis(5, 0).unwrap();
        let out = bisect_decode(&padded, &first, &mut rng).unwrap();
        assert_eq!(out.decoded, Decoded::Message(0));
        assert_eq!(out.bits, vec![0, 0]);
        assert_eq!(out.n_measurements, 2);
        let err = DensityMatrix::basis(5, 4).unwrap();
        let out = bisect_decode(&padded, &err, &mut rng).unwrap();
        assert_eq!(out.decoded, Decoded::Error);
        assert_eq!(out.bits, vec![1, 1]);
    }

    #[test]
    fn bsc_embedding_matches_mutual_information() {
        let dmc = ClassicalDmc::binary_symmetric(0.1).unwrap();
        let (src, ch) = embed_dmc(&dmc).unwrap();
        let chi = crate::quantum::holevo_quantity(&src, &ch).unwrap();
        let h = -(0.1f64 * 0.1f64.log2() + 0.9 * 0.9f64.log2());
        assert!((chi - (1.0 - h)).abs() < 1e-12);
        assert!((dmc.mutual_information() - (1.0 - h)).abs() < 1e-12);

        let noiseless = ClassicalDmc::new(vec![vec![1.0, 0.0], vec![0.0, 1.0]], vec![0.3, 0.7]).unwrap();
        let (src, ch) = embed_dmc(&noiseless).unwrap();
        let chi = crate::quantum::holevo_quantity(&src, &ch).unwrap();
        assert!((chi - shannon_entropy(&[0.3, 0.7])).abs() < 1e-12);

        let useless = ClassicalDmc::new(vec![vec![0.4, 0.6], vec![0.4, 0.6]], vec![0.5, 0.5]).unwrap();
        let (src, ch) = embed_dmc(&useless).unwrap();
        assert!(crate::quantum::holevo_quantity(&src, &ch).unwrap().abs() < 1e-12);
    }

    #[test]
    fn output_encoding_is_a_basis_state() {
        let st = encode_output_sequence(&[0, 0, 0], 2).unwrap();
        let dense = st.to_density(64).unwrap();
        assert_eq!(dense.matrix().read(0, 0).re, 1.0);
        assert!((dense.operator().trace() - 1.0).abs() < 1e-15);
        assert!(encode_output_sequence(&[0, 2], 2).is_err());
    }

    #[test]
    fn dmc_validation() {
        assert!(ClassicalDmc::new(vec![vec![0.5, 0.4]], vec![1.0]).is_err());
        assert!(ClassicalDmc::new(vec![vec![0.5, 0.5]], vec![0.5, 0.5]).is_err());
    }
}
