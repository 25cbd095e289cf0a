//! Born-rule measurement and the random-coding error experiment.

use faer::complex_native::c64;
use faer::Mat;
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::codec::{
    build_sequential_povm, codeword_typical_subspaces, generate_codebook_sample, quantum_codeword, Codebook,
    Decoded, ProductState, SequentialPovm,
};
use crate::error::{checked_pow, Error, ModuleContext, Result};
use crate::linalg;
use crate::quantum::{
    holevo_of_outputs, mean_entropy, same_dim, CqSource, DensityMatrix, QuantumChannel, Subspace,
};
use crate::rng::{self, sub_index, Purpose};
use crate::stats;
use crate::typicality::{universal_typical_subspace, TypicalSetParams};

/// Probabilities below this do not get a post-measurement state.
pub const TAU_PROB: f64 = 1e-12;

/// A sampled outcome with its probability and the collapsed state.
#[derive(Debug, Clone)]
pub struct MeasurementOutcome {
    /// Outcome position; `povm.len()` is the error outcome.
    pub index: usize,
    pub decoded: Decoded,
    pub probability: f64,
    pub post_state: Option<DensityMatrix>,
}

/// `Tr(Π̃_j ρ Π̃_j)` for every outcome, error part last.
pub fn outcome_distribution(povm: &SequentialPovm, rho: &DensityMatrix) -> Result<Vec<f64>> {
    same_dim("measure", povm.ambient_dim(), rho.dim())?;
    (0..=povm.len()).map(|j| povm.outcome_subspace(j)?.project_trace(rho.operator())).collect()
}

/// Outcome probabilities of a pure state `ψ` (need not be normalized).
pub fn pure_outcome_distribution(povm: &SequentialPovm, psi: &[c64]) -> Result<Vec<f64>> {
    same_dim("measure", povm.ambient_dim(), psi.len())?;
    let col = Mat::from_fn(psi.len(), 1, |i, _| psi[i]);
    (0..=povm.len())
        .map(|j| {
            let v = povm.outcome_subspace(j)?.basis();
            if v.ncols() == 0 {
                return Ok(0.0);
            }
            Ok(linalg::frobenius_sqr((v.adjoint() * &col).as_ref()))
        })
        .collect()
}

/// Index drawn from `weights` (renormalized).
pub fn sample_index<R: Rng>(weights: &[f64], rng: &mut R) -> usize {
    let total: f64 = weights.iter().map(|w| w.max(0.0)).sum();
    let u = rng.gen::<f64>() * total;
    let mut acc = 0.0;
    let mut last = 0;
    for (i, &w) in weights.iter().enumerate() {
        if w <= 0.0 {
            continue;
        }
        acc += w;
        last = i;
        if u < acc {
            return i;
        }
    }
    last
}

/// Samples an outcome with probability `Tr(Π̃_j ρ Π̃_j)` and collapses `ρ`.
pub fn measure<R: Rng>(
    povm: &SequentialPovm,
    rho: &DensityMatrix,
    rng: &mut R,
) -> Result<MeasurementOutcome> {
    let probs = outcome_distribution(povm, rho)?;
    let index = sample_index(&probs, rng);
    let probability = probs[index].clamp(0.0, 1.0);
    let post_state = if probability > TAU_PROB {
        let v = povm.outcome_subspace(index)?.basis();
        let compressed = v.adjoint() * rho.matrix() * v;
        let back = v * &compressed * v.adjoint();
        let scaled = faer::scale(linalg::cx(1.0 / probability, 0.0)) * &back;
        Some(DensityMatrix::from_trusted(linalg::hermitian_part(scaled.as_ref())))
    } else {
        None
    };
    Ok(MeasurementOutcome { index, decoded: povm.outcome_label(index), probability, post_state })
}

/// Pure-state measurement: outcome index and its probability.
pub fn measure_pure<R: Rng>(povm: &SequentialPovm, psi: &[c64], rng: &mut R) -> Result<(usize, f64)> {
    let probs = pure_outcome_distribution(povm, psi)?;
    let index = sample_index(&probs, rng);
    Ok((index, probs[index]))
}

/// `Tr(Π̃_i ρ_{α_i} Π̃_i)`, exact.
pub fn success_probability(povm: &SequentialPovm, i: usize, state: &ProductState) -> Result<f64> {
    let part = povm.part(i)?;
    same_dim("success_probability", povm.ambient_dim(), state.ambient_dim())?;
    Ok(state.sandwich_trace(part.basis()).clamp(0.0, 1.0))
}

/// Which projector plays `Π` in the sequential decoder.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DecoderProjector {
    /// Universal typical subspace of the average output state.
    #[default]
    Typical,
    /// Identity.
    Full,
}

/// Default `ε`: `χ − R − 0.05`, at least `1e-3`.
pub fn default_epsilon(chi: f64, rate: f64) -> f64 {
    (chi - rate - 0.05).max(1e-3)
}

/// Everything the single-channel decoder needs besides the codebook.
#[derive(Debug, Clone)]
pub struct DecoderSetup {
    pub outputs: Vec<DensityMatrix>,
    pub prior: Vec<f64>,
    pub chi: f64,
    /// `Σ p_j S(ρ_j)`.
    pub s_bar: f64,
    pub params: TypicalSetParams,
    pub pi: Subspace,
}

impl DecoderSetup {
    pub fn new(
        source: &CqSource,
        channel: &QuantumChannel,
        params: TypicalSetParams,
        decoder: DecoderProjector,
    ) -> Result<Self> {
        let outputs = source.outputs(channel)?;
        Self::from_outputs(outputs, source.prior().to_vec(), params, decoder)
    }

    pub fn from_outputs(
        outputs: Vec<DensityMatrix>,
        prior: Vec<f64>,
        params: TypicalSetParams,
        decoder: DecoderProjector,
    ) -> Result<Self> {
        let d = outputs[0].dim();
        let dim = checked_pow(d, params.n, params.max_dim)?;
        let chi = holevo_of_outputs(&prior, &outputs);
        let s_bar = mean_entropy(&prior, &outputs);
        let pi = match decoder {
            DecoderProjector::Full => Subspace::full(dim),
            DecoderProjector::Typical => {
                let rho = DensityMatrix::mixture(&prior, &outputs)?;
                universal_typical_subspace(&rho, &params)?
            }
        };
        Ok(Self { outputs, prior, chi, s_bar, params, pi })
    }

    pub fn codeword_states(&self, cb: &Codebook) -> Result<Vec<ProductState>> {
        (0..cb.len()).map(|i| quantum_codeword(cb, i, &self.outputs)).collect()
    }

    pub fn typical_subspaces(&self, states: &[ProductState]) -> Result<Vec<Subspace>> {
        codeword_typical_subspaces(states, self.s_bar, &self.params)
    }

    /// Codeword states and the sequential decoder for `cb`.
    pub fn decoder(&self, cb: &Codebook) -> Result<(Vec<ProductState>, SequentialPovm)> {
        let states = self.codeword_states(cb)?;
        let typ = self.typical_subspaces(&states)?;
        let povm = build_sequential_povm(cb, &self.pi, &typ)?;
        Ok((states, povm))
    }
}

/// Inputs of the random-coding experiment.
#[derive(Debug, Clone)]
pub struct ErrorExperiment {
    pub source: CqSource,
    pub channel: QuantumChannel,
    pub n: usize,
    pub rate: f64,
    pub delta: f64,
    /// `None` selects [`default_epsilon`].
    pub epsilon: Option<f64>,
    /// Sampled transmissions per codebook, used to cross-check the exact value.
    pub trials: usize,
    pub codebook_samples: usize,
    pub seed: u64,
    pub max_dim: usize,
    pub decoder: DecoderProjector,
}

impl ErrorExperiment {
    pub fn new(source: CqSource, channel: QuantumChannel, n: usize, rate: f64) -> Self {
        Self {
            source,
            channel,
            n,
            rate,
            delta: 0.5,
            epsilon: None,
            trials: 0,
            codebook_samples: 20,
            seed: 0,
            max_dim: crate::DEFAULT_MAX_DIM,
            decoder: DecoderProjector::Typical,
        }
    }
}

/// Aggregate of an error experiment.
#[derive(Debug, Clone, Serialize)]
pub struct ErrorExperimentResult {
    pub n: usize,
    pub rate: f64,
    pub m: usize,
    pub trials: usize,
    pub codebook_samples: usize,
    pub p_err_mean: f64,
    pub p_err_ci95: f64,
    pub chi: f64,
    pub seed: u64,
    pub delta: f64,
    pub epsilon: f64,
    /// Exact average error of each sampled codebook.
    pub per_codebook: Vec<f64>,
    /// Error rate over sampled transmissions, when `trials > 0`.
    pub sampled_p_err: Option<f64>,
    pub decoder_rank: usize,
}

/// Exact average error `1 − (1/M) Σ_i Tr(Π̃_i ρ_{α_i} Π̃_i)` of one codebook.
pub fn codebook_error(povm: &SequentialPovm, states: &[ProductState]) -> Result<f64> {
    let mut total = 0.0;
    for (i, st) in states.iter().enumerate() {
        total += success_probability(povm, i, st)?;
    }
    Ok((1.0 - total / states.len() as f64).clamp(0.0, 1.0))
}

/// Number of sampled transmissions decoded wrongly.
pub fn sampled_errors(
    povm: &SequentialPovm,
    states: &[ProductState],
    trials: usize,
    seed: u64,
    sample: u64,
) -> Result<usize> {
    let mut errors = 0;
    for t in 0..trials as u64 {
        let id = sub_index(sample, t);
        let msg = rng::stream(seed, Purpose::Message, id).gen_range(0..states.len());
        let psi = states[msg].sample_component(&mut rng::stream(seed, Purpose::Channel, id));
        let (index, _) = measure_pure(povm, &psi, &mut rng::stream(seed, Purpose::Measurement, id))?;
        if povm.outcome_label(index) != Decoded::Message(msg) {
            errors += 1;
        }
    }
    Ok(errors)
}

pub fn run_error_experiment(exp: &ErrorExperiment) -> Result<ErrorExperimentResult> {
    run_inner(exp).module("simulator")
}

fn run_inner(exp: &ErrorExperiment) -> Result<ErrorExperimentResult> {
    if exp.codebook_samples == 0 {
        return Err(Error::param("codebook_samples", "must be at least 1"));
    }
    let m = crate::codec::message_count(exp.n, exp.rate)?;
    let outputs = exp.source.outputs(&exp.channel)?;
    let chi = holevo_of_outputs(exp.source.prior(), &outputs);
    let epsilon = exp.epsilon.unwrap_or_else(|| default_epsilon(chi, exp.rate));
    let params = TypicalSetParams::new(exp.n, exp.delta, epsilon)?.with_max_dim(exp.max_dim);
    let setup = DecoderSetup::from_outputs(outputs, exp.source.prior().to_vec(), params, exp.decoder)?;

    let rows: Vec<(f64, usize)> = (0..exp.codebook_samples as u64)
        .into_par_iter()
        .map(|s| -> Result<(f64, usize)> {
            let cb = generate_codebook_sample(exp.source.prior(), exp.n, exp.rate, exp.seed, s)?;
            let (states, povm) = setup.decoder(&cb)?;
            let err = codebook_error(&povm, &states)?;
            let sampled = sampled_errors(&povm, &states, exp.trials, exp.seed, s)?;
            Ok((err, sampled))
        })
        .collect::<Result<_>>()?;

    let per_codebook: Vec<f64> = rows.iter().map(|r| r.0).collect();
    let sampled_total: usize = rows.iter().map(|r| r.1).sum();
    let sampled_p_err =
        (exp.trials > 0).then(|| sampled_total as f64 / (exp.trials * exp.codebook_samples) as f64);
    Ok(ErrorExperimentResult {
        n: exp.n,
        rate: exp.rate,
        m,
        trials: exp.trials,
        codebook_samples: exp.codebook_samples,
        p_err_mean: stats::mean(&per_codebook),
        p_err_ci95: stats::ci95(&per_codebook),
        chi,
        seed: exp.seed,
        delta: exp.delta,
        epsilon,
        per_codebook,
        sampled_p_err,
        decoder_rank: setup.pi.rank(),
    })
}
