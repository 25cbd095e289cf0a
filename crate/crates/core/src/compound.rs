//! Finite compound channels: the adversary picks one channel of a known set
//! after the codebook is fixed. Decoding first identifies the average output
//! state with a cascade of binary typicality tests, then decodes the message
//! with a sequential decoder pushed through the cascade's projector chain.

use faer::complex_native::c64;
use faer::{Mat, MatRef};
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::codec::{
    build_sequential_povm_with, generate_codebook_sample, message_count, quantum_codeword, Codebook,
    ProductState, SequentialPovm,
};
use crate::error::{checked_pow, Error, ModuleContext, Result};
use crate::linalg::{self, CMat};
use crate::quantum::{
    holevo_of_outputs, holevo_quantity, mean_entropy, relative_entropy, same_dim, CqSource, DensityMatrix,
    OperatorMap, QuantumChannel, RelativeEntropy, Subspace,
};
use crate::rng::{self, sub_index, Purpose};
use crate::simulator::{sample_index, TAU_PROB};
use crate::stats;
use crate::typicality::{
    conditional_typical_subspace, relative_typical_subspace, support_subspace, universal_typical_subspace,
    TypicalSetParams,
};

/// Outputs closer than this in trace distance are treated as one state.
pub const TAU_DEDUP: f64 = 1e-9;

/// Largest alphabet accepted by the prior grid search.
pub const MAX_GRID_ALPHABET: usize = 4;

/// Nonempty set of channels with a common input dimension.
#[derive(Debug, Clone)]
pub struct CompoundChannelSet {
    channels: Vec<QuantumChannel>,
}

impl CompoundChannelSet {
    pub fn new(channels: Vec<QuantumChannel>) -> Result<Self> {
        let first = channels.first().ok_or_else(|| Error::param("channels", "need at least one channel"))?;
        for ch in &channels {
            same_dim("compound input dim", first.input_dim(), ch.input_dim())?;
            same_dim("compound output dim", first.output_dim(), ch.output_dim())?;
        }
        Ok(Self { channels })
    }

    pub fn channels(&self) -> &[QuantumChannel] {
        &self.channels
    }

    pub fn len(&self) -> usize {
        self.channels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.channels.is_empty()
    }
}

/// `min_E χ(E, P, ω)`.
pub fn compound_holevo(set: &CompoundChannelSet, src: &CqSource) -> Result<f64> {
    let mut worst = f64::INFINITY;
    for ch in set.channels() {
        worst = worst.min(holevo_quantity(src, ch)?);
    }
    Ok(worst)
}

fn compositions(total: usize, parts: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if parts == 1 {
        prefix.push(total);
        out.push(prefix.clone());
        prefix.pop();
        return;
    }
    for k in 0..=total {
        prefix.push(k);
        compositions(total - k, parts - 1, prefix, out);
        prefix.pop();
    }
}

/// Grid search of the prior over the simplex with step `1/grid_resolution`.
/// Ties keep the first grid point in lexicographic order.
pub fn optimize_prior(
    set: &CompoundChannelSet,
    states: &[DensityMatrix],
    grid_resolution: usize,
) -> Result<(Vec<f64>, f64)> {
    let l = states.len();
    if l == 0 {
        return Err(Error::param("states", "need at least one state"));
    }
    if l > MAX_GRID_ALPHABET {
        return Err(Error::param(
            "states",
            format!("grid search supports at most {MAX_GRID_ALPHABET} states, got {l}"),
        ));
    }
    if grid_resolution == 0 {
        return Err(Error::param("grid_resolution", "must be at least 1"));
    }
    let outputs: Vec<Vec<DensityMatrix>> = set
        .channels()
        .iter()
        .map(|ch| states.iter().map(|s| ch.apply(s)).collect())
        .collect::<Result<_>>()?;
    let mut grid = Vec::new();
    compositions(grid_resolution, l, &mut Vec::new(), &mut grid);
    let mut best: Option<(Vec<f64>, f64)> = None;
    for g in grid {
        let p: Vec<f64> = g.iter().map(|&k| k as f64 / grid_resolution as f64).collect();
        let chi = outputs.iter().map(|o| holevo_of_outputs(&p, o)).fold(f64::INFINITY, f64::min);
        if best.as_ref().is_none_or(|b| chi > b.1 + 1e-12) {
            best = Some((p, chi));
        }
    }
    Ok(best.unwrap())
}

/// Distinct average outputs, their channel groups and the binary tests `Π^k`.
#[derive(Debug, Clone)]
pub struct DiscriminationCascade {
    distinct_outputs: Vec<DensityMatrix>,
    channel_groups: Vec<Vec<usize>>,
    tests: Vec<Subspace>,
    divergences: Vec<Vec<RelativeEntropy>>,
    n: usize,
    epsilon: f64,
}

impl DiscriminationCascade {
    pub fn distinct_outputs(&self) -> &[DensityMatrix] {
        &self.distinct_outputs
    }

    /// Channel indices producing each distinct output.
    pub fn channel_groups(&self) -> &[Vec<usize>] {
        &self.channel_groups
    }

    pub fn tests(&self) -> &[Subspace] {
        &self.tests
    }

    /// `D(ρ^i‖ρ^j)`; the diagonal is zero.
    pub fn divergences(&self) -> &[Vec<RelativeEntropy>] {
        &self.divergences
    }

    pub fn a_bar(&self) -> usize {
        self.distinct_outputs.len()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn ambient_dim(&self) -> usize {
        self.tests[0].ambient_dim()
    }

    /// Distinct-output index produced by channel `o`.
    pub fn group_of(&self, o: usize) -> Result<usize> {
        self.channel_groups.iter().position(|g| g.contains(&o)).ok_or(Error::IndexOutOfRange {
            what: "channel",
            index: o,
            limit: self.channel_groups.iter().map(|g| g.len()).sum(),
        })
    }

    /// `P^k = Π^k (Π^{k−1})^c … (Π^1)^c`.
    pub fn chain(&self, k: usize) -> Result<ProjectorChain<'_>> {
        if k >= self.tests.len() {
            return Err(Error::IndexOutOfRange {
                what: "distinct output",
                index: k,
                limit: self.tests.len(),
            });
        }
        Ok(ProjectorChain { tests: &self.tests, k })
    }
}

/// Smallest finite `D(ρ^i‖ρ^j)/2` over ordered distinct pairs, with the pair.
pub fn epsilon_limit(divergences: &[Vec<RelativeEntropy>]) -> Option<(f64, usize, usize)> {
    let mut best: Option<(f64, usize, usize)> = None;
    for (i, row) in divergences.iter().enumerate() {
        for (j, d) in row.iter().enumerate() {
            if i == j {
                continue;
            }
            if let RelativeEntropy::Finite(v) = d {
                if best.is_none_or(|b| v / 2.0 < b.0) {
                    best = Some((v / 2.0, i, j));
                }
            }
        }
    }
    best
}

/// Deduplicated outputs `E_l(ω)` in first-occurrence order, with groups.
pub fn distinct_outputs(
    set: &CompoundChannelSet,
    src: &CqSource,
) -> Result<(Vec<DensityMatrix>, Vec<Vec<usize>>)> {
    let omega = src.mixture()?;
    let mut outs: Vec<DensityMatrix> = Vec::new();
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for (l, ch) in set.channels().iter().enumerate() {
        let rho = ch.apply(&omega)?;
        let mut found = None;
        for (k, o) in outs.iter().enumerate() {
            if o.trace_distance(&rho)? <= TAU_DEDUP {
                found = Some(k);
                break;
            }
        }
        match found {
            Some(k) => groups[k].push(l),
            None => {
                outs.push(rho);
                groups.push(vec![l]);
            }
        }
    }
    Ok((outs, groups))
}

/// Builds `Π^{i,j}` for all ordered distinct pairs and `Π^i = ∧_j Π^{i,j}`.
///
/// Pairs with infinite relative entropy use the support of `(ρ^i)^{⊗n}`.
pub fn build_discrimination_cascade(
    set: &CompoundChannelSet,
    src: &CqSource,
    params: &TypicalSetParams,
) -> Result<DiscriminationCascade> {
    build_cascade_inner(set, src, params).module("compound")
}

fn build_cascade_inner(
    set: &CompoundChannelSet,
    src: &CqSource,
    params: &TypicalSetParams,
) -> Result<DiscriminationCascade> {
    let (outs, groups) = distinct_outputs(set, src)?;
    checked_pow(outs[0].dim(), params.n, params.max_dim)?;
    let a = outs.len();
    let divergences: Vec<Vec<RelativeEntropy>> = outs
        .iter()
        .map(|ri| outs.iter().map(|rj| relative_entropy(ri, rj)).collect())
        .collect::<Result<_>>()?;
    if let Some((limit, i, j)) = epsilon_limit(&divergences) {
        if params.epsilon >= limit {
            return Err(Error::Precondition(format!(
                "epsilon = {} must be below D(rho^{}||rho^{})/2 = {limit:.6}",
                params.epsilon,
                i + 1,
                j + 1
            )));
        }
    }
    let tests = (0..a)
        .into_par_iter()
        .map(|i| -> Result<Subspace> {
            if a == 1 {
                return universal_typical_subspace(&outs[0], params);
            }
            let mut pair = Vec::with_capacity(a - 1);
            for j in (0..a).filter(|&j| j != i) {
                pair.push(match divergences[i][j] {
                    RelativeEntropy::Finite(_) => relative_typical_subspace(&outs[i], &outs[j], params)?,
                    RelativeEntropy::Infinite => support_subspace(&outs[i], params.n, params.max_dim)?,
                });
            }
            Subspace::meet_all(&pair)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(DiscriminationCascade {
        distinct_outputs: outs,
        channel_groups: groups,
        tests,
        divergences,
        n: params.n,
        epsilon: params.epsilon,
    })
}

/// `P^k` as a (generally non-Hermitian) product of projections.
#[derive(Debug, Clone, Copy)]
pub struct ProjectorChain<'a> {
    tests: &'a [Subspace],
    k: usize,
}

impl ProjectorChain<'_> {
    pub fn index(&self) -> usize {
        self.k
    }

    /// Dense matrix of `P^k`. Costs `D²` memory.
    pub fn dense(&self) -> CMat {
        self.apply(linalg::identity(self.ambient_dim()).as_ref())
    }
}

impl OperatorMap for ProjectorChain<'_> {
    fn ambient_dim(&self) -> usize {
        self.tests[0].ambient_dim()
    }

    fn apply(&self, x: MatRef<'_, c64>) -> CMat {
        let mut y = x.to_owned();
        for t in &self.tests[..self.k] {
            y = t.project_complement(y.as_ref());
        }
        self.tests[self.k].project(y.as_ref())
    }

    fn apply_adjoint(&self, x: MatRef<'_, c64>) -> CMat {
        let mut y = self.tests[self.k].project(x);
        for t in self.tests[..self.k].iter().rev() {
            y = t.project_complement(y.as_ref());
        }
        y
    }
}

/// One binary test of the identification cascade.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TestRecord {
    pub test: usize,
    pub accepted: bool,
    /// Probability of the observed answer given the state before the test.
    pub probability: f64,
}

#[derive(Debug, Clone)]
pub struct Identification {
    /// Distinct-output index, or `None` when every test said no.
    pub outcome: Option<usize>,
    pub collapsed: Option<DensityMatrix>,
    pub transcript: Vec<TestRecord>,
}

/// Runs `Π^1 / (Π^1)^c`, then `Π^2 / (Π^2)^c`, … on `ρ`, stopping at the first yes.
pub fn identify_mixed_state<R: Rng>(
    cascade: &DiscriminationCascade,
    rho: &DensityMatrix,
    rng: &mut R,
) -> Result<Identification> {
    same_dim("identify_mixed_state", cascade.ambient_dim(), rho.dim())?;
    let mut state = rho.matrix().to_owned();
    let mut transcript = Vec::new();
    for (k, t) in cascade.tests().iter().enumerate() {
        let yes_part = sandwich(t.basis(), state.as_ref());
        let p_yes = linalg::trace(yes_part.as_ref()).re.clamp(0.0, 1.0);
        let accepted = rng.gen::<f64>() < p_yes;
        let (next, prob) = if accepted {
            (yes_part, p_yes)
        } else {
            let c = t.complement();
            (sandwich(c.basis(), state.as_ref()), 1.0 - p_yes)
        };
        transcript.push(TestRecord { test: k, accepted, probability: prob });
        if prob <= TAU_PROB {
            return Ok(Identification { outcome: accepted.then_some(k), collapsed: None, transcript });
        }
        state = faer::scale(linalg::cx(1.0 / prob, 0.0)) * &next;
        if accepted {
            return Ok(Identification {
                outcome: Some(k),
                collapsed: Some(DensityMatrix::from_trusted(linalg::hermitian_part(state.as_ref()))),
                transcript,
            });
        }
    }
    Ok(Identification {
        outcome: None,
        collapsed: Some(DensityMatrix::from_trusted(linalg::hermitian_part(state.as_ref()))),
        transcript,
    })
}

/// `V V† A V V†`.
fn sandwich(v: MatRef<'_, c64>, a: MatRef<'_, c64>) -> CMat {
    let inner = v.adjoint() * a * v;
    v * &inner * v.adjoint()
}

/// Pure-state version of the cascade: returns the outcome and the
/// unnormalized collapsed vector `P^k ψ`.
pub fn identify_pure<R: Rng>(
    cascade: &DiscriminationCascade,
    psi: &[c64],
    rng: &mut R,
) -> Result<(Option<usize>, Vec<c64>)> {
    same_dim("identify_pure", cascade.ambient_dim(), psi.len())?;
    let mut v = Mat::from_fn(psi.len(), 1, |i, _| psi[i]);
    for (k, t) in cascade.tests().iter().enumerate() {
        let total = linalg::frobenius_sqr(v.as_ref());
        let yes = t.project(v.as_ref());
        let p_yes = if total > 0.0 { linalg::frobenius_sqr(yes.as_ref()) / total } else { 0.0 };
        if rng.gen::<f64>() < p_yes {
            return Ok((Some(k), linalg::column(yes.as_ref(), 0)));
        }
        v = t.project_complement(v.as_ref());
    }
    Ok((None, linalg::column(v.as_ref(), 0)))
}

/// Exact probability that the cascade answers `k`, for every `k`.
pub fn identification_probabilities(
    cascade: &DiscriminationCascade,
    state: &ProductState,
) -> Result<Vec<f64>> {
    (0..cascade.a_bar())
        .map(|k| {
            let chain = cascade.chain(k)?;
            let w = chain.apply_adjoint(cascade.tests()[k].basis());
            Ok(state.sandwich_trace(w.as_ref()).clamp(0.0, 1.0))
        })
        .collect()
}

/// Second-stage decoder for identified output `k`.
///
/// `typical[l][i]` is the conditional typical subspace of codeword `i` sent
/// through channel `l`; `č_i` spans the union over the channels of group `k`.
pub fn build_compound_message_povm(
    cascade: &DiscriminationCascade,
    k: usize,
    codebook: &Codebook,
    typical: &[Vec<Subspace>],
) -> Result<SequentialPovm> {
    let chain = cascade.chain(k)?;
    let group = &cascade.channel_groups()[k];
    let m = codebook.len();
    let mut unions = Vec::with_capacity(m);
    for i in 0..m {
        let mut stacked = Mat::<c64>::zeros(cascade.ambient_dim(), 0);
        for &l in group {
            let t = typical.get(l).and_then(|row| row.get(i)).ok_or(Error::IndexOutOfRange {
                what: "typical subspace",
                index: l,
                limit: typical.len(),
            })?;
            stacked = linalg::hstack(stacked.as_ref(), t.basis());
        }
        unions.push(if group.len() == 1 {
            Subspace::from_trusted(stacked)
        } else {
            Subspace::span(stacked.as_ref())
        });
    }
    build_sequential_povm_with(&chain, &unions)
}

/// Inputs of the compound experiment.
#[derive(Debug, Clone)]
pub struct CompoundExperiment {
    pub set: CompoundChannelSet,
    pub source: CqSource,
    pub n: usize,
    pub rate: f64,
    pub delta: f64,
    /// `None` picks `min(χ(S) − R − 0.05, 0.95 · min D/2)`, at least `1e-3`.
    pub epsilon: Option<f64>,
    /// Sampled identifications per codebook and adversary.
    pub trials: usize,
    pub codebook_samples: usize,
    pub seed: u64,
    pub max_dim: usize,
}

impl CompoundExperiment {
    pub fn new(set: CompoundChannelSet, source: CqSource, n: usize, rate: f64) -> Self {
        Self {
            set,
            source,
            n,
            rate,
            delta: 0.5,
            epsilon: None,
            trials: 0,
            codebook_samples: 10,
            seed: 0,
            max_dim: crate::DEFAULT_MAX_DIM,
        }
    }
}

/// Per-adversary outcome.
#[derive(Debug, Clone, Serialize)]
pub struct AdversaryRow {
    /// Channel chosen by the adversary (0-based).
    pub o: usize,
    /// Distinct output that channel produces (0-based).
    pub k_true: usize,
    /// Exact probability that identification does not return `k_true`.
    pub ident_fail_rate: f64,
    pub ident_fail_ci95: f64,
    /// `1 − E[joint success of identification and message decoding]`.
    pub p_err: f64,
    pub p_err_ci95: f64,
    /// `E[Tr(P^k ρ P^k†) − (1/M) Σ_i Tr(ĥ_i P^k ρ_{α_i} P^k† ĥ_i)]`: errors made
    /// by the message stage after a correct identification.
    pub message_err: f64,
    pub message_err_ci95: f64,
    /// Sampled identification failure rate, when `trials > 0`.
    pub sampled_ident_fail: Option<f64>,
    pub per_codebook_p_err: Vec<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct CompoundExperimentResult {
    pub n: usize,
    pub rate: f64,
    pub m: usize,
    pub trials: usize,
    pub codebook_samples: usize,
    pub seed: u64,
    /// `χ(S)` at the source prior.
    pub chi: f64,
    pub epsilon: f64,
    pub a_bar: usize,
    /// Identification error scale `ā ε`.
    pub delta_bound: f64,
    pub test_ranks: Vec<usize>,
    pub rows: Vec<AdversaryRow>,
}

impl CompoundExperimentResult {
    /// Adversary with the largest end-to-end error.
    pub fn worst(&self) -> &AdversaryRow {
        self.rows.iter().max_by(|a, b| a.p_err.total_cmp(&b.p_err)).expect("at least one adversary")
    }
}

struct CodebookOutcome {
    ident_fail: Vec<f64>,
    p_err: Vec<f64>,
    message_err: Vec<f64>,
    sampled_fail: Vec<usize>,
}

pub fn run_compound_experiment(exp: &CompoundExperiment) -> Result<CompoundExperimentResult> {
    run_compound_inner(exp).module("compound")
}

fn run_compound_inner(exp: &CompoundExperiment) -> Result<CompoundExperimentResult> {
    if exp.codebook_samples == 0 {
        return Err(Error::param("codebook_samples", "must be at least 1"));
    }
    let m = message_count(exp.n, exp.rate)?;
    let chi = compound_holevo(&exp.set, &exp.source)?;
    let epsilon = match exp.epsilon {
        Some(e) => e,
        None => {
            let (outs, _) = distinct_outputs(&exp.set, &exp.source)?;
            let divs: Vec<Vec<RelativeEntropy>> = outs
                .iter()
                .map(|a| outs.iter().map(|b| relative_entropy(a, b)).collect())
                .collect::<Result<_>>()?;
            let mut e = (chi - exp.rate - 0.05).max(1e-3);
            if let Some((limit, _, _)) = epsilon_limit(&divs) {
                e = e.min(0.95 * limit);
            }
            e
        }
    };
    let params = TypicalSetParams::new(exp.n, exp.delta, epsilon)?.with_max_dim(exp.max_dim);
    let cascade = build_cascade_inner(&exp.set, &exp.source, &params)?;

    let channel_outputs: Vec<Vec<DensityMatrix>> =
        exp.set.channels().iter().map(|ch| exp.source.outputs(ch)).collect::<Result<_>>()?;
    let s_bars: Vec<f64> = channel_outputs.iter().map(|o| mean_entropy(exp.source.prior(), o)).collect();
    let a = exp.set.len();
    let k_true: Vec<usize> = (0..a).map(|o| cascade.group_of(o)).collect::<Result<_>>()?;

    let outcomes: Vec<CodebookOutcome> = (0..exp.codebook_samples as u64)
        .into_par_iter()
        .map(|s| -> Result<CodebookOutcome> {
            let cb = generate_codebook_sample(exp.source.prior(), exp.n, exp.rate, exp.seed, s)?;
            let states: Vec<Vec<ProductState>> = channel_outputs
                .iter()
                .map(|outs| (0..m).map(|i| quantum_codeword(&cb, i, outs)).collect())
                .collect::<Result<_>>()?;
            let typical: Vec<Vec<Subspace>> = states
                .iter()
                .zip(&s_bars)
                .map(|(row, &sb)| {
                    row.iter().map(|st| conditional_typical_subspace(st.spectral(), sb, &params)).collect()
                })
                .collect::<Result<_>>()?;
            let povms: Vec<SequentialPovm> = (0..cascade.a_bar())
                .map(|k| build_compound_message_povm(&cascade, k, &cb, &typical))
                .collect::<Result<_>>()?;

            let mut out = CodebookOutcome {
                ident_fail: Vec::with_capacity(a),
                p_err: Vec::with_capacity(a),
                message_err: Vec::with_capacity(a),
                sampled_fail: Vec::with_capacity(a),
            };
            for o in 0..a {
                let k = k_true[o];
                let chain = cascade.chain(k)?;
                let test_w = chain.apply_adjoint(cascade.tests()[k].basis());
                let mut ident = 0.0;
                let mut joint = 0.0;
                for (i, st) in states[o].iter().enumerate() {
                    ident += st.sandwich_trace(test_w.as_ref()).clamp(0.0, 1.0);
                    let w = chain.apply_adjoint(povms[k].parts()[i].basis());
                    joint += st.sandwich_trace(w.as_ref()).clamp(0.0, 1.0);
                }
                let (ident, joint) = (ident / m as f64, joint / m as f64);
                out.ident_fail.push((1.0 - ident).clamp(0.0, 1.0));
                out.p_err.push((1.0 - joint).clamp(0.0, 1.0));
                out.message_err.push((ident - joint).clamp(0.0, 1.0));

                let mut fails = 0;
                for t in 0..exp.trials as u64 {
                    let id = sub_index(s, t) ^ ((o as u64) << 40);
                    let msg = rng::stream(exp.seed, Purpose::Message, id).gen_range(0..m);
                    let psi =
                        states[o][msg].sample_component(&mut rng::stream(exp.seed, Purpose::Channel, id));
                    let (got, _) = identify_pure(
                        &cascade,
                        &psi,
                        &mut rng::stream(exp.seed, Purpose::Identification, id),
                    )?;
                    if got != Some(k) {
                        fails += 1;
                    }
                }
                out.sampled_fail.push(fails);
            }
            Ok(out)
        })
        .collect::<Result<_>>()?;

    let rows = (0..a)
        .map(|o| {
            let pick = |f: fn(&CodebookOutcome) -> &Vec<f64>| -> Vec<f64> {
                outcomes.iter().map(|c| f(c)[o]).collect()
            };
            let ident = pick(|c| &c.ident_fail);
            let p_err = pick(|c| &c.p_err);
            let msg = pick(|c| &c.message_err);
            let sampled: usize = outcomes.iter().map(|c| c.sampled_fail[o]).sum();
            AdversaryRow {
                o,
                k_true: k_true[o],
                ident_fail_rate: stats::mean(&ident),
                ident_fail_ci95: stats::ci95(&ident),
                p_err: stats::mean(&p_err),
                p_err_ci95: stats::ci95(&p_err),
                message_err: stats::mean(&msg),
                message_err_ci95: stats::ci95(&msg),
                sampled_ident_fail: (exp.trials > 0)
                    .then(|| sampled as f64 / (exp.trials * exp.codebook_samples) as f64),
                per_codebook_p_err: p_err,
            }
        })
        .collect();

    Ok(CompoundExperimentResult {
        n: exp.n,
        rate: exp.rate,
        m,
        trials: exp.trials,
        codebook_samples: exp.codebook_samples,
        seed: exp.seed,
        chi,
        epsilon,
        a_bar: cascade.a_bar(),
        delta_bound: cascade.a_bar() as f64 * epsilon,
        test_ranks: cascade.tests().iter().map(|t| t.rank()).collect(),
        rows,
    })
}

/// Samples which distinct output the cascade reports for `state`, by
/// unravelling the product state into eigen-components.
pub fn sample_identification(
    cascade: &DiscriminationCascade,
    state: &ProductState,
    draws: usize,
    seed: u64,
) -> Result<Vec<usize>> {
    let mut counts = vec![0; cascade.a_bar() + 1];
    for t in 0..draws as u64 {
        let psi = state.sample_component(&mut rng::stream(seed, Purpose::Channel, t));
        let (k, _) = identify_pure(cascade, &psi, &mut rng::stream(seed, Purpose::Identification, t))?;
        counts[k.unwrap_or(cascade.a_bar())] += 1;
    }
    Ok(counts)
}

/// Picks an outcome from exact probabilities (last slot = failure).
pub fn draw_identification<R: Rng>(probs: &[f64], rng: &mut R) -> Option<usize> {
    let fail = (1.0 - probs.iter().sum::<f64>()).max(0.0);
    let mut w = probs.to_vec();
    w.push(fail);
    let i = sample_index(&w, rng);
    (i < probs.len()).then_some(i)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::cx;

    fn zero_plus() -> CqSource {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        CqSource::new(
            vec![
                DensityMatrix::basis(2, 0).unwrap(),
                DensityMatrix::pure(&[cx(h, 0.0), cx(h, 0.0)]).unwrap(),
            ],
            vec![0.5, 0.5],
        )
        .unwrap()
    }

    fn entropy2(p: f64) -> f64 {
        -(p * p.log2() + (1.0 - p) * (1.0 - p).log2())
    }

    #[test]
    fn compound_holevo_values() {
        let src = zero_plus();
        let single = CompoundChannelSet::new(vec![QuantumChannel::identity(2)]).unwrap();
        let chi = compound_holevo(&single, &src).unwrap();
        assert!((chi - holevo_quantity(&src, &QuantumChannel::identity(2)).unwrap()).abs() < 1e-15);

        let dep =
            CompoundChannelSet::new(vec![QuantumChannel::identity(2), QuantumChannel::fully_depolarizing(2)])
                .unwrap();
        assert!(compound_holevo(&dep, &src).unwrap().abs() < 1e-12);

        // dephased outputs: |0><0| and I/2, so χ = H(3/4) − ½·1
        let deph =
            CompoundChannelSet::new(vec![QuantumChannel::identity(2), QuantumChannel::dephasing(2)]).unwrap();
        let expect = (entropy2(0.75) - 0.5).min(0.600876);
        assert!((compound_holevo(&deph, &src).unwrap() - expect).abs() < 1e-6);
    }

    #[test]
    fn prior_search() {
        let set = CompoundChannelSet::new(vec![QuantumChannel::identity(2)]).unwrap();
        let src = zero_plus();
        let (p, chi) = optimize_prior(&set, src.states(), 20).unwrap();
        assert!((p[0] - 0.5).abs() <= 0.05 + 1e-12);
        assert!(chi > 0.6);
        let (p1, c1) = optimize_prior(&set, &src.states()[..1], 10).unwrap();
        assert_eq!(p1, vec![1.0]);
        assert_eq!(c1, 0.0);
        let same = vec![DensityMatrix::basis(2, 0).unwrap(); 3];
        assert_eq!(optimize_prior(&set, &same, 6).unwrap().1, 0.0);
        assert!(optimize_prior(&set, &vec![DensityMatrix::basis(2, 0).unwrap(); 5], 4).is_err());
    }

    #[test]
    fn duplicates_collapse_into_one_group() {
        let set = CompoundChannelSet::new(vec![
            QuantumChannel::identity(2),
            QuantumChannel::dephasing(2),
            QuantumChannel::identity(2),
        ])
        .unwrap();
        let (outs, groups) = distinct_outputs(&set, &zero_plus()).unwrap();
        assert_eq!(outs.len(), 2);
        assert_eq!(groups, vec![vec![0, 2], vec![1]]);
    }

    #[test]
    fn chain_adjoint_is_consistent() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let t1 = Subspace::coordinate(3, &[0, 1]).unwrap();
        let t2 =
            Subspace::new(Mat::from_fn(3, 1, |i, _| if i == 0 { cx(0.0, 0.0) } else { cx(s, 0.0) })).unwrap();
        let tests = vec![t1.clone(), t2.clone()];
        let chain = ProjectorChain { tests: &tests, k: 1 };
        let dense = &t2.projector() * (linalg::identity(3) - t1.projector());
        assert!((&chain.dense() - &dense).norm_max() < 1e-15);
        let adj = chain.apply_adjoint(linalg::identity(3).as_ref());
        assert!((&adj - dense.adjoint()).norm_max() < 1e-15);
    }

    #[test]
    fn exact_outputs_identified_by_support() {
        let src = CqSource::new(
            vec![DensityMatrix::basis(2, 0).unwrap(), DensityMatrix::basis(2, 1).unwrap()],
            vec![1.0, 0.0],
        )
        .unwrap();
        let flip =
            QuantumChannel::new(vec![Mat::from_fn(
                2,
                2,
                |i, j| {
                    if i != j {
                        cx(1.0, 0.0)
                    } else {
                        cx(0.0, 0.0)
                    }
                },
            )])
            .unwrap();
        let set = CompoundChannelSet::new(vec![QuantumChannel::identity(2), flip]).unwrap();
        let params = TypicalSetParams::new(3, 0.5, 0.1).unwrap();
        let cascade = build_discrimination_cascade(&set, &src, &params).unwrap();
        assert!(cascade.divergences()[0][1].is_infinite());
        assert_eq!(cascade.tests()[0].rank(), 1);
        let other = crate::codec::ProductState::new(vec![DensityMatrix::basis(2, 1).unwrap(); 3]).unwrap();
        let probs = identification_probabilities(&cascade, &other).unwrap();
        assert!(probs[0].abs() < 1e-15);
        assert!((probs[1] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn epsilon_above_half_divergence_is_rejected() {
        let set =
            CompoundChannelSet::new(vec![QuantumChannel::identity(2), QuantumChannel::dephasing(2)]).unwrap();
        let params = TypicalSetParams::new(2, 0.5, 5.0).unwrap();
        let err = build_discrimination_cascade(&set, &zero_plus(), &params).unwrap_err();
        assert!(err.to_string().contains("epsilon"), "{err}");
    }
}
