use faer::complex_native::c64;
use faer::{Mat, MatRef};

use crate::error::{Error, Result};
use crate::linalg::{self, cx, zero, CMat};

use super::operator::{same_dim, DensityMatrix};
use super::{TAU_HERM, TAU_PRIOR};

/// Completely positive trace-preserving map in Kraus form.
#[derive(Debug, Clone)]
pub struct QuantumChannel {
    kraus: Vec<CMat>,
}

impl QuantumChannel {
    pub fn new(kraus: Vec<CMat>) -> Result<Self> {
        let first = kraus.first().ok_or_else(|| Error::InvalidChannel("empty Kraus list".into()))?;
        let (d_out, d_in) = (first.nrows(), first.ncols());
        let mut sum = Mat::<c64>::zeros(d_in, d_in);
        for k in &kraus {
            if k.nrows() != d_out || k.ncols() != d_in {
                return Err(Error::InvalidChannel(format!(
                    "Kraus operator is {}x{}, expected {d_out}x{d_in}",
                    k.nrows(),
                    k.ncols()
                )));
            }
            sum = &sum + k.adjoint() * k;
        }
        let dev = (&sum - linalg::identity(d_in)).norm_max();
        if dev > TAU_HERM {
            return Err(Error::InvalidChannel(format!("Σ K†K deviates from identity by {dev:.3e}")));
        }
        Ok(Self { kraus })
    }

    pub fn identity(d: usize) -> Self {
        Self { kraus: vec![linalg::identity(d)] }
    }

    /// Complete dephasing in the computational basis.
    pub fn dephasing(d: usize) -> Self {
        let kraus = (0..d)
            .map(|k| Mat::from_fn(d, d, |i, j| if i == k && j == k { cx(1.0, 0.0) } else { zero() }))
            .collect();
        Self { kraus }
    }

    /// Maps every state to `I/d`.
    pub fn fully_depolarizing(d: usize) -> Self {
        let s = 1.0 / (d as f64).sqrt();
        let mut kraus = Vec::with_capacity(d * d);
        for a in 0..d {
            for b in 0..d {
                kraus.push(Mat::from_fn(d, d, |i, j| if i == a && j == b { cx(s, 0.0) } else { zero() }));
            }
        }
        Self { kraus }
    }

    pub fn kraus(&self) -> &[CMat] {
        &self.kraus
    }

    pub fn input_dim(&self) -> usize {
        self.kraus[0].ncols()
    }

    pub fn output_dim(&self) -> usize {
        self.kraus[0].nrows()
    }

    pub fn apply_matrix(&self, rho: MatRef<'_, c64>) -> CMat {
        let d = self.output_dim();
        let mut out = Mat::<c64>::zeros(d, d);
        for k in &self.kraus {
            out = &out + k * rho * k.adjoint();
        }
        linalg::hermitian_part(out.as_ref())
    }

    /// `Σ K ρ K†`.
    pub fn apply(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        same_dim("apply_channel", self.input_dim(), rho.dim())?;
        DensityMatrix::new(self.apply_matrix(rho.matrix()))
    }
}

/// Input states `ω_1..ω_l` with prior `P`.
#[derive(Debug, Clone)]
pub struct CqSource {
    states: Vec<DensityMatrix>,
    prior: Vec<f64>,
}

impl CqSource {
    pub fn new(states: Vec<DensityMatrix>, prior: Vec<f64>) -> Result<Self> {
        let first = states.first().ok_or_else(|| Error::param("states", "at least one state is required"))?;
        if prior.len() != states.len() {
            return Err(Error::param(
                "prior",
                format!("has {} entries for {} states", prior.len(), states.len()),
            ));
        }
        for s in &states {
            same_dim("source states", first.dim(), s.dim())?;
        }
        validate_prior(&prior)?;
        Ok(Self { states, prior })
    }

    pub fn states(&self) -> &[DensityMatrix] {
        &self.states
    }

    pub fn prior(&self) -> &[f64] {
        &self.prior
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.states[0].dim()
    }

    pub fn with_prior(&self, prior: Vec<f64>) -> Result<Self> {
        Self::new(self.states.clone(), prior)
    }

    /// `ω = Σ p_i ω_i`.
    pub fn mixture(&self) -> Result<DensityMatrix> {
        DensityMatrix::mixture(&self.prior, &self.states)
    }

    /// `E(ω_1)..E(ω_l)`.
    pub fn outputs(&self, ch: &QuantumChannel) -> Result<Vec<DensityMatrix>> {
        self.states.iter().map(|s| ch.apply(s)).collect()
    }
}

pub(crate) fn validate_prior(prior: &[f64]) -> Result<()> {
    if prior.iter().any(|p| !p.is_finite() || *p < 0.0) {
        return Err(Error::param("prior", "entries must be nonnegative"));
    }
    let total: f64 = prior.iter().sum();
    if (total - 1.0).abs() > TAU_PRIOR {
        return Err(Error::param("prior", format!("sums to {total}, expected 1")));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn plus() -> DensityMatrix {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        DensityMatrix::pure(&[cx(h, 0.0), cx(h, 0.0)]).unwrap()
    }

    #[test]
    fn standard_channels() {
        let p = plus();
        let id = QuantumChannel::identity(2).apply(&p).unwrap();
        assert!((id.matrix() - p.matrix()).norm_max() < 1e-15);
        let half = DensityMatrix::maximally_mixed(2);
        let deph = QuantumChannel::dephasing(2).apply(&p).unwrap();
        assert!((deph.matrix() - half.matrix()).norm_max() < 1e-15);
        let dep = QuantumChannel::fully_depolarizing(2).apply(&DensityMatrix::basis(2, 0).unwrap()).unwrap();
        assert!((dep.matrix() - half.matrix()).norm_max() < 1e-15);
    }

    #[test]
    fn rejects_non_trace_preserving() {
        let k = linalg::real_diagonal(&[1.0, 0.5]);
        assert!(matches!(QuantumChannel::new(vec![k]), Err(Error::InvalidChannel(_))));
        assert!(QuantumChannel::new(vec![]).is_err());
    }

    #[test]
    fn prior_validation_names_field() {
        let s = vec![DensityMatrix::basis(2, 0).unwrap(), plus()];
        match CqSource::new(s, vec![0.5, 0.4]) {
            Err(Error::InvalidParameter { field, .. }) => assert_eq!(field, "prior"),
            other => panic!("unexpected {other:?}"),
        }
    }
}
