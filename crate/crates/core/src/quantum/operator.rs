use std::cmp::Ordering;

use faer::complex_native::c64;
use faer::{Mat, MatRef};

use crate::error::{check_dim, Error, Result};
use crate::linalg::{self, cx, CMat};

use super::{TAU_HERM, TAU_STATE};

/// Square complex matrix equal to its conjugate transpose.
#[derive(Debug, Clone)]
pub struct HermitianOperator {
    mat: CMat,
}

impl HermitianOperator {
    /// Validates Hermiticity at [`TAU_HERM`] and symmetrizes the stored entries.
    pub fn new(mat: CMat) -> Result<Self> {
        if mat.nrows() != mat.ncols() {
            return Err(Error::NotSquare { rows: mat.nrows(), cols: mat.ncols() });
        }
        let deviation = linalg::hermitian_deviation(mat.as_ref());
        if deviation > TAU_HERM {
            return Err(Error::NotHermitian { deviation, tolerance: TAU_HERM });
        }
        Ok(Self { mat: linalg::hermitian_part(mat.as_ref()) })
    }

    pub(crate) fn from_trusted(mat: CMat) -> Self {
        debug_assert_eq!(mat.nrows(), mat.ncols());
        Self { mat }
    }

    pub fn from_real_diagonal(values: &[f64]) -> Self {
        Self::from_trusted(linalg::real_diagonal(values))
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn matrix(&self) -> MatRef<'_, c64> {
        self.mat.as_ref()
    }

    pub fn into_matrix(self) -> CMat {
        self.mat
    }

    pub fn trace(&self) -> f64 {
        linalg::trace(self.mat.as_ref()).re
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut v = linalg::hermitian_eigenvalues(self.mat.as_ref());
        v.reverse();
        v
    }

    /// Largest absolute eigenvalue.
    pub fn op_norm(&self) -> f64 {
        let v = linalg::hermitian_eigenvalues(self.mat.as_ref());
        v.iter().fold(0.0, |m, x| m.max(x.abs()))
    }
}

/// Positive semidefinite Hermitian operator of unit trace.
#[derive(Debug, Clone)]
pub struct DensityMatrix {
    op: HermitianOperator,
}

impl DensityMatrix {
    pub fn new(mat: CMat) -> Result<Self> {
        Self::from_operator(HermitianOperator::new(mat)?)
    }

    pub fn from_operator(op: HermitianOperator) -> Result<Self> {
        let tr = op.trace();
        if (tr - 1.0).abs() > TAU_STATE {
            return Err(Error::InvalidState(format!("trace is {tr}, expected 1")));
        }
        let min = op.eigenvalues().last().copied().unwrap_or(0.0);
        if min < -TAU_STATE {
            return Err(Error::InvalidState(format!("smallest eigenvalue {min:.3e} is negative")));
        }
        Ok(Self { op })
    }

    pub(crate) fn from_trusted(mat: CMat) -> Self {
        Self { op: HermitianOperator::from_trusted(mat) }
    }

    /// `|ψ><ψ|` for a normalized copy of `psi`.
    pub fn pure(psi: &[c64]) -> Result<Self> {
        let norm = psi.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if psi.is_empty() || norm == 0.0 {
            return Err(Error::InvalidState("zero state vector".into()));
        }
        let d = psi.len();
        let inv = 1.0 / norm;
        Ok(Self::from_trusted(Mat::from_fn(d, d, |i, j| psi[i] * psi[j].conj() * (inv * inv))))
    }

    pub fn diagonal(probs: &[f64]) -> Result<Self> {
        if probs.is_empty() {
            return Err(Error::InvalidState("empty diagonal".into()));
        }
        if let Some(p) = probs.iter().find(|p| **p < -TAU_STATE || !p.is_finite()) {
            return Err(Error::InvalidState(format!("negative diagonal entry {p}")));
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > TAU_STATE {
            return Err(Error::InvalidState(format!("trace is {total}, expected 1")));
        }
        Ok(Self { op: HermitianOperator::from_real_diagonal(probs) })
    }

    /// Basis state `|k><k|` in dimension `d`.
    pub fn basis(d: usize, k: usize) -> Result<Self> {
        if k >= d {
            return Err(Error::IndexOutOfRange { what: "basis", index: k, limit: d });
        }
        let mut probs = vec![0.0; d];
        probs[k] = 1.0;
        Self::diagonal(&probs)
    }

    pub fn maximally_mixed(d: usize) -> Self {
        let p = 1.0 / d as f64;
        Self { op: HermitianOperator::from_real_diagonal(&vec![p; d]) }
    }

    pub fn dim(&self) -> usize {
        self.op.dim()
    }

    pub fn operator(&self) -> &HermitianOperator {
        &self.op
    }

    pub fn matrix(&self) -> MatRef<'_, c64> {
        self.op.matrix()
    }

    /// Trace distance `½‖ρ − σ‖₁`.
    pub fn trace_distance(&self, other: &DensityMatrix) -> Result<f64> {
        same_dim("trace_distance", self.dim(), other.dim())?;
        let diff = self.matrix() - other.matrix();
        let eig = linalg::hermitian_eigenvalues(diff.as_ref());
        Ok(0.5 * eig.iter().map(|x| x.abs()).sum::<f64>())
    }

    /// Convex combination `Σ w_i ρ_i`.
    pub fn mixture(weights: &[f64], states: &[DensityMatrix]) -> Result<Self> {
        let first = states.first().ok_or_else(|| Error::InvalidState("empty mixture".into()))?;
        if weights.len() != states.len() {
            return Err(Error::DimensionMismatch {
                context: "mixture weights",
                expected: states.len(),
                found: weights.len(),
            });
        }
        let d = first.dim();
        let mut acc = Mat::<c64>::zeros(d, d);
        for (w, s) in weights.iter().zip(states) {
            same_dim("mixture", d, s.dim())?;
            acc = &acc + faer::scale(cx(*w, 0.0)) * s.matrix();
        }
        Self::new(acc)
    }
}

pub(crate) fn same_dim(context: &'static str, expected: usize, found: usize) -> Result<()> {
    if expected != found {
        Err(Error::DimensionMismatch { context, expected, found })
    } else {
        Ok(())
    }
}

/// Eigenvalues in descending order with matching orthonormal eigenvector columns.
#[derive(Debug, Clone)]
pub struct SpectralDecomposition {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: CMat,
}

impl SpectralDecomposition {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn vector(&self, k: usize) -> Vec<c64> {
        linalg::column(self.eigenvectors.as_ref(), k)
    }

    /// `Σ λ_k v_k v_k†`.
    pub fn reconstruct(&self) -> CMat {
        let v = &self.eigenvectors;
        let scaled = Mat::from_fn(v.nrows(), v.ncols(), |i, j| v.read(i, j) * self.eigenvalues[j]);
        &scaled * v.adjoint()
    }
}

const CLUSTER_GAP: f64 = 1e-9;
const PHASE_FLOOR: f64 = 1e-10;

/// Descending spectral decomposition with deterministic ordering inside
/// degenerate clusters.
pub fn spectral_decomposition(a: &HermitianOperator) -> SpectralDecomposition {
    let (asc, vecs) = linalg::hermitian_eigen(a.matrix());
    let d = asc.len();
    let order: Vec<usize> = (0..d).rev().collect();
    let mut columns: Vec<(f64, Vec<c64>)> =
        order.iter().map(|&j| (asc[j], normalize_phase(linalg::column(vecs.as_ref(), j)))).collect();

    let mut start = 0;
    while start < d {
        let mut end = start + 1;
        while end < d && columns[end - 1].0 - columns[end].0 < CLUSTER_GAP {
            end += 1;
        }
        if end - start > 1 {
            columns[start..end].sort_by(|x, y| lexicographic_desc(&x.1, &y.1));
        }
        start = end;
    }

    let eigenvalues = columns.iter().map(|c| c.0).collect();
    let cols: Vec<Vec<c64>> = columns.into_iter().map(|c| c.1).collect();
    SpectralDecomposition { eigenvalues, eigenvectors: linalg::from_columns(d, &cols) }
}

fn normalize_phase(mut v: Vec<c64>) -> Vec<c64> {
    if let Some(z) = v.iter().copied().find(|z| z.norm() > PHASE_FLOOR) {
        let phase = z.conj() * (1.0 / z.norm());
        for x in v.iter_mut() {
            *x *= phase;
        }
    }
    v
}

fn lexicographic_desc(a: &[c64], b: &[c64]) -> Ordering {
    for (x, y) in a.iter().zip(b) {
        match y.re.partial_cmp(&x.re) {
            Some(Ordering::Equal) | None => continue,
            Some(o) => return o,
        }
    }
    Ordering::Equal
}

/// Kronecker product `A ⊗ B`, refused when the result would exceed `max_dim`.
pub fn tensor(a: MatRef<'_, c64>, b: MatRef<'_, c64>, max_dim: usize) -> Result<CMat> {
    let rows = a.nrows().saturating_mul(b.nrows());
    let cols = a.ncols().saturating_mul(b.ncols());
    check_dim(rows.max(cols), max_dim)?;
    Ok(linalg::kron(a, b))
}

/// `ρ ⊗ σ` as a density matrix.
pub fn tensor_states(a: &DensityMatrix, b: &DensityMatrix, max_dim: usize) -> Result<DensityMatrix> {
    Ok(DensityMatrix::from_trusted(tensor(a.matrix(), b.matrix(), max_dim)?))
}

/// `ρ_1 ⊗ … ⊗ ρ_n`.
pub fn tensor_power_of(states: &[&DensityMatrix], max_dim: usize) -> Result<DensityMatrix> {
    let mut acc = linalg::identity(1);
    for s in states {
        acc = tensor(acc.as_ref(), s.matrix(), max_dim)?;
    }
    Ok(DensityMatrix::from_trusted(acc))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn plus() -> Vec<c64> {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        vec![cx(h, 0.0), cx(h, 0.0)]
    }

    #[test]
    fn rejects_non_hermitian() {
        let m = Mat::from_fn(2, 2, |i, j| if i == 0 && j == 1 { cx(1.0, 0.0) } else { cx(0.0, 0.0) });
        match HermitianOperator::new(m) {
            Err(Error::NotHermitian { deviation, .. }) => assert!((deviation - 1.0).abs() < 1e-15),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn rejects_bad_states() {
        assert!(DensityMatrix::diagonal(&[0.5, 0.4]).is_err());
        assert!(DensityMatrix::diagonal(&[1.5, -0.5]).is_err());
        let m = linalg::real_diagonal(&[1.2, -0.2]);
        assert!(matches!(DensityMatrix::new(m), Err(Error::InvalidState(_))));
    }

    #[test]
    fn diagonal_spectrum_is_sorted_with_standard_basis() {
        let a = HermitianOperator::from_real_diagonal(&[0.25, 0.75]);
        let sd = spectral_decomposition(&a);
        assert_eq!(sd.eigenvalues, vec![0.75, 0.25]);
        assert_eq!(sd.vector(0), vec![cx(0.0, 0.0), cx(1.0, 0.0)]);
        assert_eq!(sd.vector(1), vec![cx(1.0, 0.0), cx(0.0, 0.0)]);
    }

    #[test]
    fn mixture_of_zero_and_plus_has_closed_form_spectrum() {
        let zero = DensityMatrix::basis(2, 0).unwrap();
        let p = DensityMatrix::pure(&plus()).unwrap();
        let rho = DensityMatrix::mixture(&[0.5, 0.5], &[zero, p]).unwrap();
        let sd = spectral_decomposition(rho.operator());
        // eigenvalues of [[3/4, 1/4], [1/4, 1/4]]: (1 ± sqrt(1/2)) / 2
        let s = 0.5f64.sqrt();
        assert!((sd.eigenvalues[0] - (1.0 + s) / 2.0).abs() < 1e-12);
        assert!((sd.eigenvalues[1] - (1.0 - s) / 2.0).abs() < 1e-12);
        assert!((&sd.reconstruct() - rho.matrix()).norm_max() < 1e-12);
    }

    #[test]
    fn degenerate_cluster_order_is_deterministic() {
        let a = HermitianOperator::from_trusted(linalg::identity(3));
        let sd = spectral_decomposition(&a);
        assert_eq!(sd.eigenvalues, vec![1.0; 3]);
        // descending lexicographic order of real parts puts e1 first
        assert_eq!(sd.vector(0)[0], cx(1.0, 0.0));
        assert_eq!(sd.vector(2)[2], cx(1.0, 0.0));
    }

    #[test]
    fn tensor_of_diagonals_and_identity() {
        let a = linalg::real_diagonal(&[0.2, 0.8]);
        let b = linalg::real_diagonal(&[0.3, 0.7]);
        let k = tensor(a.as_ref(), b.as_ref(), 16).unwrap();
        let expect = [0.06, 0.14, 0.24, 0.56];
        for (i, e) in expect.iter().enumerate() {
            assert!((k.read(i, i).re - e).abs() < 1e-15);
        }
        let rho = DensityMatrix::pure(&plus()).unwrap();
        let blocks = tensor(linalg::identity(2).as_ref(), rho.matrix(), 16).unwrap();
        assert!((blocks.as_ref().submatrix(2, 2, 2, 2) - rho.matrix()).norm_max() == 0.0);
        assert!(blocks.as_ref().submatrix(0, 2, 2, 2).norm_max() == 0.0);
        let zero = DensityMatrix::basis(2, 0).unwrap();
        let t = tensor_states(&zero, &rho, 16).unwrap();
        assert!((t.operator().trace() - 1.0).abs() < 1e-15);
        assert!(matches!(tensor(a.as_ref(), b.as_ref(), 3), Err(Error::Capacity { requested: 4, cap: 3 })));
    }
}
