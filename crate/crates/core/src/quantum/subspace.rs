use faer::complex_native::c64;
use faer::{Mat, MatRef};

use crate::error::{Error, Result};
use crate::linalg::{self, CMat};

use super::operator::{same_dim, HermitianOperator};
use super::{TAU_MEET, TAU_ORTHO, TAU_RANK};

/// Linear map on `C^D` that can be applied column by column.
pub trait OperatorMap: Sync {
    fn ambient_dim(&self) -> usize;

    /// `A X`.
    fn apply(&self, x: MatRef<'_, c64>) -> CMat;

    /// `A† X`.
    fn apply_adjoint(&self, x: MatRef<'_, c64>) -> CMat;
}

/// Range of an orthogonal projector, stored as a column-orthonormal isometry.
#[derive(Debug, Clone)]
pub struct Subspace {
    basis: CMat,
}

impl Subspace {
    /// Wraps an isometry after checking `V†V = I` within [`TAU_ORTHO`].
    pub fn new(basis: CMat) -> Result<Self> {
        let gram = basis.adjoint() * &basis;
        let dev = (&gram - linalg::identity(basis.ncols())).norm_max();
        if dev > TAU_ORTHO {
            return Err(Error::Precondition(format!(
                "basis columns are not orthonormal (deviation {dev:.3e})"
            )));
        }
        Ok(Self { basis })
    }

    pub(crate) fn from_trusted(basis: CMat) -> Self {
        Self { basis }
    }

    /// Orthonormal basis of the span of the columns of `vectors`.
    pub fn span(vectors: MatRef<'_, c64>) -> Self {
        let none = Mat::<c64>::zeros(vectors.nrows(), 0);
        Self::from_trusted(linalg::deflate_orthonormalize(vectors, none.as_ref(), TAU_RANK, TAU_RANK))
    }

    pub fn zero(d: usize) -> Self {
        Self { basis: Mat::zeros(d, 0) }
    }

    pub fn full(d: usize) -> Self {
        Self { basis: linalg::identity(d) }
    }

    /// Span of the listed standard basis vectors.
    pub fn coordinate(d: usize, indices: &[usize]) -> Result<Self> {
        for &i in indices {
            if i >= d {
                return Err(Error::IndexOutOfRange { what: "coordinate", index: i, limit: d });
            }
        }
        let mut seen = vec![false; d];
        let mut cols = Vec::new();
        for &i in indices {
            if !std::mem::replace(&mut seen[i], true) {
                cols.push(i);
            }
        }
        Ok(Self::from_trusted(Mat::from_fn(d, cols.len(), |r, c| {
            if r == cols[c] {
                linalg::cx(1.0, 0.0)
            } else {
                linalg::zero()
            }
        })))
    }

    pub fn ambient_dim(&self) -> usize {
        self.basis.nrows()
    }

    pub fn rank(&self) -> usize {
        self.basis.ncols()
    }

    pub fn is_full(&self) -> bool {
        self.rank() == self.ambient_dim()
    }

    pub fn basis(&self) -> MatRef<'_, c64> {
        self.basis.as_ref()
    }

    pub fn into_basis(self) -> CMat {
        self.basis
    }

    /// Dense projector `V V†`. Costs `D²` memory.
    pub fn projector(&self) -> CMat {
        &self.basis * self.basis.adjoint()
    }

    /// `P X`.
    pub fn project(&self, x: MatRef<'_, c64>) -> CMat {
        if self.is_full() {
            return x.to_owned();
        }
        if self.rank() == 0 {
            return Mat::zeros(x.nrows(), x.ncols());
        }
        let coeff = self.basis.adjoint() * x;
        &self.basis * &coeff
    }

    /// `(I − P) X`.
    pub fn project_complement(&self, x: MatRef<'_, c64>) -> CMat {
        if self.rank() == 0 {
            return x.to_owned();
        }
        if self.is_full() {
            return Mat::zeros(x.nrows(), x.ncols());
        }
        let coeff = self.basis.adjoint() * x;
        x - &self.basis * &coeff
    }

    pub fn complement(&self) -> Subspace {
        Self::from_trusted(linalg::complement_basis(self.basis.as_ref()))
    }

    /// Largest `‖(I − P) x‖` over the columns of `other`'s basis.
    pub fn containment_residual(&self, other: &Subspace) -> f64 {
        let r = self.project_complement(other.basis());
        (0..r.ncols()).map(|j| linalg::column_norm_sqr(r.as_ref(), j).sqrt()).fold(0.0, f64::max)
    }

    /// Mutual containment residual; zero when the ranges coincide.
    pub fn range_distance(&self, other: &Subspace) -> f64 {
        if self.rank() != other.rank() {
            return 1.0;
        }
        self.containment_residual(other).max(other.containment_residual(self))
    }

    /// `‖V_1† V_2‖_op`.
    pub fn overlap(&self, other: &Subspace) -> f64 {
        let g = self.basis.adjoint() * &other.basis;
        linalg::op_norm(g.as_ref())
    }

    /// Orthogonal direct sum; `other` must be orthogonal to `self`.
    pub fn direct_sum(&self, other: &Subspace) -> Subspace {
        Self::from_trusted(linalg::hstack(self.basis(), other.basis()))
    }

    /// `Tr(V† A V)`.
    pub fn project_trace(&self, a: &HermitianOperator) -> Result<f64> {
        same_dim("project_trace", self.ambient_dim(), a.dim())?;
        if self.rank() == 0 {
            return Ok(0.0);
        }
        let av = a.matrix() * &self.basis;
        Ok(linalg::re_inner(self.basis(), av.as_ref()))
    }

    /// Intersection of the two ranges.
    ///
    /// A direction `v` of the smaller subspace belongs to the intersection when
    /// its distance to the other range is at most [`TAU_MEET`].
    pub fn meet(&self, other: &Subspace) -> Result<Subspace> {
        same_dim("meet", self.ambient_dim(), other.ambient_dim())?;
        let (small, large) = if self.rank() <= other.rank() { (self, other) } else { (other, self) };
        if large.is_full() {
            return Ok(small.clone());
        }
        if small.rank() == 0 || large.rank() == 0 {
            return Ok(Subspace::zero(self.ambient_dim()));
        }
        let residual = large.project_complement(small.basis());
        let gram = residual.adjoint() * &residual;
        let (values, vectors) = linalg::hermitian_eigen(gram.as_ref());
        let keep = values.iter().take_while(|v| **v <= TAU_MEET * TAU_MEET).count();
        if keep == 0 {
            return Ok(Subspace::zero(self.ambient_dim()));
        }
        let coeffs = vectors.as_ref().subcols(0, keep);
        let basis = small.basis() * coeffs;
        Ok(Self::from_trusted(basis))
    }

    /// Meet of a nonempty list, folded left to right.
    pub fn meet_all(items: &[Subspace]) -> Result<Subspace> {
        let (first, rest) =
            items.split_first().ok_or_else(|| Error::Precondition("meet of an empty list".into()))?;
        rest.iter().try_fold(first.clone(), |acc, s| acc.meet(s))
    }
}

impl OperatorMap for Subspace {
    fn ambient_dim(&self) -> usize {
        self.basis.nrows()
    }

    fn apply(&self, x: MatRef<'_, c64>) -> CMat {
        self.project(x)
    }

    fn apply_adjoint(&self, x: MatRef<'_, c64>) -> CMat {
        self.project(x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::cx;

    #[test]
    fn lattice_basics() {
        let e1 = Subspace::coordinate(3, &[0]).unwrap();
        let e2 = Subspace::coordinate(3, &[1]).unwrap();
        assert_eq!(e1.meet(&e2).unwrap().rank(), 0);
        assert!(e1.meet(&e1).unwrap().range_distance(&e1) < 1e-12);
        assert!(e1.meet(&Subspace::full(3)).unwrap().range_distance(&e1) < 1e-12);
        assert_eq!(e1.complement().rank(), 2);
    }

    #[test]
    fn meet_of_planes_is_their_common_line() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        // span{e1, e2} and span{e1, (e2+e3)/√2}
        let a = Subspace::coordinate(3, &[0, 1]).unwrap();
        let b = Subspace::new(Mat::from_fn(3, 2, |i, j| match (i, j) {
            (0, 0) => cx(1.0, 0.0),
            (1, 1) | (2, 1) => cx(s, 0.0),
            _ => cx(0.0, 0.0),
        }))
        .unwrap();
        let m = a.meet(&b).unwrap();
        assert_eq!(m.rank(), 1);
        assert!(m.range_distance(&Subspace::coordinate(3, &[0]).unwrap()) < 1e-12);
    }

    #[test]
    fn project_trace_reads_diagonal() {
        let a = HermitianOperator::from_real_diagonal(&[0.25, 0.75]);
        let e1 = Subspace::coordinate(2, &[0]).unwrap();
        assert!((e1.project_trace(&a).unwrap() - 0.25).abs() < 1e-15);
        assert_eq!(Subspace::zero(2).project_trace(&a).unwrap(), 0.0);
        assert!((Subspace::full(2).project_trace(&a).unwrap() - 1.0).abs() < 1e-15);
    }
}
