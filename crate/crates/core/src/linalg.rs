//! Dense complex kernels on top of `faer`.

use faer::complex_native::c64;
use faer::{Mat, MatRef, Side};

/// Dense complex matrix, column-major.
pub type CMat = Mat<c64>;

#[inline]
pub fn cx(re: f64, im: f64) -> c64 {
    c64::new(re, im)
}

#[inline]
pub fn zero() -> c64 {
    c64::new(0.0, 0.0)
}

pub fn identity(d: usize) -> CMat {
    Mat::from_fn(d, d, |i, j| if i == j { cx(1.0, 0.0) } else { zero() })
}

pub fn real_diagonal(values: &[f64]) -> CMat {
    let d = values.len();
    Mat::from_fn(d, d, |i, j| if i == j { cx(values[i], 0.0) } else { zero() })
}

/// Largest `|a_ij - conj(a_ji)|`.
pub fn hermitian_deviation(a: MatRef<'_, c64>) -> f64 {
    let d = a.nrows();
    let mut worst: f64 = 0.0;
    for j in 0..d {
        for i in 0..=j {
            let diff = a.read(i, j) - a.read(j, i).conj();
            worst = worst.max(diff.norm());
        }
    }
    worst
}

/// `(A + A†) / 2`.
pub fn hermitian_part(a: MatRef<'_, c64>) -> CMat {
    Mat::from_fn(a.nrows(), a.ncols(), |i, j| (a.read(i, j) + a.read(j, i).conj()) * 0.5)
}

pub fn trace(a: MatRef<'_, c64>) -> c64 {
    let mut t = zero();
    for i in 0..a.nrows().min(a.ncols()) {
        t += a.read(i, i);
    }
    t
}

/// True when every off-diagonal entry is exactly zero.
pub fn is_diagonal(a: MatRef<'_, c64>) -> bool {
    for j in 0..a.ncols() {
        for i in 0..a.nrows() {
            if i != j {
                let z = a.read(i, j);
                if z.re != 0.0 || z.im != 0.0 {
                    return false;
                }
            }
        }
    }
    true
}

/// Eigen-decomposition of a Hermitian matrix, eigenvalues ascending.
///
/// Exactly diagonal input skips the solver and returns the standard basis.
pub fn hermitian_eigen(a: MatRef<'_, c64>) -> (Vec<f64>, CMat) {
    let d = a.nrows();
    if is_diagonal(a) {
        let mut order: Vec<usize> = (0..d).collect();
        order.sort_by(|&x, &y| a.read(x, x).re.total_cmp(&a.read(y, y).re).then(y.cmp(&x)));
        let values = order.iter().map(|&i| a.read(i, i).re).collect();
        let vectors = Mat::from_fn(d, d, |i, j| if i == order[j] { cx(1.0, 0.0) } else { zero() });
        return (values, vectors);
    }
    let eig = a.selfadjoint_eigendecomposition(Side::Lower);
    let s = eig.s().column_vector();
    let values = (0..d).map(|i| s.read(i).re).collect();
    (values, eig.u().to_owned())
}

/// Eigenvalues only, ascending.
pub fn hermitian_eigenvalues(a: MatRef<'_, c64>) -> Vec<f64> {
    if is_diagonal(a) {
        let mut v: Vec<f64> = (0..a.nrows()).map(|i| a.read(i, i).re).collect();
        v.sort_by(f64::total_cmp);
        return v;
    }
    let mut v: Vec<f64> = a.selfadjoint_eigenvalues(Side::Lower).into_iter().collect();
    v.sort_by(f64::total_cmp);
    v
}

/// Largest singular value.
pub fn op_norm(a: MatRef<'_, c64>) -> f64 {
    if a.nrows() == 0 || a.ncols() == 0 {
        return 0.0;
    }
    let g = if a.nrows() >= a.ncols() { a.adjoint() * a } else { a * a.adjoint() };
    hermitian_eigenvalues(g.as_ref()).last().copied().unwrap_or(0.0).max(0.0).sqrt()
}

pub fn kron(a: MatRef<'_, c64>, b: MatRef<'_, c64>) -> CMat {
    let (ar, ac, br, bc) = (a.nrows(), a.ncols(), b.nrows(), b.ncols());
    Mat::from_fn(ar * br, ac * bc, |i, j| a.read(i / br, j / bc) * b.read(i % br, j % bc))
}

/// Kronecker product of column vectors.
pub fn kron_vectors(factors: &[&[c64]]) -> Vec<c64> {
    let mut out = vec![cx(1.0, 0.0)];
    for f in factors {
        let mut next = Vec::with_capacity(out.len() * f.len());
        for &x in &out {
            for &y in f.iter() {
                next.push(x * y);
            }
        }
        out = next;
    }
    out
}

pub fn column(a: MatRef<'_, c64>, j: usize) -> Vec<c64> {
    (0..a.nrows()).map(|i| a.read(i, j)).collect()
}

pub fn from_columns(rows: usize, cols: &[Vec<c64>]) -> CMat {
    Mat::from_fn(rows, cols.len(), |i, j| cols[j][i])
}

pub fn hstack(a: MatRef<'_, c64>, b: MatRef<'_, c64>) -> CMat {
    debug_assert_eq!(a.nrows(), b.nrows());
    let ka = a.ncols();
    Mat::from_fn(a.nrows(), ka + b.ncols(), |i, j| if j < ka { a.read(i, j) } else { b.read(i, j - ka) })
}

pub fn column_norm_sqr(a: MatRef<'_, c64>, j: usize) -> f64 {
    (0..a.nrows()).map(|i| a.read(i, j).norm_sqr()).sum()
}

pub fn frobenius_sqr(a: MatRef<'_, c64>) -> f64 {
    let mut s = 0.0;
    for j in 0..a.ncols() {
        s += column_norm_sqr(a, j);
    }
    s
}

/// `X - A (A† X)`, applied twice for stability.
pub fn deflate(x: MatRef<'_, c64>, against: MatRef<'_, c64>) -> CMat {
    let mut out = x.to_owned();
    if against.ncols() == 0 || x.ncols() == 0 {
        return out;
    }
    for _ in 0..2 {
        let coeff = against.adjoint() * &out;
        out = &out - against * &coeff;
    }
    out
}

/// Orthonormal basis for the span of the columns of `x` after removing their
/// components along the (orthonormal) columns of `against`.
///
/// Columns are processed in order. A column is kept when its residual norm is
/// at least `max(rel_tol * largest_residual, abs_tol)`, where
/// `largest_residual` is the largest column norm after deflation.
pub fn deflate_orthonormalize(
    x: MatRef<'_, c64>,
    against: MatRef<'_, c64>,
    rel_tol: f64,
    abs_tol: f64,
) -> CMat {
    let rows = x.nrows();
    let residual = deflate(x, against);
    let largest =
        (0..residual.ncols()).map(|j| column_norm_sqr(residual.as_ref(), j).sqrt()).fold(0.0, f64::max);
    let cut = (rel_tol * largest).max(abs_tol);
    let mut kept: Vec<Vec<c64>> = Vec::new();
    for j in 0..residual.ncols() {
        let mut v = column(residual.as_ref(), j);
        for _ in 0..2 {
            for q in &kept {
                let mut dot = zero();
                for i in 0..rows {
                    dot += q[i].conj() * v[i];
                }
                for i in 0..rows {
                    v[i] -= q[i] * dot;
                }
            }
        }
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm >= cut && norm > 0.0 {
            let inv = 1.0 / norm;
            kept.push(v.into_iter().map(|z| z * inv).collect());
        }
    }
    let basis = from_columns(rows, &kept);
    // one more pass keeps the new columns orthogonal to `against` at round-off level
    if against.ncols() > 0 && basis.ncols() > 0 {
        let cleaned = deflate(basis.as_ref(), against);
        return normalize_columns(cleaned);
    }
    basis
}

fn normalize_columns(mut a: CMat) -> CMat {
    for j in 0..a.ncols() {
        let norm = column_norm_sqr(a.as_ref(), j).sqrt();
        if norm > 0.0 {
            let inv = 1.0 / norm;
            for i in 0..a.nrows() {
                let z = a.read(i, j) * inv;
                a.write(i, j, z);
            }
        }
    }
    a
}

/// Orthonormal basis of the orthogonal complement of the span of the
/// orthonormal columns of `v`.
pub fn complement_basis(v: MatRef<'_, c64>) -> CMat {
    let d = v.nrows();
    let r = v.ncols();
    if r == 0 {
        return identity(d);
    }
    if r >= d {
        return Mat::zeros(d, 0);
    }
    let q = v.qr().compute_q();
    q.as_ref().subcols(r, d - r).to_owned()
}

/// Applies `A_1 ⊗ A_2 ⊗ … ⊗ A_n` to every column of `x`.
///
/// All factors are square of the same size `d`, and `x` has `d^n` rows. The
/// first factor acts on the most significant digit of the row index.
pub fn apply_kron_factors(factors: &[MatRef<'_, c64>], x: MatRef<'_, c64>) -> CMat {
    let n = factors.len();
    let rows = x.nrows();
    if n == 0 {
        return x.to_owned();
    }
    let d = factors[0].nrows();
    debug_assert_eq!(d.pow(n as u32), rows);
    let mut out = x.to_owned();
    let mut buf = vec![zero(); rows];
    let mut tmp = vec![zero(); d];
    for col in 0..out.ncols() {
        for (i, z) in buf.iter_mut().enumerate() {
            *z = out.read(i, col);
        }
        for (p, a) in factors.iter().enumerate() {
            let right = d.pow((n - 1 - p) as u32);
            let left = rows / (right * d);
            for l in 0..left {
                for r in 0..right {
                    let base = l * d * right + r;
                    for (b, t) in tmp.iter_mut().enumerate() {
                        *t = buf[base + b * right];
                    }
                    for aa in 0..d {
                        let mut acc = zero();
                        for (b, t) in tmp.iter().enumerate() {
                            acc += a.read(aa, b) * *t;
                        }
                        buf[base + aa * right] = acc;
                    }
                }
            }
        }
        for (i, z) in buf.iter().enumerate() {
            out.write(i, col, *z);
        }
    }
    out
}

/// `Re Σ_j <w_j, y_j>` for matching columns, i.e. `Re Tr(W† Y)`.
pub fn re_inner(w: MatRef<'_, c64>, y: MatRef<'_, c64>) -> f64 {
    let mut acc = 0.0;
    for j in 0..w.ncols() {
        for i in 0..w.nrows() {
            let a = w.read(i, j);
            let b = y.read(i, j);
            acc += a.re * b.re + a.im * b.im;
        }
    }
    acc
}

/// Mixed-radix digits of `k`, most significant first.
pub fn digits(mut k: usize, base: usize, n: usize) -> Vec<usize> {
    let mut out = vec![0; n];
    for slot in out.iter_mut().rev() {
        *slot = k % base;
        k /= base;
    }
    out
}

pub fn from_digits(digits: &[usize], base: usize) -> usize {
    digits.iter().fold(0, |acc, &x| acc * base + x)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn random_matrix(rows: usize, cols: usize, seed: u64) -> CMat {
        use rand::Rng;
        let mut rng = crate::rng::stream(seed, crate::rng::Purpose::Test, 0);
        Mat::from_fn(rows, cols, |_, _| cx(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
    }

    #[test]
    fn kron_factor_application_matches_dense_kron() {
        let a = random_matrix(2, 2, 1);
        let b = random_matrix(2, 2, 2);
        let c = random_matrix(2, 2, 3);
        let dense = kron(kron(a.as_ref(), b.as_ref()).as_ref(), c.as_ref());
        let x = random_matrix(8, 3, 4);
        let expect = &dense * &x;
        let got = apply_kron_factors(&[a.as_ref(), b.as_ref(), c.as_ref()], x.as_ref());
        assert!((&expect - &got).norm_max() < 1e-12);
    }

    #[test]
    fn deflation_drops_dependent_columns() {
        let q = complement_basis(Mat::<c64>::zeros(4, 0).as_ref());
        let e0 = q.as_ref().subcols(0, 1).to_owned();
        // columns: e0 (in `against`), e1, e1 + e2, 2 e1
        let x = Mat::from_fn(4, 4, |i, j| match (i, j) {
            (0, 0) => cx(1.0, 0.0),
            (1, 1) | (1, 2) | (2, 2) => cx(1.0, 0.0),
            (1, 3) => cx(2.0, 0.0),
            _ => zero(),
        });
        let basis = deflate_orthonormalize(x.as_ref(), e0.as_ref(), 1e-10, 1e-10);
        assert_eq!(basis.ncols(), 2);
        let gram = basis.adjoint() * &basis;
        assert!((&gram - identity(2)).norm_max() < 1e-12);
    }

    #[test]
    fn complement_is_orthogonal_and_complete() {
        let v = deflate_orthonormalize(
            random_matrix(6, 2, 9).as_ref(),
            Mat::<c64>::zeros(6, 0).as_ref(),
            1e-10,
            1e-10,
        );
        let c = complement_basis(v.as_ref());
        assert_eq!(c.ncols(), 4);
        assert!((v.adjoint() * &c).norm_max() < 1e-12);
    }

    #[test]
    fn digits_round_trip() {
        for k in 0..27 {
            assert_eq!(from_digits(&digits(k, 3, 3), 3), k);
        }
        assert_eq!(digits(5, 2, 3), vec![1, 0, 1]);
    }
}
