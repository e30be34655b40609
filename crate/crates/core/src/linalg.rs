//! Dense complex linear algebra helpers used throughout the crate.
//!
//! Everything here works on [`CMat`] (heap-allocated complex matrices).
//! Hermitian eigendecompositions symmetrize their input first, so results
//! are deterministic under the usual floating-point noise, and eigenvalues
//! are always reported in ascending order.

use nalgebra::DMatrix;
use num_complex::Complex64;

/// Complex dense matrix, the block storage type for the whole crate.
pub type CMat = DMatrix<Complex64>;

#[inline]
pub(crate) fn cplx(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

#[inline]
pub(crate) fn real(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

pub(crate) fn identity(n: usize) -> CMat {
    CMat::identity(n, n)
}

/// Largest singular value.
pub(crate) fn spectral_norm(m: &CMat) -> f64 {
    m.singular_values().iter().fold(0.0f64, |a, &s| a.max(s))
}

/// Smallest singular value.
pub(crate) fn min_singular_value(m: &CMat) -> f64 {
    m.singular_values()
        .iter()
        .fold(f64::INFINITY, |a, &s| a.min(s))
}

/// Frobenius distance from `m` to its conjugate transpose.
pub(crate) fn hermitian_deviation(m: &CMat) -> f64 {
    (m - m.adjoint()).norm()
}

/// `(m + m^H) / 2`.
pub(crate) fn symmetrize(m: &CMat) -> CMat {
    (m + m.adjoint()).map(|z| z * 0.5)
}

/// True when `m` equals its adjoint up to `tol * max(1, ‖m‖)`.
pub(crate) fn is_hermitian(m: &CMat, tol: f64) -> bool {
    hermitian_deviation(m) <= tol * 1.0f64.max(spectral_norm(m))
}

/// Eigendecomposition of a Hermitian matrix, eigenvalues ascending.
pub(crate) struct HermitianEigen {
    pub values: Vec<f64>,
    pub vectors: CMat,
}

impl HermitianEigen {
    pub fn min(&self) -> f64 {
        self.values[0]
    }

    pub fn max(&self) -> f64 {
        *self.values.last().expect("nonempty spectrum")
    }

    /// Column of the eigenvector matrix for the i-th ascending eigenvalue.
    pub fn vector(&self, i: usize) -> CMat {
        CMat::from_column_slice(self.vectors.nrows(), 1, self.vectors.column(i).as_slice())
    }
}

/// Eigendecomposition after symmetrizing the input.
pub(crate) fn hermitian_eigen(m: &CMat) -> HermitianEigen {
    let sym = symmetrize(m);
    let se = sym.symmetric_eigen();
    let n = se.eigenvalues.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| {
        se.eigenvalues[a]
            .partial_cmp(&se.eigenvalues[b])
            .expect("finite eigenvalues")
    });
    let values: Vec<f64> = order.iter().map(|&i| se.eigenvalues[i]).collect();
    let mut vectors = CMat::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        vectors.set_column(dst, &se.eigenvectors.column(src));
    }
    HermitianEigen { values, vectors }
}

/// Spectral map `U f(Λ) U^H` of a Hermitian matrix.
pub(crate) fn hermitian_map(m: &CMat, f: impl Fn(f64) -> f64) -> CMat {
    let eig = hermitian_eigen(m);
    let diag = CMat::from_diagonal(&nalgebra::DVector::from_iterator(
        eig.values.len(),
        eig.values.iter().map(|&v| real(f(v))),
    ));
    &eig.vectors * diag * eig.vectors.adjoint()
}

/// Positive-semidefinite test: Hermitian within `tol`, and the smallest
/// eigenvalue at or above `-tol * max(1, ‖m‖)`.
pub(crate) fn is_psd(m: &CMat, tol: f64) -> bool {
    if !is_hermitian(m, tol) {
        return false;
    }
    let eig = hermitian_eigen(m);
    let scale = 1.0f64.max(eig.min().abs().max(eig.max().abs()));
    eig.min() >= -tol * scale
}

/// Kronecker product.
pub(crate) fn kron(a: &CMat, b: &CMat) -> CMat {
    a.kronecker(b)
}

/// Kronecker product rearranged for row-concatenated module coordinates.
///
/// `a` acts on a rank-`p` module block of algebra dimension `na` (so `a` is
/// `p*na` square) and `b` on a rank-`q` block of dimension `nb`. The result
/// acts on the rank-`p*q` product block of dimension `na*nb`, with composite
/// column index `((i*q + j)*na + c)*nb + d` for coordinate pair `(i, j)` and
/// intra-block entry `(c, d)`. This is the unique arrangement for which
/// applying the product operator to a tensor of module elements equals the
/// tensor of the individually transformed elements.
pub(crate) fn kron_shuffled(a: &CMat, b: &CMat, p: usize, q: usize, na: usize, nb: usize) -> CMat {
    debug_assert_eq!(a.nrows(), p * na);
    debug_assert_eq!(b.nrows(), q * nb);
    let dim = p * q * na * nb;
    let mut out = CMat::zeros(dim, dim);
    for i in 0..p {
        for j in 0..q {
            for c in 0..na {
                for d in 0..nb {
                    let row = ((i * q + j) * na + c) * nb + d;
                    for i2 in 0..p {
                        for j2 in 0..q {
                            for c2 in 0..na {
                                for d2 in 0..nb {
                                    let col = ((i2 * q + j2) * na + c2) * nb + d2;
                                    out[(row, col)] = a[(i * na + c, i2 * na + c2)]
                                        * b[(j * nb + d, j2 * nb + d2)];
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    out
}
