#![allow(clippy::needless_range_loop)]

//! Independent numerical oracle for the integration suites.
//!
//! Nothing here calls into the crate's linear algebra: matrices are plain
//! nested vectors with hand-rolled arithmetic, and eigenvalues come from a
//! cyclic complex Jacobi iteration. The crate's types are only read
//! entrywise. This keeps every cross-check on a separate computational
//! path from the implementation it judges.

use num_complex::Complex64;
use proframe_core::{AlgebraElement, CMat, ModuleElement, OperatorFrame};

pub type C64 = Complex64;

/// Dense complex matrix as nested vectors, row major.
#[derive(Debug, Clone, PartialEq)]
pub struct Naive {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<Vec<C64>>,
}

impl Naive {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![vec![C64::new(0.0, 0.0); cols]; rows],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i][i] = C64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_cmat(m: &CMat) -> Self {
        let mut out = Self::zeros(m.nrows(), m.ncols());
        for i in 0..m.nrows() {
            for j in 0..m.ncols() {
                out.data[i][j] = m[(i, j)];
            }
        }
        out
    }

    pub fn mul(&self, other: &Naive) -> Naive {
        assert_eq!(self.cols, other.rows);
        let mut out = Naive::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.data[i][k];
                if a.norm_sqr() == 0.0 {
                    continue;
                }
                for j in 0..other.cols {
                    out.data[i][j] += a * other.data[k][j];
                }
            }
        }
        out
    }

    pub fn adjoint(&self) -> Naive {
        let mut out = Naive::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.data[j][i] = self.data[i][j].conj();
            }
        }
        out
    }

    pub fn add(&self, other: &Naive) -> Naive {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut out = self.clone();
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.data[i][j] += other.data[i][j];
            }
        }
        out
    }

    pub fn sub(&self, other: &Naive) -> Naive {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut out = self.clone();
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.data[i][j] -= other.data[i][j];
            }
        }
        out
    }

    pub fn scale(&self, factor: f64) -> Naive {
        let mut out = self.clone();
        for row in &mut out.data {
            for z in row {
                *z *= factor;
            }
        }
        out
    }

    pub fn frobenius(&self) -> f64 {
        self.data
            .iter()
            .flatten()
            .map(|z| z.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// Gram matrix `self · self^H`.
    pub fn gram(&self) -> Naive {
        self.mul(&self.adjoint())
    }

    /// Spectral norm through the Hermitian Gram spectrum.
    pub fn spectral_norm(&self) -> f64 {
        let eigs = jacobi_eigenvalues(&self.gram());
        eigs.last().copied().unwrap_or(0.0).max(0.0).sqrt()
    }
}

/// Eigenvalues of a Hermitian matrix by cyclic complex Jacobi rotations,
/// ascending.
pub fn jacobi_eigenvalues(m: &Naive) -> Vec<f64> {
    jacobi(m).0
}

/// Eigenvalues (ascending) and matching eigenvector columns.
pub fn jacobi(m: &Naive) -> (Vec<f64>, Naive) {
    assert_eq!(m.rows, m.cols);
    let n = m.rows;
    let mut h = m.data.clone();
    // enforce exact Hermitian symmetry of the working copy
    for i in 0..n {
        h[i][i] = C64::new(h[i][i].re, 0.0);
        for j in (i + 1)..n {
            let avg = (h[i][j] + h[j][i].conj()) * 0.5;
            h[i][j] = avg;
            h[j][i] = avg.conj();
        }
    }
    let mut v = Naive::identity(n);
    let scale: f64 = h
        .iter()
        .flatten()
        .map(|z| z.norm())
        .fold(0.0, f64::max)
        .max(1.0);
    for _sweep in 0..60 {
        let mut off = 0.0f64;
        for p in 0..n {
            for q in (p + 1)..n {
                off += h[p][q].norm_sqr();
            }
        }
        if off.sqrt() <= 1e-14 * scale {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = h[p][q];
                let r = apq.norm();
                if r <= 1e-300 {
                    continue;
                }
                let phase = apq / r;
                let app = h[p][p].re;
                let aqq = h[q][q].re;
                let tau = (aqq - app) / (2.0 * r);
                let t = tau.signum() / (tau.abs() + (1.0 + tau * tau).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                // columns: col_p ← c·col_p − s·conj(phase)·col_q
                //          col_q ← s·phase·col_p + c·col_q
                for i in 0..n {
                    let hip = h[i][p];
                    let hiq = h[i][q];
                    h[i][p] = hip * c - hiq * s * phase.conj();
                    h[i][q] = hip * s * phase + hiq * c;
                    let vip = v.data[i][p];
                    let viq = v.data[i][q];
                    v.data[i][p] = vip * c - viq * s * phase.conj();
                    v.data[i][q] = vip * s * phase + viq * c;
                }
                // rows:    row_p ← c·row_p − s·phase·row_q
                //          row_q ← s·conj(phase)·row_p + c·row_q
                for j in 0..n {
                    let hpj = h[p][j];
                    let hqj = h[q][j];
                    h[p][j] = hpj * c - hqj * s * phase;
                    h[q][j] = hpj * s * phase.conj() + hqj * c;
                }
            }
        }
    }
    let mut pairs: Vec<(f64, usize)> = (0..n).map(|i| (h[i][i].re, i)).collect();
    pairs.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("finite eigenvalues"));
    let values: Vec<f64> = pairs.iter().map(|&(val, _)| val).collect();
    let mut vectors = Naive::zeros(n, n);
    for (dst, &(_, src)) in pairs.iter().enumerate() {
        for i in 0..n {
            vectors.data[i][dst] = v.data[i][src];
        }
    }
    (values, vectors)
}

/// Smallest eigenvalue of a Hermitian matrix.
pub fn min_eig(m: &Naive) -> f64 {
    jacobi_eigenvalues(m)[0]
}

/// PSD check relative to the matrix scale.
pub fn is_psd(m: &Naive, tol: f64) -> bool {
    let eigs = jacobi_eigenvalues(m);
    let scale = 1.0f64
        .max(eigs[0].abs())
        .max(eigs.last().copied().unwrap_or(0.0).abs());
    eigs[0] >= -tol * scale
}

pub fn elem_blocks(x: &ModuleElement) -> Vec<Naive> {
    x.blocks().iter().map(Naive::from_cmat).collect()
}

pub fn alg_blocks(a: &AlgebraElement) -> Vec<Naive> {
    a.blocks().iter().map(Naive::from_cmat).collect()
}

/// Frame operator recomputed from scratch: per block `Σ_i M_i · M_i^H`.
pub fn frame_operator_blocks(frame: &OperatorFrame) -> Vec<Naive> {
    let blocks = frame.space().num_blocks();
    (0..blocks)
        .map(|k| {
            let mut acc: Option<Naive> = None;
            for op in frame.ops() {
                let m = Naive::from_cmat(&op.blocks()[k]);
                let g = m.gram();
                acc = Some(match acc {
                    Some(a) => a.add(&g),
                    None => g,
                });
            }
            acc.expect("frame is nonempty")
        })
        .collect()
}

/// Frame energy `Σ_i ⟨T_i x, T_i x⟩` recomputed from scratch per block.
pub fn frame_energy_blocks(frame: &OperatorFrame, x: &ModuleElement) -> Vec<Naive> {
    let xb = elem_blocks(x);
    let blocks = frame.space().num_blocks();
    (0..blocks)
        .map(|k| {
            let mut acc = Naive::zeros(xb[k].rows, xb[k].rows);
            for op in frame.ops() {
                let m = Naive::from_cmat(&op.blocks()[k]);
                let tx = xb[k].mul(&m);
                acc = acc.add(&tx.gram());
            }
            acc
        })
        .collect()
}

/// Gram blocks `⟨x, x⟩` recomputed from scratch.
pub fn gram_blocks(x: &ModuleElement) -> Vec<Naive> {
    elem_blocks(x).iter().map(Naive::gram).collect()
}

#[allow(dead_code)]
/// Naive counterpart of the module-coordinate Kronecker shuffle.
pub fn kron_shuffled(a: &Naive, b: &Naive, p: usize, q: usize, na: usize, nb: usize) -> Naive {
    let dim = p * q * na * nb;
    let mut out = Naive::zeros(dim, dim);
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
                                    out.data[row][col] = a.data[i * na + c][i2 * na + c2]
                                        * b.data[j * nb + d][j2 * nb + d2];
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

#[cfg(test)]
mod self_checks {
    use super::*;

    #[test]
    fn jacobi_matches_closed_form() {
        // [[2,1],[1,1]] has eigenvalues (3 ± √5)/2
        let mut m = Naive::zeros(2, 2);
        m.data[0][0] = C64::new(2.0, 0.0);
        m.data[0][1] = C64::new(1.0, 0.0);
        m.data[1][0] = C64::new(1.0, 0.0);
        m.data[1][1] = C64::new(1.0, 0.0);
        let eigs = jacobi_eigenvalues(&m);
        assert!((eigs[0] - (3.0 - 5f64.sqrt()) / 2.0).abs() < 1e-12);
        assert!((eigs[1] - (3.0 + 5f64.sqrt()) / 2.0).abs() < 1e-12);
    }

    #[test]
    fn jacobi_handles_complex_hermitian() {
        // [[2, i],[-i, 3]]: eigenvalues (5 ± √5)/2
        let mut m = Naive::zeros(2, 2);
        m.data[0][0] = C64::new(2.0, 0.0);
        m.data[0][1] = C64::new(0.0, 1.0);
        m.data[1][0] = C64::new(0.0, -1.0);
        m.data[1][1] = C64::new(3.0, 0.0);
        let (eigs, vecs) = jacobi(&m);
        assert!((eigs[0] - (5.0 - 5f64.sqrt()) / 2.0).abs() < 1e-12);
        assert!((eigs[1] - (5.0 + 5f64.sqrt()) / 2.0).abs() < 1e-12);
        // eigenvector property: ‖M v − λ v‖ ≈ 0
        for idx in 0..2 {
            let mut vcol = Naive::zeros(2, 1);
            for i in 0..2 {
                vcol.data[i][0] = vecs.data[i][idx];
            }
            let residual = m.mul(&vcol).sub(&vcol.scale(eigs[idx]));
            assert!(residual.frobenius() < 1e-12);
        }
    }
}
