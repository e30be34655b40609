//! Block-matrix model of a unital pro-C*-algebra.
//!
//! The algebra is a finite product of complex matrix algebras. An element
//! stores one square matrix per block, and every block carries one
//! C*-seminorm: the spectral norm of that block. Statements quantified over
//! all continuous seminorms therefore become finite conjunctions over
//! blocks. Positivity, order, Hermitian spectra and the positive functional
//! calculus are all evaluated blockwise.

use std::fmt;

use crate::error::{CoreError, Result};
use crate::linalg::{self, CMat};

/// Block dimensions `(n_1, …, n_K)` of a product of matrix algebras.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AlgebraSignature {
    block_dims: Vec<usize>,
}

impl AlgebraSignature {
    /// At least one block; every block dimension at least one.
    pub fn new(block_dims: Vec<usize>) -> Result<Self> {
        if block_dims.is_empty() || block_dims.contains(&0) {
            return Err(CoreError::IncompatibleMap {
                reason: "signature needs at least one block of dimension >= 1".into(),
            });
        }
        Ok(Self { block_dims })
    }

    pub fn block_dims(&self) -> &[usize] {
        &self.block_dims
    }

    pub fn num_blocks(&self) -> usize {
        self.block_dims.len()
    }

    pub fn block_dim(&self, k: usize) -> Result<usize> {
        self.block_dims
            .get(k)
            .copied()
            .ok_or(CoreError::BlockIndexOutOfRange {
                index: k,
                blocks: self.block_dims.len(),
            })
    }

    pub(crate) fn check_same(&self, other: &Self) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(CoreError::SignatureMismatch {
                left: self.to_string(),
                right: other.to_string(),
            })
        }
    }
}

impl fmt::Display for AlgebraSignature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, n) in self.block_dims.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{n}")?;
        }
        write!(f, ")")
    }
}

/// Element of the product algebra: one complex `n_k × n_k` matrix per block.
#[derive(Debug, Clone, PartialEq)]
pub struct AlgebraElement {
    signature: AlgebraSignature,
    blocks: Vec<CMat>,
}

impl AlgebraElement {
    pub fn from_blocks(signature: AlgebraSignature, blocks: Vec<CMat>) -> Result<Self> {
        if blocks.len() != signature.num_blocks() {
            return Err(CoreError::LengthMismatch {
                got: blocks.len(),
                expected: signature.num_blocks(),
            });
        }
        for (k, b) in blocks.iter().enumerate() {
            let n = signature.block_dims()[k];
            if b.nrows() != n || b.ncols() != n {
                return Err(CoreError::ShapeMismatch {
                    what: format!("algebra block {k}"),
                    expected: format!("{n}x{n}"),
                    got: format!("{}x{}", b.nrows(), b.ncols()),
                });
            }
        }
        Ok(Self { signature, blocks })
    }

    pub fn zero(signature: &AlgebraSignature) -> Self {
        let blocks = signature
            .block_dims()
            .iter()
            .map(|&n| CMat::zeros(n, n))
            .collect();
        Self {
            signature: signature.clone(),
            blocks,
        }
    }

    /// The unit: identity in every block, so every seminorm of it is 1.
    pub fn unit(signature: &AlgebraSignature) -> Self {
        let blocks = signature
            .block_dims()
            .iter()
            .map(|&n| linalg::identity(n))
            .collect();
        Self {
            signature: signature.clone(),
            blocks,
        }
    }

    pub fn signature(&self) -> &AlgebraSignature {
        &self.signature
    }

    pub fn blocks(&self) -> &[CMat] {
        &self.blocks
    }

    pub fn block(&self, k: usize) -> Result<&CMat> {
        self.blocks.get(k).ok_or(CoreError::BlockIndexOutOfRange {
            index: k,
            blocks: self.blocks.len(),
        })
    }

    fn zip_with(&self, other: &Self, f: impl Fn(&CMat, &CMat) -> CMat) -> Result<Self> {
        self.signature.check_same(&other.signature)?;
        let blocks = self
            .blocks
            .iter()
            .zip(&other.blocks)
            .map(|(a, b)| f(a, b))
            .collect();
        Ok(Self {
            signature: self.signature.clone(),
            blocks,
        })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a * b)
    }

    /// Blockwise conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self {
            signature: self.signature.clone(),
            blocks: self.blocks.iter().map(|b| b.adjoint()).collect(),
        }
    }

    pub fn scale(&self, factor: f64) -> Self {
        Self {
            signature: self.signature.clone(),
            blocks: self.blocks.iter().map(|b| b.map(|z| z * factor)).collect(),
        }
    }

    /// The C*-seminorm of block `k`: its spectral norm.
    pub fn seminorm(&self, k: usize) -> Result<f64> {
        Ok(linalg::spectral_norm(self.block(k)?))
    }

    pub fn seminorms(&self) -> Vec<f64> {
        self.blocks.iter().map(linalg::spectral_norm).collect()
    }

    /// Largest seminorm across blocks.
    pub fn max_seminorm(&self) -> f64 {
        self.seminorms().into_iter().fold(0.0, f64::max)
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.blocks.iter().all(|b| linalg::is_hermitian(b, tol))
    }

    /// Positivity: every block Hermitian within `tol` and with smallest
    /// eigenvalue at or above `-tol * max(1, seminorm)`. Non-Hermitian
    /// input yields `false`, never an error.
    pub fn is_positive(&self, tol: f64) -> bool {
        self.blocks.iter().all(|b| linalg::is_psd(b, tol))
    }

    /// Order comparison `self ≤ other`, i.e. `other - self` is positive.
    pub fn order_leq(&self, other: &Self, tol: f64) -> Result<bool> {
        Ok(other.sub(self)?.is_positive(tol))
    }

    /// Ascending real eigenvalues per block. The union over blocks is the
    /// spectrum of a Hermitian element in this model.
    pub fn hermitian_spectrum(&self, tol: f64) -> Result<Vec<Vec<f64>>> {
        for (k, b) in self.blocks.iter().enumerate() {
            if !linalg::is_hermitian(b, tol) {
                return Err(CoreError::HermitianRequired {
                    block: k,
                    deviation: linalg::hermitian_deviation(b),
                    tol,
                });
            }
        }
        Ok(self
            .blocks
            .iter()
            .map(|b| linalg::hermitian_eigen(b).values)
            .collect())
    }

    fn positive_map(&self, tol: f64, needs_inverse: bool, f: impl Fn(f64) -> f64) -> Result<Self> {
        let mut blocks = Vec::with_capacity(self.blocks.len());
        for (k, b) in self.blocks.iter().enumerate() {
            if !linalg::is_hermitian(b, tol) {
                return Err(CoreError::HermitianRequired {
                    block: k,
                    deviation: linalg::hermitian_deviation(b),
                    tol,
                });
            }
            let eig = linalg::hermitian_eigen(b);
            let scale = 1.0f64.max(eig.max().abs());
            if eig.min() < -tol * scale {
                return Err(CoreError::NotPositive {
                    block: k,
                    eigenvalue: eig.min(),
                });
            }
            if needs_inverse && eig.min() <= tol * scale {
                return Err(CoreError::NotInvertible {
                    block: k,
                    floor: eig.min(),
                    threshold: tol * scale,
                });
            }
            // Clamp eigensolver noise below zero before applying f.
            blocks.push(linalg::hermitian_map(b, |v| f(v.max(0.0))));
        }
        Ok(Self {
            signature: self.signature.clone(),
            blocks,
        })
    }

    /// Positive square root via blockwise spectral calculus.
    pub fn sqrt(&self, tol: f64) -> Result<Self> {
        self.positive_map(tol, false, f64::sqrt)
    }

    /// Inverse of a positive invertible element.
    pub fn inv(&self, tol: f64) -> Result<Self> {
        self.positive_map(tol, true, |v| 1.0 / v)
    }

    /// Inverse square root of a positive invertible element.
    pub fn inv_sqrt(&self, tol: f64) -> Result<Self> {
        self.positive_map(tol, true, |v| 1.0 / v.sqrt())
    }
}

/// Unital *-homomorphism between two block algebras: a reindexing of
/// blocks composed with a unitary conjugation in each target block.
///
/// Target block `l` is produced from source block `σ(l)` as
/// `U_l · a_{σ(l)} · U_l^H`. This class is closed under composition,
/// supports amplifications and projections onto sub-products, and every
/// member is automatically unital, multiplicative and adjoint-preserving.
#[derive(Debug, Clone)]
pub struct BlockHom {
    source: AlgebraSignature,
    target: AlgebraSignature,
    block_map: Vec<usize>,
    conjugators: Vec<CMat>,
}

impl BlockHom {
    /// Validates dimensions and unitarity of the conjugators within `tol`.
    pub fn new(
        source: AlgebraSignature,
        target: AlgebraSignature,
        block_map: Vec<usize>,
        conjugators: Vec<CMat>,
        tol: f64,
    ) -> Result<Self> {
        if block_map.len() != target.num_blocks() {
            return Err(CoreError::LengthMismatch {
                got: block_map.len(),
                expected: target.num_blocks(),
            });
        }
        if conjugators.len() != target.num_blocks() {
            return Err(CoreError::LengthMismatch {
                got: conjugators.len(),
                expected: target.num_blocks(),
            });
        }
        for (l, &src) in block_map.iter().enumerate() {
            let n_src = source.block_dim(src)?;
            let n_tgt = target.block_dims()[l];
            if n_src != n_tgt {
                return Err(CoreError::IncompatibleMap {
                    reason: format!(
                        "target block {l} has dim {n_tgt} but source block {src} has dim {n_src}"
                    ),
                });
            }
            let u = &conjugators[l];
            if u.nrows() != n_tgt || u.ncols() != n_tgt {
                return Err(CoreError::ShapeMismatch {
                    what: format!("conjugator {l}"),
                    expected: format!("{n_tgt}x{n_tgt}"),
                    got: format!("{}x{}", u.nrows(), u.ncols()),
                });
            }
            let dev = (u * u.adjoint() - linalg::identity(n_tgt)).norm();
            if dev > tol.max(1e-9) * (n_tgt as f64) {
                return Err(CoreError::NotUnitary {
                    what: "block conjugator".into(),
                    block: l,
                    deviation: dev,
                });
            }
        }
        Ok(Self {
            source,
            target,
            block_map,
            conjugators,
        })
    }

    /// The identity homomorphism of a signature.
    pub fn identity(signature: &AlgebraSignature) -> Self {
        let block_map = (0..signature.num_blocks()).collect();
        let conjugators = signature
            .block_dims()
            .iter()
            .map(|&n| linalg::identity(n))
            .collect();
        Self {
            source: signature.clone(),
            target: signature.clone(),
            block_map,
            conjugators,
        }
    }

    /// Reindexing-only homomorphism with identity conjugators.
    ///
    /// `block_map[l]` names the source block feeding target block `l`;
    /// use a permutation for block swaps or a constant map for
    /// amplification onto several copies of one block.
    pub fn reindexing(source: &AlgebraSignature, block_map: Vec<usize>) -> Result<Self> {
        let mut dims = Vec::with_capacity(block_map.len());
        for &src in &block_map {
            dims.push(source.block_dim(src)?);
        }
        let target = AlgebraSignature::new(dims)?;
        let conjugators = target
            .block_dims()
            .iter()
            .map(|&n| linalg::identity(n))
            .collect();
        Ok(Self {
            source: source.clone(),
            target,
            block_map,
            conjugators,
        })
    }

    pub fn source(&self) -> &AlgebraSignature {
        &self.source
    }

    pub fn target(&self) -> &AlgebraSignature {
        &self.target
    }

    pub fn block_map(&self) -> &[usize] {
        &self.block_map
    }

    pub fn conjugators(&self) -> &[CMat] {
        &self.conjugators
    }

    /// Applies the homomorphism to an element of the source algebra.
    pub fn apply(&self, a: &AlgebraElement) -> Result<AlgebraElement> {
        self.source.check_same(a.signature())?;
        let blocks = self
            .block_map
            .iter()
            .zip(&self.conjugators)
            .map(|(&src, u)| u * &a.blocks()[src] * u.adjoint())
            .collect();
        AlgebraElement::from_blocks(self.target.clone(), blocks)
    }
}
