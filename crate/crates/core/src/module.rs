//! Free Hilbert module of finite rank over the block algebra, together
//! with its adjointable operators.
//!
//! Elements are rows of algebra elements. Per block `k`, the `m`
//! coordinates are concatenated into one `n_k × (m·n_k)` matrix, and an
//! operator is an `(m·n_k)` square matrix acting by right multiplication.
//! With this convention left algebra-linearity of operators is structural,
//! the adjoint is the blockwise conjugate transpose, and the block matrix
//! of a composition `T∘U` is `matrix(U) · matrix(T)`.

use std::fmt;

use crate::algebra::{AlgebraElement, AlgebraSignature};
use crate::error::{CoreError, Result};
use crate::linalg::{self, CMat};

/// The free module of rank `m` over a block algebra.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ModuleSpace {
    signature: AlgebraSignature,
    rank: usize,
}

impl ModuleSpace {
    pub fn new(signature: AlgebraSignature, rank: usize) -> Result<Self> {
        if rank == 0 {
            return Err(CoreError::IncompatibleMap {
                reason: "module rank must be at least 1".into(),
            });
        }
        Ok(Self { signature, rank })
    }

    pub fn signature(&self) -> &AlgebraSignature {
        &self.signature
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn num_blocks(&self) -> usize {
        self.signature.num_blocks()
    }

    /// Dimension of operator block `k`: `m · n_k`.
    pub fn operator_dim(&self, k: usize) -> Result<usize> {
        Ok(self.rank * self.signature.block_dim(k)?)
    }

    pub(crate) fn check_same(&self, other: &Self) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(CoreError::SpaceMismatch {
                left: self.to_string(),
                right: other.to_string(),
            })
        }
    }
}

impl fmt::Display for ModuleSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "rank {} over {}", self.rank, self.signature)
    }
}

/// Module element: per block `k` an `n_k × (m·n_k)` matrix holding the
/// row-concatenated coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct ModuleElement {
    space: ModuleSpace,
    blocks: Vec<CMat>,
}

impl ModuleElement {
    pub fn from_blocks(space: ModuleSpace, blocks: Vec<CMat>) -> Result<Self> {
        if blocks.len() != space.num_blocks() {
            return Err(CoreError::LengthMismatch {
                got: blocks.len(),
                expected: space.num_blocks(),
            });
        }
        for (k, b) in blocks.iter().enumerate() {
            let n = space.signature().block_dims()[k];
            let cols = space.rank() * n;
            if b.nrows() != n || b.ncols() != cols {
                return Err(CoreError::ShapeMismatch {
                    what: format!("module element block {k}"),
                    expected: format!("{n}x{cols}"),
                    got: format!("{}x{}", b.nrows(), b.ncols()),
                });
            }
        }
        Ok(Self { space, blocks })
    }

    /// Builds an element from its `m` algebra-element coordinates.
    pub fn from_coordinates(space: ModuleSpace, coords: &[AlgebraElement]) -> Result<Self> {
        if coords.len() != space.rank() {
            return Err(CoreError::LengthMismatch {
                got: coords.len(),
                expected: space.rank(),
            });
        }
        for c in coords {
            space.signature().check_same(c.signature())?;
        }
        let mut blocks = Vec::with_capacity(space.num_blocks());
        for (k, &n) in space.signature().block_dims().iter().enumerate() {
            let mut b = CMat::zeros(n, space.rank() * n);
            for (i, c) in coords.iter().enumerate() {
                b.view_mut((0, i * n), (n, n)).copy_from(&c.blocks()[k]);
            }
            blocks.push(b);
        }
        Ok(Self { space, blocks })
    }

    pub fn zero(space: &ModuleSpace) -> Self {
        let blocks = space
            .signature()
            .block_dims()
            .iter()
            .map(|&n| CMat::zeros(n, space.rank() * n))
            .collect();
        Self {
            space: space.clone(),
            blocks,
        }
    }

    pub fn space(&self) -> &ModuleSpace {
        &self.space
    }

    pub fn blocks(&self) -> &[CMat] {
        &self.blocks
    }

    /// Splits the row back into its `m` algebra-element coordinates.
    pub fn coordinates(&self) -> Vec<AlgebraElement> {
        let m = self.space.rank();
        (0..m)
            .map(|i| {
                let blocks = self
                    .blocks
                    .iter()
                    .zip(self.space.signature().block_dims())
                    .map(|(b, &n)| CMat::from(b.view((0, i * n), (n, n))))
                    .collect();
                AlgebraElement::from_blocks(self.space.signature().clone(), blocks)
                    .expect("coordinate shapes are valid by construction")
            })
            .collect()
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.space.check_same(&other.space)?;
        Ok(Self {
            space: self.space.clone(),
            blocks: self
                .blocks
                .iter()
                .zip(&other.blocks)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.space.check_same(&other.space)?;
        Ok(Self {
            space: self.space.clone(),
            blocks: self
                .blocks
                .iter()
                .zip(&other.blocks)
                .map(|(a, b)| a - b)
                .collect(),
        })
    }

    pub fn scale(&self, factor: f64) -> Self {
        Self {
            space: self.space.clone(),
            blocks: self.blocks.iter().map(|b| b.map(|z| z * factor)).collect(),
        }
    }

    /// Left action of an algebra element: each coordinate is multiplied
    /// from the left, i.e. block `k` becomes `a_k · X_k`.
    pub fn algebra_action(&self, a: &AlgebraElement) -> Result<Self> {
        self.space.signature().check_same(a.signature())?;
        Ok(Self {
            space: self.space.clone(),
            blocks: self
                .blocks
                .iter()
                .zip(a.blocks())
                .map(|(x, ab)| ab * x)
                .collect(),
        })
    }

    /// Algebra-valued inner product, linear in the first variable:
    /// block `k` is `X_k · Y_k^H`.
    pub fn inner_product(&self, other: &Self) -> Result<AlgebraElement> {
        self.space.check_same(&other.space)?;
        let blocks = self
            .blocks
            .iter()
            .zip(&other.blocks)
            .map(|(x, y)| x * y.adjoint())
            .collect();
        AlgebraElement::from_blocks(self.space.signature().clone(), blocks)
    }

    /// Module seminorm of block `k`: the square root of the block seminorm
    /// of `⟨x, x⟩`, which equals the spectral norm of `X_k`.
    pub fn module_seminorm(&self, k: usize) -> Result<f64> {
        let b = self.blocks.get(k).ok_or(CoreError::BlockIndexOutOfRange {
            index: k,
            blocks: self.blocks.len(),
        })?;
        Ok(linalg::spectral_norm(b))
    }

    pub fn module_seminorms(&self) -> Vec<f64> {
        self.blocks.iter().map(linalg::spectral_norm).collect()
    }

    pub fn max_module_seminorm(&self) -> f64 {
        self.module_seminorms().into_iter().fold(0.0, f64::max)
    }
}

/// Adjointable operator on the free module: per block an `(m·n_k)` square
/// matrix acting on elements by right multiplication.
#[derive(Debug, Clone, PartialEq)]
pub struct ModuleOperator {
    space: ModuleSpace,
    blocks: Vec<CMat>,
}

impl ModuleOperator {
    pub fn from_blocks(space: ModuleSpace, blocks: Vec<CMat>) -> Result<Self> {
        if blocks.len() != space.num_blocks() {
            return Err(CoreError::LengthMismatch {
                got: blocks.len(),
                expected: space.num_blocks(),
            });
        }
        for (k, b) in blocks.iter().enumerate() {
            let d = space.operator_dim(k)?;
            if b.nrows() != d || b.ncols() != d {
                return Err(CoreError::ShapeMismatch {
                    what: format!("operator block {k}"),
                    expected: format!("{d}x{d}"),
                    got: format!("{}x{}", b.nrows(), b.ncols()),
                });
            }
        }
        Ok(Self { space, blocks })
    }

    pub fn identity(space: &ModuleSpace) -> Self {
        let blocks = (0..space.num_blocks())
            .map(|k| linalg::identity(space.operator_dim(k).expect("valid block")))
            .collect();
        Self {
            space: space.clone(),
            blocks,
        }
    }

    pub fn zero(space: &ModuleSpace) -> Self {
        let blocks = (0..space.num_blocks())
            .map(|k| {
                let d = space.operator_dim(k).expect("valid block");
                CMat::zeros(d, d)
            })
            .collect();
        Self {
            space: space.clone(),
            blocks,
        }
    }

    pub fn space(&self) -> &ModuleSpace {
        &self.space
    }

    pub fn blocks(&self) -> &[CMat] {
        &self.blocks
    }

    pub fn apply(&self, x: &ModuleElement) -> Result<ModuleElement> {
        self.space.check_same(x.space())?;
        let blocks = x
            .blocks()
            .iter()
            .zip(&self.blocks)
            .map(|(xb, mb)| xb * mb)
            .collect();
        ModuleElement::from_blocks(self.space.clone(), blocks)
    }

    pub fn adjoint(&self) -> Self {
        Self {
            space: self.space.clone(),
            blocks: self.blocks.iter().map(|b| b.adjoint()).collect(),
        }
    }

    /// Composition `self ∘ other` (apply `other` first). Under the row
    /// convention the block matrix is `matrix(other) · matrix(self)`.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        self.space.check_same(&other.space)?;
        Ok(Self {
            space: self.space.clone(),
            blocks: other
                .blocks
                .iter()
                .zip(&self.blocks)
                .map(|(u, t)| u * t)
                .collect(),
        })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.space.check_same(&other.space)?;
        Ok(Self {
            space: self.space.clone(),
            blocks: self
                .blocks
                .iter()
                .zip(&other.blocks)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.space.check_same(&other.space)?;
        Ok(Self {
            space: self.space.clone(),
            blocks: self
                .blocks
                .iter()
                .zip(&other.blocks)
                .map(|(a, b)| a - b)
                .collect(),
        })
    }

    pub fn scale(&self, factor: f64) -> Self {
        Self {
            space: self.space.clone(),
            blocks: self.blocks.iter().map(|b| b.map(|z| z * factor)).collect(),
        }
    }

    /// Operator seminorm at block `k`: the spectral norm of the block.
    pub fn seminorm(&self, k: usize) -> Result<f64> {
        let b = self.blocks.get(k).ok_or(CoreError::BlockIndexOutOfRange {
            index: k,
            blocks: self.blocks.len(),
        })?;
        Ok(linalg::spectral_norm(b))
    }

    /// Uniform norm: the largest operator seminorm across blocks.
    pub fn uniform_norm(&self) -> f64 {
        self.blocks
            .iter()
            .map(linalg::spectral_norm)
            .fold(0.0, f64::max)
    }

    /// Smallest singular value across blocks.
    pub fn min_singular_value(&self) -> f64 {
        self.blocks
            .iter()
            .map(linalg::min_singular_value)
            .fold(f64::INFINITY, f64::min)
    }

    pub fn self_adjoint_deviation(&self) -> f64 {
        self.blocks
            .iter()
            .map(linalg::hermitian_deviation)
            .fold(0.0, f64::max)
    }

    pub fn is_self_adjoint(&self, tol: f64) -> bool {
        self.blocks.iter().all(|b| linalg::is_hermitian(b, tol))
    }

    /// Positivity of the operator: every block Hermitian PSD within `tol`.
    /// In this model that is equivalent to `⟨Tx, x⟩ ≥ 0` for all `x`.
    pub fn is_positive(&self, tol: f64) -> bool {
        self.blocks.iter().all(|b| linalg::is_psd(b, tol))
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
            blocks.push(linalg::hermitian_map(b, |v| f(v.max(0.0))));
        }
        Ok(Self {
            space: self.space.clone(),
            blocks,
        })
    }

    pub fn sqrt(&self, tol: f64) -> Result<Self> {
        self.positive_map(tol, false, f64::sqrt)
    }

    pub fn inv(&self, tol: f64) -> Result<Self> {
        self.positive_map(tol, true, |v| 1.0 / v)
    }

    pub fn inv_sqrt(&self, tol: f64) -> Result<Self> {
        self.positive_map(tol, true, |v| 1.0 / v.sqrt())
    }

    fn require_invertible(&self, tol: f64) -> Result<()> {
        for (k, b) in self.blocks.iter().enumerate() {
            let smin = linalg::min_singular_value(b);
            let smax = linalg::spectral_norm(b);
            if smin <= tol * 1.0f64.max(smax) {
                return Err(CoreError::NotInvertible {
                    block: k,
                    floor: smin,
                    threshold: tol * 1.0f64.max(smax),
                });
            }
        }
        Ok(())
    }

    /// Checks the two-sided comparison
    /// `‖T⁻¹‖∞⁻² ⟨x,x⟩ ≤ ⟨Tx,Tx⟩ ≤ ‖T‖∞² ⟨x,x⟩`
    /// for one element, by positivity of both differences per block.
    pub fn sandwich_check(&self, x: &ModuleElement, tol: f64) -> Result<bool> {
        self.space.check_same(x.space())?;
        self.require_invertible(tol)?;
        let lower = self
            .blocks
            .iter()
            .map(linalg::min_singular_value)
            .fold(f64::INFINITY, f64::min)
            .powi(2);
        let upper = self.uniform_norm().powi(2);
        let tx = self.apply(x)?;
        let gram_x = x.inner_product(x)?;
        let gram_tx = tx.inner_product(&tx)?;
        let ok_lower = gram_x.scale(lower).order_leq(&gram_tx, tol)?;
        let ok_upper = gram_tx.order_leq(&gram_x.scale(upper), tol)?;
        Ok(ok_lower && ok_upper)
    }

    /// For a self-adjoint operator, the extremal constants `(m', M')`
    /// with `m'⟨x,x⟩ ≤ ⟨Tx,Tx⟩ ≤ M'⟨x,x⟩`, i.e. the squared extreme
    /// singular values across blocks. Returns `None` when the operator
    /// is not surjective (some block numerically singular).
    pub fn surjectivity_bounds(&self, tol: f64) -> Result<Option<(f64, f64)>> {
        for (k, b) in self.blocks.iter().enumerate() {
            if !linalg::is_hermitian(b, tol) {
                return Err(CoreError::NotSelfAdjoint {
                    block: k,
                    deviation: linalg::hermitian_deviation(b),
                });
            }
        }
        let mut smin = f64::INFINITY;
        let mut smax = 0.0f64;
        for b in &self.blocks {
            smin = smin.min(linalg::min_singular_value(b));
            smax = smax.max(linalg::spectral_norm(b));
        }
        if smin <= tol * 1.0f64.max(smax) {
            return Ok(None);
        }
        Ok(Some((smin * smin, smax * smax)))
    }
}

/// Finite ordered family of module elements (the finite model of the
/// square-summable coefficient space).
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientSequence {
    space: ModuleSpace,
    items: Vec<ModuleElement>,
}

impl CoefficientSequence {
    pub fn new(space: ModuleSpace, items: Vec<ModuleElement>) -> Result<Self> {
        for item in &items {
            space.check_same(item.space())?;
        }
        Ok(Self { space, items })
    }

    pub fn space(&self) -> &ModuleSpace {
        &self.space
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn items(&self) -> &[ModuleElement] {
        &self.items
    }

    /// Sum of termwise inner products, the coefficient-space pairing.
    pub fn pairing(&self, other: &Self) -> Result<AlgebraElement> {
        self.space.check_same(&other.space)?;
        if self.items.len() != other.items.len() {
            return Err(CoreError::LengthMismatch {
                got: other.items.len(),
                expected: self.items.len(),
            });
        }
        let mut acc = AlgebraElement::zero(self.space.signature());
        for (x, y) in self.items.iter().zip(&other.items) {
            acc = acc.add(&x.inner_product(y)?)?;
        }
        Ok(acc)
    }
}
