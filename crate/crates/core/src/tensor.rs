//! External tensor products of block algebras, modules, operators and
//! frames.
//!
//! All pairings are row-major with the left factor outermost: block pairs
//! `(k, l)`, coordinate pairs `(i, j)` and frame index pairs `(i, j)` all
//! enumerate the right factor fastest. The operator tensor uses the index
//! shuffle pinned down by the commutation identity
//! `(T ⊗ L)(x ⊗ y) = (Tx) ⊗ (Ly)`, which holds exactly in this layout.

use crate::algebra::{AlgebraElement, AlgebraSignature};
use crate::error::{CoreError, Result};
use crate::frame::{FrameBounds, OperatorFrame};
use crate::linalg::{self, CMat};
use crate::module::{ModuleElement, ModuleOperator, ModuleSpace};

/// Pairing data of a product algebra: which factor blocks feed each
/// product block, in row-major order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TensorLayout {
    left: AlgebraSignature,
    right: AlgebraSignature,
    product: AlgebraSignature,
}

impl TensorLayout {
    pub fn left(&self) -> &AlgebraSignature {
        &self.left
    }

    pub fn right(&self) -> &AlgebraSignature {
        &self.right
    }

    pub fn product_signature(&self) -> &AlgebraSignature {
        &self.product
    }

    /// Row-major `(left block, right block)` pairs.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let cols = self.right.num_blocks();
        (0..self.left.num_blocks() * cols).map(move |idx| (idx / cols, idx % cols))
    }

    fn check_factors(&self, a: &AlgebraSignature, b: &AlgebraSignature) -> Result<()> {
        if a != &self.left || b != &self.right {
            return Err(CoreError::SignatureMismatch {
                left: format!("{a} x {b}"),
                right: format!("{} x {} (layout)", self.left, self.right),
            });
        }
        Ok(())
    }
}

/// Product signature and layout of two block algebras.
pub fn tensor_algebra(
    left: &AlgebraSignature,
    right: &AlgebraSignature,
) -> (AlgebraSignature, TensorLayout) {
    let mut dims = Vec::with_capacity(left.num_blocks() * right.num_blocks());
    for &nk in left.block_dims() {
        for &nl in right.block_dims() {
            dims.push(nk * nl);
        }
    }
    let product = AlgebraSignature::new(dims).expect("factors are nonempty");
    (
        product.clone(),
        TensorLayout {
            left: left.clone(),
            right: right.clone(),
            product,
        },
    )
}

/// Elementary tensor of algebra elements: product block `(k, l)` is the
/// Kronecker product of the factor blocks.
pub fn tensor_element(
    a: &AlgebraElement,
    b: &AlgebraElement,
    layout: &TensorLayout,
) -> Result<AlgebraElement> {
    layout.check_factors(a.signature(), b.signature())?;
    let blocks = layout
        .pairs()
        .map(|(k, l)| linalg::kron(&a.blocks()[k], &b.blocks()[l]))
        .collect();
    AlgebraElement::from_blocks(layout.product.clone(), blocks)
}

/// Product module: rank `p·q` over the product algebra.
pub fn tensor_module(x: &ModuleSpace, y: &ModuleSpace) -> (ModuleSpace, TensorLayout) {
    let (product, layout) = tensor_algebra(x.signature(), y.signature());
    let space = ModuleSpace::new(product, x.rank() * y.rank()).expect("ranks are positive");
    (space, layout)
}

/// Elementary tensor of module elements, with coordinate pairs `(i, j)`
/// row-major. Inner products factor exactly:
/// `⟨x⊗y, x'⊗y'⟩ = ⟨x,x'⟩ ⊗ ⟨y,y'⟩`.
pub fn tensor_module_element(x: &ModuleElement, y: &ModuleElement) -> ModuleElement {
    let (space, layout) = tensor_module(x.space(), y.space());
    let p = x.space().rank();
    let q = y.space().rank();
    let blocks: Vec<CMat> = layout
        .pairs()
        .map(|(k, l)| {
            let xa = &x.blocks()[k];
            let yb = &y.blocks()[l];
            let na = x.space().signature().block_dims()[k];
            let nb = y.space().signature().block_dims()[l];
            let rows = na * nb;
            let mut out = CMat::zeros(rows, p * q * rows);
            for i in 0..p {
                for j in 0..q {
                    let xi = xa.view((0, i * na), (na, na));
                    let yj = yb.view((0, j * nb), (nb, nb));
                    let block = CMat::from(xi).kronecker(&CMat::from(yj));
                    out.view_mut((0, (i * q + j) * rows), (rows, rows))
                        .copy_from(&block);
                }
            }
            out
        })
        .collect();
    ModuleElement::from_blocks(space, blocks).expect("tensor shapes are valid")
}

/// Operator tensor on the product module: per block pair the shuffled
/// Kronecker product satisfying
/// `(T ⊗ L)(x ⊗ y) = (Tx) ⊗ (Ly)` exactly.
pub fn tensor_operator(t: &ModuleOperator, l: &ModuleOperator) -> ModuleOperator {
    let (space, layout) = tensor_module(t.space(), l.space());
    let p = t.space().rank();
    let q = l.space().rank();
    let blocks: Vec<CMat> = layout
        .pairs()
        .map(|(k, lb)| {
            let na = t.space().signature().block_dims()[k];
            let nb = l.space().signature().block_dims()[lb];
            linalg::kron_shuffled(&t.blocks()[k], &l.blocks()[lb], p, q, na, nb)
        })
        .collect();
    ModuleOperator::from_blocks(space, blocks).expect("tensor shapes are valid")
}

/// Tensor of two operator families, index pairs row-major. The product
/// family's frame operator is the operator tensor of the factor frame
/// operators, and optimal bounds multiply.
pub fn tensor_frame(
    f: &OperatorFrame,
    g: &OperatorFrame,
    tol: f64,
) -> (OperatorFrame, FrameBounds) {
    let (space, _) = tensor_module(f.space(), g.space());
    let mut ops = Vec::with_capacity(f.len() * g.len());
    for t in f.ops() {
        for l in g.ops() {
            ops.push(tensor_operator(t, l));
        }
    }
    let frame = OperatorFrame::new(space, ops).expect("factors are nonempty");
    let bounds = frame.optimal_bounds(tol);
    (frame, bounds)
}

/// Dual transfer: with `f_dual` a dual of `f` and `g_dual` a dual of `g`
/// (checked as a precondition and reported distinctly on failure), decides
/// whether the tensor of duals is a dual of the tensor frame.
pub fn tensor_dual_check(
    f: &OperatorFrame,
    f_dual: &OperatorFrame,
    g: &OperatorFrame,
    g_dual: &OperatorFrame,
    tol: f64,
) -> Result<bool> {
    if !f.verify_dual(f_dual, tol)? {
        return Err(CoreError::DualPrecondition {
            reason: format!(
                "left family's claimed dual fails with residual {:.3e}",
                f.dual_residual(f_dual)?
            ),
        });
    }
    if !g.verify_dual(g_dual, tol)? {
        return Err(CoreError::DualPrecondition {
            reason: format!(
                "right family's claimed dual fails with residual {:.3e}",
                g.dual_residual(g_dual)?
            ),
        });
    }
    let (product, _) = tensor_frame(f, g, tol);
    let (product_dual, _) = tensor_frame(f_dual, g_dual, tol);
    product.verify_dual(&product_dual, tol)
}
