//! Numerical workbench for operator frames on free Hilbert modules over
//! finite products of complex matrix algebras.
//!
//! The algebra is a product of matrix blocks, one C*-seminorm (the block
//! spectral norm) per block. Modules are free of finite rank, with per-block
//! row-concatenated coordinates; adjointable operators act by right
//! multiplication. On top of that sit operator frames with their frame
//! operator, optimal bounds, canonical duals, perturbation analysis, tensor
//! products and fusion (weighted projection) systems.
//!
//! Everything is pure and deterministic: values are immutable after
//! construction, iteration orders are fixed, and seeded generators produce
//! bitwise identical output for identical seeds.

pub mod algebra;
pub mod error;
pub mod frame;
pub mod fusion;
mod linalg;
pub mod module;
pub mod perturb;
pub mod sampling;
pub mod tensor;

pub use algebra::{AlgebraElement, AlgebraSignature, BlockHom};
pub use error::{CoreError, Result};
pub use frame::{
    classify_family, gen_frame, vector_frame_lift, FrameBounds, FrameClass, GenMode, OperatorFrame,
    ThetaMap,
};
pub use fusion::{CentralWeight, FusionSystem, SubmoduleProjection};
pub use linalg::CMat;
pub use module::{CoefficientSequence, ModuleElement, ModuleOperator, ModuleSpace};
pub use perturb::{
    deviation_constants, deviation_extremal_element, equivalence_check, perturb_check,
    DeviationConstants, PerturbationReport,
};
pub use tensor::{
    tensor_algebra, tensor_dual_check, tensor_element, tensor_frame, tensor_module,
    tensor_module_element, tensor_operator, TensorLayout,
};
