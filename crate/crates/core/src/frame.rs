//! Operator frames: frame operator, optimal bounds, classification,
//! reconstruction, duals, right composition, transport along an algebra
//! homomorphism, vector-frame lifts and seeded generation.
//!
//! The optimal bounds of a family are the extreme eigenvalues of the frame
//! operator across blocks: per block, the two-sided comparison of the frame
//! inequality against `⟨x,x⟩` holds for every element exactly when the
//! shifted frame-operator block stays positive semidefinite, so the
//! eigenvalue extremes are the sharp constants.

use crate::algebra::{AlgebraElement, AlgebraSignature, BlockHom};
use crate::error::{CoreError, Result};
use crate::linalg::{self, CMat};
use crate::module::{CoefficientSequence, ModuleElement, ModuleOperator, ModuleSpace};
use crate::sampling::{
    complex_gaussian, random_module_element, random_operator, rng_from_seed, SeededRng,
};

/// Lower and upper constants of the frame inequality.
#[derive(Debug, Clone, PartialEq)]
pub struct FrameBounds {
    lower: f64,
    upper: f64,
    optimal: bool,
    tol: f64,
}

impl FrameBounds {
    pub fn new(lower: f64, upper: f64, optimal: bool, tol: f64) -> Result<Self> {
        let lower = lower.max(0.0);
        let upper = upper.max(0.0);
        if lower > upper + tol.max(0.0) {
            return Err(CoreError::IncompatibleMap {
                reason: format!("frame bounds must satisfy lower <= upper, got ({lower}, {upper})"),
            });
        }
        Ok(Self {
            lower,
            upper: upper.max(lower),
            optimal,
            tol,
        })
    }

    pub fn lower(&self) -> f64 {
        self.lower
    }

    pub fn upper(&self) -> f64 {
        self.upper
    }

    pub fn is_optimal(&self) -> bool {
        self.optimal
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }
}

/// Classification of an operator family by its optimal bounds.
///
/// Every nonempty finite family satisfies an upper inequality, so the only
/// failure mode is a vanishing lower bound. The degenerate variant is
/// reserved for empty or invalid input that cannot carry bounds at all.
#[derive(Debug, Clone, PartialEq)]
pub enum FrameClass {
    NonBesselDegenerate,
    BesselOnly,
    Frame,
    Tight { lambda: f64 },
    Parseval,
}

impl FrameClass {
    /// Classifies from optimal bounds.
    pub fn from_bounds(bounds: &FrameBounds, tol: f64) -> Self {
        let (a, b) = (bounds.lower(), bounds.upper());
        if a <= tol {
            return FrameClass::BesselOnly;
        }
        if (a - b).abs() <= tol * 1.0f64.max(b) {
            if (a - 1.0).abs() <= tol {
                return FrameClass::Parseval;
            }
            return FrameClass::Tight {
                lambda: 0.5 * (a + b),
            };
        }
        FrameClass::Frame
    }

    pub fn is_frame(&self) -> bool {
        matches!(
            self,
            FrameClass::Frame | FrameClass::Tight { .. } | FrameClass::Parseval
        )
    }
}

impl std::fmt::Display for FrameClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            FrameClass::NonBesselDegenerate => write!(f, "degenerate"),
            FrameClass::BesselOnly => write!(f, "bessel_only"),
            FrameClass::Frame => write!(f, "frame"),
            FrameClass::Tight { lambda } => write!(f, "tight({lambda:.6})"),
            FrameClass::Parseval => write!(f, "parseval"),
        }
    }
}

/// Finite ordered family of adjointable operators on one module.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorFrame {
    space: ModuleSpace,
    ops: Vec<ModuleOperator>,
}

impl OperatorFrame {
    pub fn new(space: ModuleSpace, ops: Vec<ModuleOperator>) -> Result<Self> {
        if ops.is_empty() {
            return Err(CoreError::EmptyFamily);
        }
        for op in &ops {
            space.check_same(op.space())?;
        }
        Ok(Self { space, ops })
    }

    pub fn space(&self) -> &ModuleSpace {
        &self.space
    }

    pub fn ops(&self) -> &[ModuleOperator] {
        &self.ops
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    /// The frame operator: per block `Σ_i M_{i,k} M_{i,k}^H`, symmetrized
    /// against accumulation noise. Always Hermitian PSD, and equal to the
    /// composition of synthesis after analysis.
    pub fn frame_operator(&self) -> ModuleOperator {
        let blocks: Vec<CMat> = (0..self.space.num_blocks())
            .map(|k| {
                let d = self.space.operator_dim(k).expect("valid block");
                let mut acc = CMat::zeros(d, d);
                for op in &self.ops {
                    let m = &op.blocks()[k];
                    acc += m * m.adjoint();
                }
                linalg::symmetrize(&acc)
            })
            .collect();
        ModuleOperator::from_blocks(self.space.clone(), blocks).expect("shapes preserved")
    }

    /// Applies every frame operator to `x` in index order.
    pub fn analysis(&self, x: &ModuleElement) -> Result<CoefficientSequence> {
        self.space.check_same(x.space())?;
        let items = self
            .ops
            .iter()
            .map(|t| t.apply(x))
            .collect::<Result<Vec<_>>>()?;
        CoefficientSequence::new(self.space.clone(), items)
    }

    /// `Σ_i T_i^* c_i`, the adjoint of analysis.
    pub fn synthesis(&self, coeffs: &CoefficientSequence) -> Result<ModuleElement> {
        self.space.check_same(coeffs.space())?;
        if coeffs.len() != self.ops.len() {
            return Err(CoreError::LengthMismatch {
                got: coeffs.len(),
                expected: self.ops.len(),
            });
        }
        let mut acc = ModuleElement::zero(&self.space);
        for (t, c) in self.ops.iter().zip(coeffs.items()) {
            acc = acc.add(&t.adjoint().apply(c)?)?;
        }
        Ok(acc)
    }

    /// `Σ_i ⟨T_i x, T_i x⟩`, accumulated in index order.
    pub fn energy(&self, x: &ModuleElement) -> Result<AlgebraElement> {
        self.space.check_same(x.space())?;
        let mut acc = AlgebraElement::zero(self.space.signature());
        for t in &self.ops {
            let tx = t.apply(x)?;
            acc = acc.add(&tx.inner_product(&tx)?)?;
        }
        Ok(acc)
    }

    /// Ascending (min, max) eigenvalues of each frame-operator block.
    pub fn frame_operator_spectrum_extremes(&self) -> Vec<(f64, f64)> {
        self.frame_operator()
            .blocks()
            .iter()
            .map(|b| {
                let eig = linalg::hermitian_eigen(b);
                (eig.min(), eig.max())
            })
            .collect()
    }

    /// Optimal frame bounds: the extreme frame-operator eigenvalues across
    /// blocks, clamped below at zero.
    pub fn optimal_bounds(&self, tol: f64) -> FrameBounds {
        let extremes = self.frame_operator_spectrum_extremes();
        let lower = extremes.iter().map(|e| e.0).fold(f64::INFINITY, f64::min);
        let upper = extremes.iter().map(|e| e.1).fold(0.0f64, f64::max);
        FrameBounds::new(lower.max(0.0), upper, true, tol).expect("eigen extremes are ordered")
    }

    pub fn classify(&self, tol: f64) -> FrameClass {
        FrameClass::from_bounds(&self.optimal_bounds(tol), tol)
    }

    fn require_frame(&self, tol: f64) -> Result<FrameBounds> {
        let bounds = self.optimal_bounds(tol);
        if bounds.lower() <= tol {
            return Err(CoreError::NotAFrame {
                lower: bounds.lower(),
                tol,
            });
        }
        Ok(bounds)
    }

    /// `Σ_i S⁻¹ T_i^* T_i x`; equals `x` up to numerical error when the
    /// family is a frame.
    pub fn reconstruct(&self, x: &ModuleElement, tol: f64) -> Result<ModuleElement> {
        self.require_frame(tol)?;
        let s_inv = self.frame_operator().inv(tol)?;
        let mut acc = ModuleElement::zero(&self.space);
        for t in &self.ops {
            let term = s_inv.apply(&t.adjoint().apply(&t.apply(x)?)?)?;
            acc = acc.add(&term)?;
        }
        Ok(acc)
    }

    /// The canonical dual family `{T_i ∘ S⁻¹}`. Its frame operator is
    /// `S⁻¹` and its optimal bounds are the reciprocals of the original
    /// bounds, swapped.
    pub fn canonical_dual(&self, tol: f64) -> Result<OperatorFrame> {
        self.require_frame(tol)?;
        let s_inv = self.frame_operator().inv(tol)?;
        let ops = self
            .ops
            .iter()
            .map(|t| t.compose(&s_inv))
            .collect::<Result<Vec<_>>>()?;
        OperatorFrame::new(self.space.clone(), ops)
    }

    /// Largest block residual of `Σ_i matrix(G_i) · matrix(T_i)^H − I`,
    /// which vanishes exactly when `G` is a dual of this family.
    pub fn dual_residual(&self, dual: &OperatorFrame) -> Result<f64> {
        self.space.check_same(&dual.space)?;
        if dual.ops.len() != self.ops.len() {
            return Err(CoreError::LengthMismatch {
                got: dual.ops.len(),
                expected: self.ops.len(),
            });
        }
        let mut worst = 0.0f64;
        for k in 0..self.space.num_blocks() {
            let d = self.space.operator_dim(k)?;
            let mut acc = CMat::zeros(d, d);
            for (t, g) in self.ops.iter().zip(&dual.ops) {
                acc += &g.blocks()[k] * t.blocks()[k].adjoint();
            }
            worst = worst.max(linalg::spectral_norm(&(acc - linalg::identity(d))));
        }
        Ok(worst)
    }

    /// True when `Σ_i T_i^* ∘ G_i` is the identity within `tol`.
    pub fn verify_dual(&self, dual: &OperatorFrame, tol: f64) -> Result<bool> {
        Ok(self.dual_residual(dual)? <= tol)
    }

    /// Pointwise operator reconstruction through a dual: `Σ_i T_i^* G_i A`,
    /// which reproduces `A` whenever `G` is a dual of this family.
    pub fn operator_reconstruction(
        &self,
        dual: &OperatorFrame,
        op: &ModuleOperator,
    ) -> Result<ModuleOperator> {
        self.space.check_same(&dual.space)?;
        self.space.check_same(op.space())?;
        if dual.ops.len() != self.ops.len() {
            return Err(CoreError::LengthMismatch {
                got: dual.ops.len(),
                expected: self.ops.len(),
            });
        }
        let mut acc = ModuleOperator::zero(&self.space);
        for (t, g) in self.ops.iter().zip(&dual.ops) {
            acc = acc.add(&t.adjoint().compose(g)?.compose(op)?)?;
        }
        Ok(acc)
    }

    /// Right composition `{T_i ∘ Q}` with a self-adjoint surjective `Q`.
    /// The new optimal bounds land inside `[A·m', B·M']` where `(m', M')`
    /// are the surjectivity constants of `Q`.
    pub fn compose_right(
        &self,
        q: &ModuleOperator,
        tol: f64,
    ) -> Result<(OperatorFrame, FrameBounds)> {
        self.space.check_same(q.space())?;
        let Some(_) = q.surjectivity_bounds(tol)? else {
            return Err(CoreError::NotSurjective {
                block: 0,
                sigma_min: q.min_singular_value(),
            });
        };
        let ops = self
            .ops
            .iter()
            .map(|t| t.compose(q))
            .collect::<Result<Vec<_>>>()?;
        let frame = OperatorFrame::new(self.space.clone(), ops)?;
        let bounds = frame.optimal_bounds(tol);
        Ok((frame, bounds))
    }

    /// Transports the family along `theta` to the target module. The
    /// transported operators act on the target space; their frame operator
    /// is blockwise unitarily similar to the source frame operator pulled
    /// through the block map, so optimal bounds are preserved on blocks in
    /// the image of the block map.
    pub fn transform(&self, theta: &ThetaMap, tol: f64) -> Result<(OperatorFrame, FrameBounds)> {
        if theta.source_space() != &self.space {
            return Err(CoreError::SpaceMismatch {
                left: theta.source_space().to_string(),
                right: self.space.to_string(),
            });
        }
        theta.check_compatibility(tol)?;
        let target = theta.target_space().clone();
        let ops = self
            .ops
            .iter()
            .map(|t| theta.transport_operator(t))
            .collect::<Result<Vec<_>>>()?;
        let transported = OperatorFrame::new(target, ops)?;
        theta.check_frame_transport(self, &transported, tol)?;
        let bounds = transported.optimal_bounds(tol);
        Ok((transported, bounds))
    }
}

/// Classification entry point that tolerates empty input.
pub fn classify_family(ops: &[ModuleOperator], tol: f64) -> FrameClass {
    let Some(first) = ops.first() else {
        return FrameClass::NonBesselDegenerate;
    };
    match OperatorFrame::new(first.space().clone(), ops.to_vec()) {
        Ok(frame) => frame.classify(tol),
        Err(_) => FrameClass::NonBesselDegenerate,
    }
}

/// Lifts algebra elements to the rank-one module, sending each `x_i` to the
/// operator `ξ ↦ ⟨ξ, x_i⟩` (right multiplication by the adjoint block).
/// The lift's optimal bounds are the optimal vector-frame bounds of the
/// family.
pub fn vector_frame_lift(xs: &[AlgebraElement]) -> Result<OperatorFrame> {
    let Some(first) = xs.first() else {
        return Err(CoreError::EmptyFamily);
    };
    let signature: AlgebraSignature = first.signature().clone();
    for x in xs {
        signature.check_same(x.signature())?;
    }
    let space = ModuleSpace::new(signature, 1)?;
    let ops = xs
        .iter()
        .map(|x| {
            let blocks = x.blocks().iter().map(|b| b.adjoint()).collect();
            ModuleOperator::from_blocks(space.clone(), blocks)
        })
        .collect::<Result<Vec<_>>>()?;
    OperatorFrame::new(space, ops)
}

/// Construction modes for [`gen_frame`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GenMode {
    /// Independent standard complex Gaussian blocks.
    Generic,
    /// Gaussian draw whitened by `S^{-1/2}`, so the result is Parseval.
    Parseval,
    /// Parseval scaled by `√λ`.
    Tight(f64),
    /// Gaussian draw with the smallest frame-operator eigenvalue of every
    /// block forced into `[1e-8, 1e-6]`.
    NearSingular,
}

/// Seeded random operator family. Identical seeds give bitwise identical
/// frames.
pub fn gen_frame(
    seed: u64,
    space: &ModuleSpace,
    count: usize,
    mode: GenMode,
) -> Result<OperatorFrame> {
    if count == 0 {
        return Err(CoreError::EmptyFamily);
    }
    let mut rng = rng_from_seed(seed);
    let ops: Vec<ModuleOperator> = (0..count)
        .map(|_| random_operator(&mut rng, space))
        .collect();
    let frame = OperatorFrame::new(space.clone(), ops)?;
    match mode {
        GenMode::Generic => Ok(frame),
        GenMode::Parseval => whiten(&frame),
        GenMode::Tight(lambda) => {
            let parseval = whiten(&frame)?;
            let scale = lambda.max(0.0).sqrt();
            let ops = parseval.ops.iter().map(|t| t.scale(scale)).collect();
            OperatorFrame::new(space.clone(), ops)
        }
        GenMode::NearSingular => degrade(&frame, &mut rng),
    }
}

fn whiten(frame: &OperatorFrame) -> Result<OperatorFrame> {
    let w = frame.frame_operator().inv_sqrt(1e-12)?;
    let ops = frame
        .ops
        .iter()
        .map(|t| t.compose(&w))
        .collect::<Result<Vec<_>>>()?;
    OperatorFrame::new(frame.space.clone(), ops)
}

fn degrade(frame: &OperatorFrame, rng: &mut SeededRng) -> Result<OperatorFrame> {
    use rand::Rng;
    let space = frame.space.clone();
    let s = frame.frame_operator();
    // Per block, rescale the frame-operator spectrum so its smallest
    // eigenvalue becomes a seeded draw from [1e-8, 1e-6].
    let mut shapers: Vec<CMat> = Vec::with_capacity(space.num_blocks());
    for b in s.blocks() {
        let eps: f64 = 1e-8 + rng.random::<f64>() * (1e-6 - 1e-8);
        let eig = linalg::hermitian_eigen(b);
        let d = eig.values.len();
        let mut scaled = CMat::zeros(d, d);
        for (j, &lam) in eig.values.iter().enumerate() {
            let lam = lam.max(1e-300);
            let target = if j == 0 { eps } else { lam };
            scaled[(j, j)] = linalg::real((target / lam).sqrt());
        }
        shapers.push(&eig.vectors * scaled * eig.vectors.adjoint());
    }
    let ops = frame
        .ops
        .iter()
        .map(|t| {
            let blocks = t
                .blocks()
                .iter()
                .zip(&shapers)
                .map(|(m, v)| v * m)
                .collect();
            ModuleOperator::from_blocks(space.clone(), blocks)
        })
        .collect::<Result<Vec<_>>>()?;
    OperatorFrame::new(space, ops)
}

/// Module transport map compatible with a block homomorphism: target block
/// `l` of the image is `U_l · X_{σ(l)} · G_l` with `U_l` the homomorphism
/// conjugator and `G_l` a unitary of the full operator dimension. Such a
/// map satisfies `⟨θx, θy⟩ = φ(⟨x, y⟩)` identically.
#[derive(Debug, Clone)]
pub struct ThetaMap {
    hom: BlockHom,
    source_space: ModuleSpace,
    target_space: ModuleSpace,
    module_conjugators: Vec<CMat>,
}

impl ThetaMap {
    pub fn new(
        hom: BlockHom,
        rank: usize,
        module_conjugators: Vec<CMat>,
        tol: f64,
    ) -> Result<Self> {
        let source_space = ModuleSpace::new(hom.source().clone(), rank)?;
        let target_space = ModuleSpace::new(hom.target().clone(), rank)?;
        if module_conjugators.len() != target_space.num_blocks() {
            return Err(CoreError::LengthMismatch {
                got: module_conjugators.len(),
                expected: target_space.num_blocks(),
            });
        }
        for (l, g) in module_conjugators.iter().enumerate() {
            let d = target_space.operator_dim(l)?;
            if g.nrows() != d || g.ncols() != d {
                return Err(CoreError::ShapeMismatch {
                    what: format!("module conjugator {l}"),
                    expected: format!("{d}x{d}"),
                    got: format!("{}x{}", g.nrows(), g.ncols()),
                });
            }
            let dev = (g * g.adjoint() - linalg::identity(d)).norm();
            if dev > tol.max(1e-9) * (d as f64) {
                return Err(CoreError::NotUnitary {
                    what: "module conjugator".into(),
                    block: l,
                    deviation: dev,
                });
            }
        }
        Ok(Self {
            hom,
            source_space,
            target_space,
            module_conjugators,
        })
    }

    pub fn identity(space: &ModuleSpace) -> Self {
        let hom = BlockHom::identity(space.signature());
        let module_conjugators = (0..space.num_blocks())
            .map(|k| linalg::identity(space.operator_dim(k).expect("valid block")))
            .collect();
        Self {
            hom,
            source_space: space.clone(),
            target_space: space.clone(),
            module_conjugators,
        }
    }

    pub fn hom(&self) -> &BlockHom {
        &self.hom
    }

    pub fn source_space(&self) -> &ModuleSpace {
        &self.source_space
    }

    pub fn target_space(&self) -> &ModuleSpace {
        &self.target_space
    }

    pub fn module_conjugators(&self) -> &[CMat] {
        &self.module_conjugators
    }

    /// Image of a source element: block `l` is `U_l X_{σ(l)} G_l`.
    pub fn apply(&self, x: &ModuleElement) -> Result<ModuleElement> {
        self.source_space.check_same(x.space())?;
        let blocks = self
            .hom
            .block_map()
            .iter()
            .zip(self.hom.conjugators())
            .zip(&self.module_conjugators)
            .map(|((&src, u), g)| u * &x.blocks()[src] * g)
            .collect();
        ModuleElement::from_blocks(self.target_space.clone(), blocks)
    }

    /// Conjugated image of an operator on the source module, acting on the
    /// target module: block `l` is `G_l^H M_{σ(l)} G_l`. Satisfies
    /// `transport(T)(θx) = θ(Tx)`.
    pub fn transport_operator(&self, t: &ModuleOperator) -> Result<ModuleOperator> {
        self.source_space.check_same(t.space())?;
        let blocks = self
            .hom
            .block_map()
            .iter()
            .zip(&self.module_conjugators)
            .map(|(&src, g)| g.adjoint() * &t.blocks()[src] * g)
            .collect();
        ModuleOperator::from_blocks(self.target_space.clone(), blocks)
    }

    /// Samples random pairs and checks `⟨θx, θy⟩ = φ(⟨x, y⟩)` within `tol`.
    pub fn check_compatibility(&self, tol: f64) -> Result<()> {
        let mut rng = rng_from_seed(0x7E7A);
        for _ in 0..4 {
            let x = random_module_element(&mut rng, &self.source_space);
            let y = random_module_element(&mut rng, &self.source_space);
            let lhs = self.apply(&x)?.inner_product(&self.apply(&y)?)?;
            let rhs = self.hom.apply(&x.inner_product(&y)?)?;
            let scale = 1.0f64.max(lhs.max_seminorm()).max(rhs.max_seminorm());
            let res = lhs.sub(&rhs)?.max_seminorm();
            if res > tol.max(1e-9) * scale * 100.0 {
                return Err(CoreError::IncompatibleMap {
                    reason: format!(
                        "inner products do not transport through the homomorphism (residual {res:.3e})"
                    ),
                });
            }
        }
        Ok(())
    }

    /// Samples random pairs and checks the frame-operator transport
    /// identity `⟨S_target θx, θy⟩ = φ(⟨S_source x, y⟩)` together with the
    /// energy identity for the transported family.
    fn check_frame_transport(
        &self,
        source: &OperatorFrame,
        transported: &OperatorFrame,
        tol: f64,
    ) -> Result<()> {
        let mut rng = rng_from_seed(0x7E7B);
        let s_src = source.frame_operator();
        let s_tgt = transported.frame_operator();
        for _ in 0..4 {
            let x = random_module_element(&mut rng, &self.source_space);
            let y = random_module_element(&mut rng, &self.source_space);
            let tx = self.apply(&x)?;
            let ty = self.apply(&y)?;
            let lhs = s_tgt.apply(&tx)?.inner_product(&ty)?;
            let rhs = self.hom.apply(&s_src.apply(&x)?.inner_product(&y)?)?;
            let scale = 1.0f64.max(lhs.max_seminorm()).max(rhs.max_seminorm());
            if lhs.sub(&rhs)?.max_seminorm() > tol.max(1e-9) * scale * 100.0 {
                return Err(CoreError::IncompatibleMap {
                    reason: "frame operator does not transport through the map".into(),
                });
            }
            let e_src = self.hom.apply(&source.energy(&x)?)?;
            let e_tgt = transported.energy(&tx)?;
            let scale = 1.0f64.max(e_src.max_seminorm()).max(e_tgt.max_seminorm());
            if e_src.sub(&e_tgt)?.max_seminorm() > tol.max(1e-9) * scale * 100.0 {
                return Err(CoreError::IncompatibleMap {
                    reason: "frame energy does not transport through the map".into(),
                });
            }
        }
        Ok(())
    }
}

/// Random transport map: a seeded block homomorphism with Haar-ish unitary
/// conjugators at both the algebra and module level.
pub fn random_theta_map(
    rng: &mut SeededRng,
    source: &AlgebraSignature,
    target_blocks: usize,
    rank: usize,
) -> ThetaMap {
    let hom = crate::sampling::random_block_hom(rng, source, target_blocks);
    let module_conjugators: Vec<CMat> = hom
        .target()
        .block_dims()
        .iter()
        .map(|&n| crate::sampling::random_unitary(rng, rank * n))
        .collect();
    ThetaMap::new(hom, rank, module_conjugators, 1e-9).expect("constructed map is valid")
}

/// Convenience for tests and the CLI: a random module element from a fresh
/// seeded stream.
pub fn seeded_module_element(seed: u64, space: &ModuleSpace) -> ModuleElement {
    let mut rng = rng_from_seed(seed);
    random_module_element(&mut rng, space)
}

/// Random Gaussian block matrix, re-exported at the frame level for
/// callers assembling bespoke operators.
pub fn seeded_gaussian(seed: u64, rows: usize, cols: usize) -> CMat {
    let mut rng = rng_from_seed(seed);
    complex_gaussian(&mut rng, rows, cols)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::real;

    fn space(dims: &[usize], rank: usize) -> ModuleSpace {
        ModuleSpace::new(AlgebraSignature::new(dims.to_vec()).unwrap(), rank).unwrap()
    }

    fn op(space: &ModuleSpace, entries: &[f64]) -> ModuleOperator {
        let d = space.operator_dim(0).unwrap();
        ModuleOperator::from_blocks(
            space.clone(),
            vec![CMat::from_row_slice(
                d,
                d,
                &entries.iter().map(|&v| real(v)).collect::<Vec<_>>(),
            )],
        )
        .unwrap()
    }

    fn diag_frame(space: &ModuleSpace) -> OperatorFrame {
        OperatorFrame::new(
            space.clone(),
            vec![
                op(space, &[1.0, 0.0, 0.0, 0.0]),
                op(space, &[0.0, 0.0, 0.0, 2.0]),
            ],
        )
        .unwrap()
    }

    #[test]
    fn frame_operator_examples() {
        let sp = space(&[1], 2);
        let id_frame = OperatorFrame::new(sp.clone(), vec![ModuleOperator::identity(&sp)]).unwrap();
        assert_eq!(id_frame.frame_operator(), ModuleOperator::identity(&sp));

        let f = diag_frame(&sp);
        let s = f.frame_operator();
        let want = op(&sp, &[1.0, 0.0, 0.0, 4.0]);
        assert!(s.sub(&want).unwrap().uniform_norm() < 1e-15);

        // single shear block: S = M·M^H = [[2,1],[1,1]]
        let shear = OperatorFrame::new(sp.clone(), vec![op(&sp, &[1.0, 1.0, 0.0, 1.0])]).unwrap();
        let want = op(&sp, &[2.0, 1.0, 1.0, 1.0]);
        assert!(shear.frame_operator().sub(&want).unwrap().uniform_norm() < 1e-15);
    }

    #[test]
    fn analysis_synthesis_match_frame_operator() {
        let sp = space(&[2], 2);
        let f = gen_frame(3, &sp, 3, GenMode::Generic).unwrap();
        let x = seeded_module_element(4, &sp);
        let coeffs = f.analysis(&x).unwrap();
        let via_ops = f.synthesis(&coeffs).unwrap();
        let via_s = f.frame_operator().apply(&x).unwrap();
        assert!(via_ops.sub(&via_s).unwrap().max_module_seminorm() < 1e-12);
    }

    #[test]
    fn analysis_synthesis_adjointness() {
        let sp = space(&[1, 2], 2);
        let f = gen_frame(5, &sp, 4, GenMode::Generic).unwrap();
        let mut rng = rng_from_seed(6);
        let x = random_module_element(&mut rng, &sp);
        let coeffs = CoefficientSequence::new(
            sp.clone(),
            (0..4)
                .map(|_| random_module_element(&mut rng, &sp))
                .collect(),
        )
        .unwrap();
        let lhs = f.analysis(&x).unwrap().pairing(&coeffs).unwrap();
        let rhs = x.inner_product(&f.synthesis(&coeffs).unwrap()).unwrap();
        assert!(lhs.sub(&rhs).unwrap().max_seminorm() < 1e-12);
    }

    #[test]
    fn optimal_bounds_examples() {
        let sp = space(&[1], 2);
        let id = ModuleOperator::identity(&sp);
        let two = OperatorFrame::new(sp.clone(), vec![id.clone(), id.clone()]).unwrap();
        let b = two.optimal_bounds(1e-9);
        assert!((b.lower() - 2.0).abs() < 1e-12 && (b.upper() - 2.0).abs() < 1e-12);

        let f = diag_frame(&sp);
        let b = f.optimal_bounds(1e-9);
        assert!((b.lower() - 1.0).abs() < 1e-12 && (b.upper() - 4.0).abs() < 1e-12);

        // golden ratio bounds for the shear frame
        let shear = OperatorFrame::new(sp.clone(), vec![op(&sp, &[1.0, 1.0, 0.0, 1.0])]).unwrap();
        let b = shear.optimal_bounds(1e-9);
        let lo = (3.0 - 5f64.sqrt()) / 2.0;
        let hi = (3.0 + 5f64.sqrt()) / 2.0;
        assert!((b.lower() - lo).abs() < 1e-12);
        assert!((b.upper() - hi).abs() < 1e-12);
    }

    #[test]
    fn classification_examples() {
        let sp = space(&[1], 2);
        let id = ModuleOperator::identity(&sp);
        let f = OperatorFrame::new(sp.clone(), vec![id.clone()]).unwrap();
        assert_eq!(f.classify(1e-9), FrameClass::Parseval);

        let f = OperatorFrame::new(sp.clone(), vec![id.scale(2.0)]).unwrap();
        match f.classify(1e-9) {
            FrameClass::Tight { lambda } => assert!((lambda - 4.0).abs() < 1e-12),
            other => panic!("expected tight, got {other:?}"),
        }

        let f = OperatorFrame::new(sp.clone(), vec![op(&sp, &[1.0, 0.0, 0.0, 0.0])]).unwrap();
        assert_eq!(f.classify(1e-9), FrameClass::BesselOnly);

        assert_eq!(classify_family(&[], 1e-9), FrameClass::NonBesselDegenerate);
    }

    #[test]
    fn reconstruction_examples() {
        let sp = space(&[1], 2);
        let x = seeded_module_element(9, &sp);
        let id_frame = OperatorFrame::new(sp.clone(), vec![ModuleOperator::identity(&sp)]).unwrap();
        let y = id_frame.reconstruct(&x, 1e-9).unwrap();
        assert!(y.sub(&x).unwrap().max_module_seminorm() < 1e-12);

        let scaled =
            OperatorFrame::new(sp.clone(), vec![ModuleOperator::identity(&sp).scale(2.0)]).unwrap();
        let y = scaled.reconstruct(&x, 1e-9).unwrap();
        assert!(y.sub(&x).unwrap().max_module_seminorm() < 1e-12);

        let degenerate =
            OperatorFrame::new(sp.clone(), vec![op(&sp, &[1.0, 0.0, 0.0, 0.0])]).unwrap();
        assert!(matches!(
            degenerate.reconstruct(&x, 1e-9),
            Err(CoreError::NotAFrame { .. })
        ));
    }

    #[test]
    fn canonical_dual_examples() {
        let sp = space(&[1], 2);
        let id = ModuleOperator::identity(&sp);
        let f = OperatorFrame::new(sp.clone(), vec![id.clone()]).unwrap();
        let dual = f.canonical_dual(1e-9).unwrap();
        assert!(dual.ops()[0].sub(&id).unwrap().uniform_norm() < 1e-12);

        let f = diag_frame(&sp);
        let dual = f.canonical_dual(1e-9).unwrap();
        let want0 = op(&sp, &[1.0, 0.0, 0.0, 0.0]);
        let want1 = op(&sp, &[0.0, 0.0, 0.0, 0.5]);
        assert!(dual.ops()[0].sub(&want0).unwrap().uniform_norm() < 1e-12);
        assert!(dual.ops()[1].sub(&want1).unwrap().uniform_norm() < 1e-12);
        let db = dual.optimal_bounds(1e-9);
        assert!((db.lower() - 0.25).abs() < 1e-12 && (db.upper() - 1.0).abs() < 1e-12);
        assert!(f.verify_dual(&dual, 1e-10).unwrap());

        let f = OperatorFrame::new(sp.clone(), vec![id.scale(2.0)]).unwrap();
        let dual = f.canonical_dual(1e-9).unwrap();
        assert!(dual.ops()[0].sub(&id.scale(0.5)).unwrap().uniform_norm() < 1e-12);
    }

    #[test]
    fn verify_dual_examples() {
        let sp = space(&[1], 2);
        let id = ModuleOperator::identity(&sp);
        let f = OperatorFrame::new(sp.clone(), vec![id.clone()]).unwrap();
        let g = OperatorFrame::new(sp.clone(), vec![id.clone()]).unwrap();
        assert!(f.verify_dual(&g, 1e-10).unwrap());
        let g2 = OperatorFrame::new(sp.clone(), vec![id.scale(2.0)]).unwrap();
        assert!(!f.verify_dual(&g2, 1e-10).unwrap());
    }

    #[test]
    fn dual_symmetry() {
        let sp = space(&[2], 2);
        let f = gen_frame(31, &sp, 3, GenMode::Generic).unwrap();
        let dual = f.canonical_dual(1e-9).unwrap();
        assert!(f.verify_dual(&dual, 1e-10).unwrap());
        assert!(dual.verify_dual(&f, 1e-10).unwrap());
    }

    #[test]
    fn operator_reconstruction_through_dual() {
        let sp = space(&[2], 2);
        let f = gen_frame(32, &sp, 4, GenMode::Generic).unwrap();
        let dual = f.canonical_dual(1e-9).unwrap();
        let mut rng = rng_from_seed(33);
        let a = random_operator(&mut rng, &sp);
        let rec = f.operator_reconstruction(&dual, &a).unwrap();
        assert!(rec.sub(&a).unwrap().uniform_norm() < 1e-10);
    }

    #[test]
    fn compose_right_examples() {
        let sp = space(&[1], 2);
        let f = OperatorFrame::new(sp.clone(), vec![ModuleOperator::identity(&sp)]).unwrap();
        let (composed, bounds) = f
            .compose_right(&ModuleOperator::identity(&sp), 1e-9)
            .unwrap();
        assert_eq!(composed.ops().len(), 1);
        assert!((bounds.lower() - 1.0).abs() < 1e-12 && (bounds.upper() - 1.0).abs() < 1e-12);

        let q = op(&sp, &[2.0, 0.0, 0.0, 3.0]);
        let (_, bounds) = f.compose_right(&q, 1e-9).unwrap();
        assert!((bounds.lower() - 4.0).abs() < 1e-12 && (bounds.upper() - 9.0).abs() < 1e-12);

        let singular = op(&sp, &[1.0, 0.0, 0.0, 0.0]);
        assert!(matches!(
            f.compose_right(&singular, 1e-9),
            Err(CoreError::NotSurjective { .. })
        ));
        let skew = op(&sp, &[0.0, 1.0, -1.0, 0.0]);
        assert!(matches!(
            f.compose_right(&skew, 1e-9),
            Err(CoreError::NotSelfAdjoint { .. })
        ));
    }

    #[test]
    fn transform_identity_is_noop() {
        let sp = space(&[2], 2);
        let f = gen_frame(40, &sp, 3, GenMode::Generic).unwrap();
        let theta = ThetaMap::identity(&sp);
        let (g, bounds) = f.transform(&theta, 1e-9).unwrap();
        let fb = f.optimal_bounds(1e-9);
        assert!((bounds.lower() - fb.lower()).abs() < 1e-10);
        assert!((bounds.upper() - fb.upper()).abs() < 1e-10);
        for (a, b) in f.ops().iter().zip(g.ops()) {
            assert!(a.sub(b).unwrap().uniform_norm() < 1e-12);
        }
    }

    #[test]
    fn transform_block_swap_permutes_spectrum() {
        let sig = AlgebraSignature::new(vec![2, 2]).unwrap();
        let sp = ModuleSpace::new(sig.clone(), 2).unwrap();
        let f = gen_frame(41, &sp, 3, GenMode::Generic).unwrap();
        let hom = BlockHom::reindexing(&sig, vec![1, 0]).unwrap();
        let conj = (0..2)
            .map(|l| linalg::identity(sp.operator_dim(l).unwrap()))
            .collect();
        let theta = ThetaMap::new(hom, 2, conj, 1e-9).unwrap();
        let (g, bounds) = f.transform(&theta, 1e-9).unwrap();
        let src = f.frame_operator_spectrum_extremes();
        let dst = g.frame_operator_spectrum_extremes();
        assert!((src[0].0 - dst[1].0).abs() < 1e-10);
        assert!((src[1].1 - dst[0].1).abs() < 1e-10);
        let fb = f.optimal_bounds(1e-9);
        assert!((bounds.lower() - fb.lower()).abs() < 1e-10);
        assert!((bounds.upper() - fb.upper()).abs() < 1e-10);
    }

    #[test]
    fn vector_lift_examples() {
        let sig = AlgebraSignature::new(vec![1]).unwrap();
        let one = AlgebraElement::unit(&sig);
        let f = vector_frame_lift(std::slice::from_ref(&one)).unwrap();
        assert_eq!(f.classify(1e-9), FrameClass::Parseval);

        let f = vector_frame_lift(&[one.clone(), one.clone()]).unwrap();
        let b = f.optimal_bounds(1e-9);
        assert!((b.lower() - 2.0).abs() < 1e-12 && (b.upper() - 2.0).abs() < 1e-12);

        assert!(matches!(
            vector_frame_lift(&[]),
            Err(CoreError::EmptyFamily)
        ));
    }

    #[test]
    fn vector_lift_matrix_signature() {
        // over signature (2): {E11, E22, I} has Σ x_i^* x_i = 2·I
        let sig = AlgebraSignature::new(vec![2]).unwrap();
        let e11 = AlgebraElement::from_blocks(
            sig.clone(),
            vec![CMat::from_row_slice(
                2,
                2,
                &[real(1.0), real(0.0), real(0.0), real(0.0)],
            )],
        )
        .unwrap();
        let e22 = AlgebraElement::from_blocks(
            sig.clone(),
            vec![CMat::from_row_slice(
                2,
                2,
                &[real(0.0), real(0.0), real(0.0), real(1.0)],
            )],
        )
        .unwrap();
        let one = AlgebraElement::unit(&sig);
        let f = vector_frame_lift(&[e11, e22, one]).unwrap();
        let b = f.optimal_bounds(1e-9);
        assert!((b.lower() - 2.0).abs() < 1e-12 && (b.upper() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn gen_modes_behave() {
        let sp = space(&[1, 2], 2);
        let p = gen_frame(7, &sp, 4, GenMode::Parseval).unwrap();
        assert_eq!(p.classify(1e-9), FrameClass::Parseval);

        let t = gen_frame(7, &sp, 4, GenMode::Tight(4.0)).unwrap();
        let b = t.optimal_bounds(1e-9);
        assert!((b.lower() - 4.0).abs() < 1e-9 && (b.upper() - 4.0).abs() < 1e-9);

        let n = gen_frame(7, &sp, 4, GenMode::NearSingular).unwrap();
        let b = n.optimal_bounds(1e-9);
        assert!(b.lower() <= 1e-6, "lower = {}", b.lower());

        let a = gen_frame(7, &sp, 4, GenMode::Generic).unwrap();
        let b2 = gen_frame(7, &sp, 4, GenMode::Generic).unwrap();
        assert_eq!(a, b2);
    }
}
