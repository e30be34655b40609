//! Weighted families of submodule projections and the operator frames they
//! induce.
//!
//! A projection is stored as a Hermitian idempotent block operator; a
//! weight is one positive scalar per block, the general form of a positive
//! invertible central element in this model. The induced family `{v_i P_i}`
//! carries the same bounds as the weighted projection inequality, and the
//! dual-pair construction conjugates by the system's frame operator.

use crate::error::{CoreError, Result};
use crate::frame::{FrameBounds, OperatorFrame};
use crate::linalg;
use crate::module::{ModuleOperator, ModuleSpace};

/// Orthogonal projection onto a complemented submodule: every block is
/// Hermitian and idempotent within tolerance.
#[derive(Debug, Clone, PartialEq)]
pub struct SubmoduleProjection {
    op: ModuleOperator,
}

impl SubmoduleProjection {
    pub fn new(op: ModuleOperator, tol: f64) -> Result<Self> {
        for (k, b) in op.blocks().iter().enumerate() {
            let scale = 1.0f64.max(linalg::spectral_norm(b));
            let herm_dev = linalg::hermitian_deviation(b);
            if herm_dev > tol * scale {
                return Err(CoreError::InvalidProjection {
                    block: k,
                    reason: "not Hermitian",
                    deviation: herm_dev,
                });
            }
            let idem_dev = linalg::spectral_norm(&(b * b - b));
            if idem_dev > tol * scale {
                return Err(CoreError::InvalidProjection {
                    block: k,
                    reason: "not idempotent",
                    deviation: idem_dev,
                });
            }
        }
        Ok(Self { op })
    }

    pub fn identity(space: &ModuleSpace) -> Self {
        Self {
            op: ModuleOperator::identity(space),
        }
    }

    pub fn operator(&self) -> &ModuleOperator {
        &self.op
    }
}

/// Positive invertible central weight: one strictly positive scalar per
/// block.
#[derive(Debug, Clone, PartialEq)]
pub struct CentralWeight {
    scalars: Vec<f64>,
}

impl CentralWeight {
    pub fn new(scalars: Vec<f64>) -> Result<Self> {
        if scalars.is_empty() {
            return Err(CoreError::EmptyFamily);
        }
        for (k, &v) in scalars.iter().enumerate() {
            if v <= 0.0 || !v.is_finite() {
                return Err(CoreError::InvalidWeight {
                    index: 0,
                    block: k,
                    value: v,
                });
            }
        }
        Ok(Self { scalars })
    }

    /// The same weight in every block.
    pub fn uniform(value: f64, blocks: usize) -> Result<Self> {
        Self::new(vec![value; blocks])
    }

    pub fn scalars(&self) -> &[f64] {
        &self.scalars
    }
}

/// Weighted family of submodule projections over one module.
#[derive(Debug, Clone)]
pub struct FusionSystem {
    space: ModuleSpace,
    pairs: Vec<(SubmoduleProjection, CentralWeight)>,
}

impl FusionSystem {
    pub fn new(
        space: ModuleSpace,
        pairs: Vec<(SubmoduleProjection, CentralWeight)>,
    ) -> Result<Self> {
        if pairs.is_empty() {
            return Err(CoreError::EmptyFamily);
        }
        for (i, (p, w)) in pairs.iter().enumerate() {
            space.check_same(p.operator().space())?;
            if w.scalars().len() != space.num_blocks() {
                return Err(CoreError::LengthMismatch {
                    got: w.scalars().len(),
                    expected: space.num_blocks(),
                });
            }
            for (k, &v) in w.scalars().iter().enumerate() {
                if v <= 0.0 || !v.is_finite() {
                    return Err(CoreError::InvalidWeight {
                        index: i,
                        block: k,
                        value: v,
                    });
                }
            }
        }
        Ok(Self { space, pairs })
    }

    pub fn space(&self) -> &ModuleSpace {
        &self.space
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn pairs(&self) -> &[(SubmoduleProjection, CentralWeight)] {
        &self.pairs
    }

    fn weighted_projection(&self, i: usize) -> ModuleOperator {
        let (p, w) = &self.pairs[i];
        let blocks = p
            .operator()
            .blocks()
            .iter()
            .zip(w.scalars())
            .map(|(b, &v)| b.map(|z| z * v))
            .collect();
        ModuleOperator::from_blocks(self.space.clone(), blocks).expect("shapes preserved")
    }

    /// The induced operator family `{v_i P_i}`. Its optimal bounds are the
    /// optimal constants of the weighted projection inequality, because the
    /// energies agree termwise.
    pub fn to_operator_frame(&self) -> OperatorFrame {
        let ops = (0..self.pairs.len())
            .map(|i| self.weighted_projection(i))
            .collect();
        OperatorFrame::new(self.space.clone(), ops).expect("system is nonempty")
    }

    /// The system's frame operator `Σ v_i² P_i`.
    pub fn frame_operator(&self) -> ModuleOperator {
        self.to_operator_frame().frame_operator()
    }

    pub fn optimal_bounds(&self, tol: f64) -> FrameBounds {
        self.to_operator_frame().optimal_bounds(tol)
    }

    fn require_fusion_frame(&self, tol: f64) -> Result<(OperatorFrame, ModuleOperator)> {
        let frame = self.to_operator_frame();
        let bounds = frame.optimal_bounds(tol);
        if bounds.lower() <= tol {
            return Err(CoreError::NotAFusionFrame {
                lower: bounds.lower(),
            });
        }
        let s = frame.frame_operator();
        Ok((frame, s))
    }

    /// Dual pair of operator frames built by conjugating with the system's
    /// frame operator: the first family is `{v_i · S ∘ P_i ∘ S⁻¹}`, the
    /// second `{v_i · S⁻¹ ∘ P_i}`, and the second is a dual of the first.
    pub fn dual_pair(&self, tol: f64) -> Result<(OperatorFrame, OperatorFrame)> {
        let (_, s) = self.require_fusion_frame(tol)?;
        let s_inv = s.inv(tol)?;
        let mut t_ops = Vec::with_capacity(self.pairs.len());
        let mut q_ops = Vec::with_capacity(self.pairs.len());
        for i in 0..self.pairs.len() {
            let vp = self.weighted_projection(i);
            t_ops.push(s.compose(&vp)?.compose(&s_inv)?);
            q_ops.push(s_inv.compose(&vp)?);
        }
        let t = OperatorFrame::new(self.space.clone(), t_ops)?;
        let q = OperatorFrame::new(self.space.clone(), q_ops)?;
        Ok((t, q))
    }

    /// A Parseval system (frame operator equal to the identity) induces an
    /// operator frame that is a dual of itself.
    pub fn parseval_self_dual_check(&self, tol: f64) -> bool {
        let frame = self.to_operator_frame();
        let s = frame.frame_operator();
        let identity = ModuleOperator::identity(&self.space);
        let is_parseval = match s.sub(&identity) {
            Ok(diff) => diff.uniform_norm() <= tol.max(1e-12) * 10.0,
            Err(_) => false,
        };
        if !is_parseval {
            return false;
        }
        frame.verify_dual(&frame, tol.max(1e-10)).unwrap_or(false)
    }

    /// Conjugation invariance of the frame operator: the family
    /// `{v_i · S⁻¹ ∘ P_i ∘ S}` consists of idempotents, and the weighted
    /// sum of their squares recovers `S` itself. The conjugated factors
    /// are oblique (idempotent but not Hermitian), so the sum uses the
    /// idempotent square rather than the Hermitian Gram square.
    pub fn frame_operator_conjugation_check(&self, tol: f64) -> Result<bool> {
        let (_, s) = self.require_fusion_frame(tol)?;
        let s_inv = s.inv(tol)?;
        let mut acc = ModuleOperator::zero(&self.space);
        for (p, w) in &self.pairs {
            let conjugated = s_inv.compose(p.operator())?.compose(&s)?;
            let squared = conjugated.compose(&conjugated)?;
            let blocks = squared
                .blocks()
                .iter()
                .zip(w.scalars())
                .map(|(b, &v)| b.map(|z| z * v * v))
                .collect();
            let term = ModuleOperator::from_blocks(self.space.clone(), blocks)?;
            acc = acc.add(&term)?;
        }
        let residual = acc.sub(&s)?.uniform_norm();
        Ok(residual <= tol.max(1e-9) * 1.0f64.max(s.uniform_norm()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::AlgebraSignature;
    use crate::frame::FrameClass;
    use crate::linalg::{real, CMat};
    use crate::sampling::{random_identity_resolution, rng_from_seed};

    fn space(dims: &[usize], rank: usize) -> ModuleSpace {
        ModuleSpace::new(AlgebraSignature::new(dims.to_vec()).unwrap(), rank).unwrap()
    }

    fn diag_proj(space: &ModuleSpace, entries: &[f64]) -> SubmoduleProjection {
        let d = space.operator_dim(0).unwrap();
        let mut m = CMat::zeros(d, d);
        for (i, &v) in entries.iter().enumerate() {
            m[(i, i)] = real(v);
        }
        SubmoduleProjection::new(
            ModuleOperator::from_blocks(space.clone(), vec![m]).unwrap(),
            1e-9,
        )
        .unwrap()
    }

    fn diag_system(space: &ModuleSpace) -> FusionSystem {
        let p1 = diag_proj(space, &[1.0, 0.0]);
        let p2 = diag_proj(space, &[0.0, 1.0]);
        let w1 = CentralWeight::uniform(1.0, 1).unwrap();
        let w2 = CentralWeight::uniform(2.0, 1).unwrap();
        FusionSystem::new(space.clone(), vec![(p1, w1), (p2, w2)]).unwrap()
    }

    #[test]
    fn invalid_projections_rejected() {
        let sp = space(&[1], 2);
        let not_idem = ModuleOperator::from_blocks(
            sp.clone(),
            vec![CMat::from_row_slice(
                2,
                2,
                &[real(1.0), real(0.0), real(0.0), real(2.0)],
            )],
        )
        .unwrap();
        assert!(matches!(
            SubmoduleProjection::new(not_idem, 1e-9),
            Err(CoreError::InvalidProjection { .. })
        ));
        let not_herm = ModuleOperator::from_blocks(
            sp,
            vec![CMat::from_row_slice(
                2,
                2,
                &[real(1.0), real(1.0), real(0.0), real(0.0)],
            )],
        )
        .unwrap();
        assert!(matches!(
            SubmoduleProjection::new(not_herm, 1e-9),
            Err(CoreError::InvalidProjection { .. })
        ));
    }

    #[test]
    fn weights_must_be_positive() {
        assert!(matches!(
            CentralWeight::new(vec![1.0, 0.0]),
            Err(CoreError::InvalidWeight { .. })
        ));
        assert!(matches!(
            CentralWeight::new(vec![-1.0]),
            Err(CoreError::InvalidWeight { .. })
        ));
    }

    #[test]
    fn single_identity_projection_is_parseval() {
        let sp = space(&[1], 2);
        let sys = FusionSystem::new(
            sp.clone(),
            vec![(
                SubmoduleProjection::identity(&sp),
                CentralWeight::uniform(1.0, 1).unwrap(),
            )],
        )
        .unwrap();
        let frame = sys.to_operator_frame();
        assert_eq!(frame.classify(1e-9), FrameClass::Parseval);
        assert!(sys.parseval_self_dual_check(1e-9));
    }

    #[test]
    fn worked_diagonal_example() {
        let sp = space(&[1], 2);
        let sys = diag_system(&sp);
        let s = sys.frame_operator();
        let want_s = ModuleOperator::from_blocks(
            sp.clone(),
            vec![CMat::from_row_slice(
                2,
                2,
                &[real(1.0), real(0.0), real(0.0), real(4.0)],
            )],
        )
        .unwrap();
        assert!(s.sub(&want_s).unwrap().uniform_norm() < 1e-12);
        let bounds = sys.optimal_bounds(1e-9);
        assert!((bounds.lower() - 1.0).abs() < 1e-12 && (bounds.upper() - 4.0).abs() < 1e-12);

        let (t, q) = sys.dual_pair(1e-9).unwrap();
        let want_t0 = CMat::from_row_slice(2, 2, &[real(1.0), real(0.0), real(0.0), real(0.0)]);
        let want_t1 = CMat::from_row_slice(2, 2, &[real(0.0), real(0.0), real(0.0), real(2.0)]);
        let want_q0 = want_t0.clone();
        let want_q1 = CMat::from_row_slice(2, 2, &[real(0.0), real(0.0), real(0.0), real(0.5)]);
        assert!((t.ops()[0].blocks()[0].clone() - want_t0).norm() < 1e-12);
        assert!((t.ops()[1].blocks()[0].clone() - want_t1).norm() < 1e-12);
        assert!((q.ops()[0].blocks()[0].clone() - want_q0).norm() < 1e-12);
        assert!((q.ops()[1].blocks()[0].clone() - want_q1).norm() < 1e-12);
        assert!(t.verify_dual(&q, 1e-10).unwrap());
        assert!(t.classify(1e-9).is_frame());
        assert!(q.classify(1e-9).is_frame());

        // weighted system is not Parseval
        assert!(!sys.parseval_self_dual_check(1e-9));
        assert!(sys.frame_operator_conjugation_check(1e-9).unwrap());
    }

    #[test]
    fn two_full_projections_are_tight() {
        let sp = space(&[1], 2);
        let sys = FusionSystem::new(
            sp.clone(),
            vec![
                (
                    SubmoduleProjection::identity(&sp),
                    CentralWeight::uniform(1.0, 1).unwrap(),
                ),
                (
                    SubmoduleProjection::identity(&sp),
                    CentralWeight::uniform(1.0, 1).unwrap(),
                ),
            ],
        )
        .unwrap();
        let bounds = sys.optimal_bounds(1e-9);
        assert!((bounds.lower() - 2.0).abs() < 1e-12 && (bounds.upper() - 2.0).abs() < 1e-12);
        match sys.to_operator_frame().classify(1e-9) {
            FrameClass::Tight { lambda } => assert!((lambda - 2.0).abs() < 1e-12),
            other => panic!("expected tight, got {other:?}"),
        }
    }

    #[test]
    fn random_resolution_is_parseval_and_self_dual() {
        let sp = space(&[2], 2);
        let mut rng = rng_from_seed(77);
        let parts = random_identity_resolution(&mut rng, &sp, 3);
        let pairs = parts
            .into_iter()
            .map(|p| {
                (
                    SubmoduleProjection::new(p, 1e-9).unwrap(),
                    CentralWeight::uniform(1.0, 1).unwrap(),
                )
            })
            .collect();
        let sys = FusionSystem::new(sp, pairs).unwrap();
        assert!(sys.parseval_self_dual_check(1e-9));
    }

    #[test]
    fn random_noncommuting_system_checks() {
        let sp = space(&[2], 2);
        let mut rng = rng_from_seed(78);
        let ranks = vec![2usize];
        let pairs: Vec<(SubmoduleProjection, CentralWeight)> = (0..3)
            .map(|i| {
                let p = crate::sampling::random_projection_blocks(&mut rng, &sp, &ranks);
                (
                    SubmoduleProjection::new(p, 1e-9).unwrap(),
                    CentralWeight::uniform(1.0 + i as f64 * 0.5, 1).unwrap(),
                )
            })
            .collect();
        let sys = FusionSystem::new(sp, pairs).unwrap();
        if sys.optimal_bounds(1e-9).lower() > 1e-6 {
            let (t, q) = sys.dual_pair(1e-9).unwrap();
            assert!(t.dual_residual(&q).unwrap() < 1e-10);
            assert!(sys.frame_operator_conjugation_check(1e-9).unwrap());
        }
    }

    #[test]
    fn degenerate_system_refused() {
        let sp = space(&[1], 2);
        let p = diag_proj(&sp, &[1.0, 0.0]);
        let sys =
            FusionSystem::new(sp, vec![(p, CentralWeight::uniform(1.0, 1).unwrap())]).unwrap();
        assert!(matches!(
            sys.dual_pair(1e-9),
            Err(CoreError::NotAFusionFrame { .. })
        ));
    }

    #[test]
    fn projection_bounds_are_zero_or_one() {
        let sp = space(&[1], 2);
        let p = diag_proj(&sp, &[1.0, 0.0]);
        let frame = OperatorFrame::new(sp, vec![p.operator().clone()]).unwrap();
        let bounds = frame.optimal_bounds(1e-9);
        assert!(bounds.lower().abs() < 1e-12);
        assert!((bounds.upper() - 1.0).abs() < 1e-12);
    }
}
