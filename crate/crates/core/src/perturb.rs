//! Stability of operator frames under perturbation, and the optimal
//! deviation constants comparing one family's energy against another's.
//!
//! For two families with blocks `{M_i}` and `{N_i}`, horizontal stacking
//! turns the frame operators into Gram matrices of stacked blocks, so
//! singular-value perturbation bounds give the guaranteed window for the
//! difference family: when the Bessel bound `M` of the perturbing family
//! stays below the lower bound `A` of the reference, the difference family
//! is a frame with lower bound at least `(√A − √M)²` and upper bound at
//! most `(√B + √M)²`.

use crate::error::{CoreError, Result};
use crate::frame::{FrameBounds, OperatorFrame};
use crate::linalg::{self, CMat};
use crate::module::ModuleOperator;

/// Outcome of comparing a frame against a perturbing family.
#[derive(Debug, Clone, PartialEq)]
pub struct PerturbationReport {
    /// Optimal bounds of the reference frame.
    pub bounds_t: FrameBounds,
    /// Optimal Bessel (upper) bound of the perturbing family.
    pub bessel_r: f64,
    /// Optimal bounds of the difference family `{T_i − R_i}`.
    pub frame_diff: FrameBounds,
    /// `(√A − √M)²`, the certified lower bound when `M < A`.
    pub guaranteed_lower: f64,
    /// Whether the certified window held (vacuously true when `M ≥ A`).
    pub satisfied: bool,
}

fn difference_family(f: &OperatorFrame, r: &OperatorFrame) -> Result<OperatorFrame> {
    f.space().check_same(r.space())?;
    if f.len() != r.len() {
        return Err(CoreError::LengthMismatch {
            got: r.len(),
            expected: f.len(),
        });
    }
    let ops = f
        .ops()
        .iter()
        .zip(r.ops())
        .map(|(t, u)| t.sub(u))
        .collect::<Result<Vec<_>>>()?;
    OperatorFrame::new(f.space().clone(), ops)
}

/// Evaluates the perturbation statement: optimal bounds of the reference,
/// the perturbing family's Bessel bound, and the difference family's
/// optimal bounds with the certified lower guarantee.
pub fn perturb_check(f: &OperatorFrame, r: &OperatorFrame, tol: f64) -> Result<PerturbationReport> {
    let diff = difference_family(f, r)?;
    let bounds_t = f.optimal_bounds(tol);
    let bessel_r = r.optimal_bounds(tol).upper();
    let frame_diff = diff.optimal_bounds(tol);
    let a = bounds_t.lower();
    let guaranteed_lower = (a.sqrt() - bessel_r.sqrt()).powi(2);
    let satisfied = if bessel_r < a {
        frame_diff.lower() > tol
    } else {
        true
    };
    Ok(PerturbationReport {
        bounds_t,
        bessel_r,
        frame_diff,
        guaranteed_lower,
        satisfied,
    })
}

/// One-sided optimal deviation constants. Each side is present only when
/// its reference family is a frame; the constant is the largest eigenvalue
/// of the difference Gram matrix whitened by the reference frame operator,
/// maximized over blocks.
#[derive(Debug, Clone, PartialEq)]
pub struct DeviationConstants {
    /// Smallest `λ` with `energy(T−R) ≤ λ · energy(T)` pointwise.
    pub m_against_t: Option<f64>,
    /// Smallest `λ` with `energy(T−R) ≤ λ · energy(R)` pointwise.
    pub m_against_r: Option<f64>,
}

impl DeviationConstants {
    /// The smaller of the two one-sided constants.
    pub fn combined_min(&self) -> Option<f64> {
        match (self.m_against_t, self.m_against_r) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (Some(a), None) => Some(a),
            (None, Some(b)) => Some(b),
            (None, None) => None,
        }
    }

    /// Smallest constant `M` for which the deviation energy is bounded by
    /// `M` times the *minimum* of the two reference energies at every
    /// element; this is the larger of the two one-sided constants, and the
    /// constant under which the derived two-sided bound window for the
    /// second family is valid.
    pub fn joint(&self) -> Option<f64> {
        match (self.m_against_t, self.m_against_r) {
            (Some(a), Some(b)) => Some(a.max(b)),
            _ => None,
        }
    }
}

/// Per block, the Gram matrix of the stacked difference blocks.
fn difference_gram(f: &OperatorFrame, r: &OperatorFrame, k: usize) -> CMat {
    let d = f.space().operator_dim(k).expect("valid block");
    let mut acc = CMat::zeros(d, d);
    for (t, u) in f.ops().iter().zip(r.ops()) {
        let m = &t.blocks()[k] - &u.blocks()[k];
        acc += &m * m.adjoint();
    }
    linalg::symmetrize(&acc)
}

fn whitened_pencil_max(
    diff_gram: impl Fn(usize) -> CMat,
    reference: &ModuleOperator,
    tol: f64,
) -> Result<f64> {
    let white = reference.inv_sqrt(tol)?;
    let mut worst = 0.0f64;
    for k in 0..reference.space().num_blocks() {
        let w = &white.blocks()[k];
        let pencil = w * diff_gram(k) * w;
        worst = worst.max(linalg::hermitian_eigen(&pencil).max());
    }
    Ok(worst)
}

/// Optimal one-sided deviation constants of `(F, R)` via whitening of the
/// reference frame operator. A rank-one element built from the extremal
/// whitened eigenvector attains each constant.
pub fn deviation_constants(
    f: &OperatorFrame,
    r: &OperatorFrame,
    tol: f64,
) -> Result<DeviationConstants> {
    f.space().check_same(r.space())?;
    if f.len() != r.len() {
        return Err(CoreError::LengthMismatch {
            got: r.len(),
            expected: f.len(),
        });
    }
    let m_against_t = if f.classify(tol).is_frame() {
        Some(whitened_pencil_max(
            |k| difference_gram(f, r, k),
            &f.frame_operator(),
            tol,
        )?)
    } else {
        None
    };
    let m_against_r = if r.classify(tol).is_frame() {
        Some(whitened_pencil_max(
            |k| difference_gram(f, r, k),
            &r.frame_operator(),
            tol,
        )?)
    } else {
        None
    };
    Ok(DeviationConstants {
        m_against_t,
        m_against_r,
    })
}

/// An element whose deviation-to-reference energy ratio attains the
/// one-sided constant against `F`: the whitened extremal eigenvector,
/// pulled back through the whitening and planted as a single row of the
/// achieving block.
pub fn deviation_extremal_element(
    f: &OperatorFrame,
    r: &OperatorFrame,
    tol: f64,
) -> Result<crate::module::ModuleElement> {
    f.space().check_same(r.space())?;
    let white = f.frame_operator().inv_sqrt(tol)?;
    let mut best: Option<(f64, usize, CMat)> = None;
    for k in 0..f.space().num_blocks() {
        let w = &white.blocks()[k];
        let pencil = w * difference_gram(f, r, k) * w;
        let eig = linalg::hermitian_eigen(&pencil);
        let top = eig.values.len() - 1;
        if best.as_ref().is_none_or(|(v, _, _)| eig.max() > *v) {
            let direction = w * eig.vector(top);
            best = Some((eig.max(), k, direction));
        }
    }
    let (_, k_star, direction) = best.expect("at least one block");
    let space = f.space().clone();
    let mut blocks: Vec<CMat> = space
        .signature()
        .block_dims()
        .iter()
        .map(|&n| CMat::zeros(n, space.rank() * n))
        .collect();
    let row = direction.adjoint();
    blocks[k_star]
        .view_mut((0, 0), (1, row.ncols()))
        .copy_from(&row);
    crate::module::ModuleElement::from_blocks(space, blocks)
}

/// Frame-equivalence test: returns whether `R` is a frame, verifying on the
/// way that the one-sided constants exist exactly when they should and that
/// the derived two-sided window for `R`'s optimal bounds holds under the
/// joint constant.
pub fn equivalence_check(f: &OperatorFrame, r: &OperatorFrame, tol: f64) -> Result<bool> {
    let bounds_f = f.optimal_bounds(tol);
    if bounds_f.lower() <= tol {
        return Err(CoreError::NotAFrame {
            lower: bounds_f.lower(),
            tol,
        });
    }
    let constants = deviation_constants(f, r, tol)?;
    let r_is_frame = r.classify(tol).is_frame();
    if !r_is_frame {
        return Ok(false);
    }
    if constants.m_against_r.is_none() {
        return Ok(false);
    }
    let Some(m) = constants.joint() else {
        return Ok(false);
    };
    let (a, b) = (bounds_f.lower(), bounds_f.upper());
    let bounds_r = r.optimal_bounds(tol);
    let lower_ok = bounds_r.lower() >= a / (m.sqrt() + 1.0).powi(2) - tol.max(1e-8);
    let upper_ok = bounds_r.upper() <= b * (m.sqrt() + 1.0).powi(2) + tol.max(1e-8);
    Ok(lower_ok && upper_ok)
}
