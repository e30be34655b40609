//! Seeded random generation of algebra elements, module elements,
//! operators, unitaries and projections.
//!
//! Everything here is deterministic for a fixed seed and draw order, which
//! the self-test and golden-file machinery rely on.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::algebra::{AlgebraElement, AlgebraSignature, BlockHom};
use crate::linalg::{cplx, CMat};
use crate::module::{ModuleElement, ModuleOperator, ModuleSpace};

/// The RNG used everywhere; one stream per seeded task.
pub type SeededRng = ChaCha8Rng;

pub fn rng_from_seed(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn normal(rng: &mut SeededRng) -> f64 {
    rng.sample(StandardNormal)
}

/// Matrix with independent standard complex Gaussian entries.
pub fn complex_gaussian(rng: &mut SeededRng, rows: usize, cols: usize) -> CMat {
    let inv_sqrt2 = std::f64::consts::FRAC_1_SQRT_2;
    CMat::from_fn(rows, cols, |_, _| {
        let re = normal(rng) * inv_sqrt2;
        let im = normal(rng) * inv_sqrt2;
        cplx(re, im)
    })
}

/// Haar-ish random unitary: QR of a Gaussian matrix with the phases of the
/// triangular factor's diagonal absorbed into the columns.
pub fn random_unitary(rng: &mut SeededRng, n: usize) -> CMat {
    let g = complex_gaussian(rng, n, n);
    let qr = g.qr();
    let r = qr.r();
    let mut q = qr.q();
    for j in 0..n {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 {
            d / d.norm()
        } else {
            cplx(1.0, 0.0)
        };
        for i in 0..n {
            q[(i, j)] *= phase.conj();
        }
    }
    q
}

pub fn random_algebra_element(rng: &mut SeededRng, signature: &AlgebraSignature) -> AlgebraElement {
    let blocks = signature
        .block_dims()
        .iter()
        .map(|&n| complex_gaussian(rng, n, n))
        .collect();
    AlgebraElement::from_blocks(signature.clone(), blocks).expect("generated shapes are valid")
}

pub fn random_hermitian_element(
    rng: &mut SeededRng,
    signature: &AlgebraSignature,
) -> AlgebraElement {
    let g = random_algebra_element(rng, signature);
    g.add(&g.adjoint()).expect("same signature").scale(0.5)
}

/// Random positive element `g*g`.
pub fn random_positive_element(
    rng: &mut SeededRng,
    signature: &AlgebraSignature,
) -> AlgebraElement {
    let g = random_algebra_element(rng, signature);
    g.adjoint().mul(&g).expect("same signature")
}

/// Random positive element with spectrum bounded below by `floor`.
pub fn random_positive_invertible_element(
    rng: &mut SeededRng,
    signature: &AlgebraSignature,
    floor: f64,
) -> AlgebraElement {
    let p = random_positive_element(rng, signature);
    let shift = AlgebraElement::unit(signature).scale(floor);
    p.add(&shift).expect("same signature")
}

pub fn random_module_element(rng: &mut SeededRng, space: &ModuleSpace) -> ModuleElement {
    let blocks = space
        .signature()
        .block_dims()
        .iter()
        .map(|&n| complex_gaussian(rng, n, space.rank() * n))
        .collect();
    ModuleElement::from_blocks(space.clone(), blocks).expect("generated shapes are valid")
}

pub fn random_operator(rng: &mut SeededRng, space: &ModuleSpace) -> ModuleOperator {
    let blocks = (0..space.num_blocks())
        .map(|k| {
            let d = space.operator_dim(k).expect("valid block");
            complex_gaussian(rng, d, d)
        })
        .collect();
    ModuleOperator::from_blocks(space.clone(), blocks).expect("generated shapes are valid")
}

pub fn random_self_adjoint_operator(rng: &mut SeededRng, space: &ModuleSpace) -> ModuleOperator {
    let g = random_operator(rng, space);
    g.add(&g.adjoint()).expect("same space").scale(0.5)
}

/// Random self-adjoint operator with every block's spectrum kept away
/// from zero: `g*g + floor·I` per block.
pub fn random_self_adjoint_invertible_operator(
    rng: &mut SeededRng,
    space: &ModuleSpace,
    floor: f64,
) -> ModuleOperator {
    let g = random_operator(rng, space);
    let gram = g.adjoint().compose(&g).expect("same space");
    gram.add(&ModuleOperator::identity(space).scale(floor))
        .expect("same space")
}

/// Random invertible (not necessarily self-adjoint) operator: a Gaussian
/// draw shifted so that every block clears the singular-value floor.
pub fn random_invertible_operator(
    rng: &mut SeededRng,
    space: &ModuleSpace,
    floor: f64,
) -> ModuleOperator {
    loop {
        let g = random_operator(rng, space);
        if g.min_singular_value() > floor {
            return g;
        }
    }
}

/// Random orthogonal projection of the given per-block ranks, built from
/// the leading columns of a random unitary.
pub fn random_projection_blocks(
    rng: &mut SeededRng,
    space: &ModuleSpace,
    ranks: &[usize],
) -> ModuleOperator {
    let blocks: Vec<CMat> = (0..space.num_blocks())
        .map(|k| {
            let d = space.operator_dim(k).expect("valid block");
            let r = ranks[k].min(d);
            let u = random_unitary(rng, d);
            let cols = u.columns(0, r);
            cols * cols.adjoint()
        })
        .collect();
    ModuleOperator::from_blocks(space.clone(), blocks).expect("generated shapes are valid")
}

/// Resolution of the identity: splits a random unitary's columns into
/// `parts` groups per block and returns the corresponding projections,
/// which sum to the identity in every block.
pub fn random_identity_resolution(
    rng: &mut SeededRng,
    space: &ModuleSpace,
    parts: usize,
) -> Vec<ModuleOperator> {
    let dims: Vec<usize> = (0..space.num_blocks())
        .map(|k| space.operator_dim(k).expect("valid block"))
        .collect();
    let unitaries: Vec<CMat> = dims.iter().map(|&d| random_unitary(rng, d)).collect();
    (0..parts)
        .map(|part| {
            let blocks: Vec<CMat> = dims
                .iter()
                .zip(&unitaries)
                .map(|(&d, u)| {
                    // contiguous column group [start, end) for this part
                    let start = part * d / parts;
                    let end = (part + 1) * d / parts;
                    if end > start {
                        let cols = u.columns(start, end - start);
                        cols * cols.adjoint()
                    } else {
                        CMat::zeros(d, d)
                    }
                })
                .collect();
            ModuleOperator::from_blocks(space.clone(), blocks).expect("generated shapes are valid")
        })
        .collect()
}

/// Random block homomorphism into a target with `target_blocks` blocks,
/// each fed by a uniformly chosen source block, conjugated by a random
/// unitary.
pub fn random_block_hom(
    rng: &mut SeededRng,
    source: &AlgebraSignature,
    target_blocks: usize,
) -> BlockHom {
    let block_map: Vec<usize> = (0..target_blocks)
        .map(|_| rng.random_range(0..source.num_blocks()))
        .collect();
    let dims: Vec<usize> = block_map.iter().map(|&s| source.block_dims()[s]).collect();
    let target = AlgebraSignature::new(dims.clone()).expect("nonempty target");
    let conjugators: Vec<CMat> = dims.iter().map(|&n| random_unitary(rng, n)).collect();
    BlockHom::new(source.clone(), target, block_map, conjugators, 1e-9)
        .expect("constructed hom is valid")
}
