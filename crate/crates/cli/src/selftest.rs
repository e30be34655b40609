//! Seeded invariant battery behind `proframe selftest`.
//!
//! Runs the full construction stack on deterministic random instances and
//! reports one line per check. Identical (seed, tol, rtol) produce byte
//! identical reports.

use proframe_core::sampling::{
    random_identity_resolution, random_invertible_operator, random_module_element,
    random_positive_element, random_projection_blocks, random_self_adjoint_invertible_operator,
    rng_from_seed,
};
use proframe_core::{
    deviation_constants, deviation_extremal_element, frame::random_theta_map, gen_frame,
    perturb_check, tensor_dual_check, tensor_frame, tensor_operator, AlgebraSignature,
    CentralWeight, FrameClass, FusionSystem, GenMode, ModuleOperator, ModuleSpace, OperatorFrame,
    SubmoduleProjection,
};

use crate::report::{fmt_f, Report};

fn space(dims: &[usize], rank: usize) -> ModuleSpace {
    ModuleSpace::new(AlgebraSignature::new(dims.to_vec()).unwrap(), rank).unwrap()
}

pub fn run(seed: u64, tol: f64, rtol: f64) -> Report {
    let mut report = Report::new(format!("selftest --seed {seed}"));
    report.info("tol", fmt_f(tol));
    report.info("rtol", fmt_f(rtol));

    let grid: &[(&[usize], usize, usize)] = &[(&[1], 2, 3), (&[2], 2, 4), (&[1, 2], 2, 5)];

    for (idx, &(dims, rank, count)) in grid.iter().enumerate() {
        let sp = space(dims, rank);
        let label = format!("sig {dims:?} rank {rank}");
        let frame = gen_frame(seed.wrapping_add(idx as u64), &sp, count, GenMode::Generic)
            .expect("count is positive");
        let bounds = frame.optimal_bounds(tol);
        let s = frame.frame_operator();
        let identity = ModuleOperator::identity(&sp);

        // frame sandwich
        let lower_shift = s.sub(&identity.scale(bounds.lower())).unwrap();
        let upper_shift = identity.scale(bounds.upper()).sub(&s).unwrap();
        report.check(
            format!("{label}: frame sandwich"),
            lower_shift.is_positive(tol.max(1e-9)) && upper_shift.is_positive(tol.max(1e-9)),
            format!("A={} B={}", fmt_f(bounds.lower()), fmt_f(bounds.upper())),
        );

        // reconstruction
        let mut rng = rng_from_seed(seed.wrapping_add(1000 + idx as u64));
        let x = random_module_element(&mut rng, &sp);
        let rec = frame.reconstruct(&x, tol).expect("generic frame");
        let res = rec.sub(&x).unwrap().max_module_seminorm() / 1.0f64.max(x.max_module_seminorm());
        report.check(format!("{label}: reconstruction"), res <= rtol, fmt_f(res));

        // canonical dual
        let dual = frame.canonical_dual(tol).expect("generic frame");
        let residual = frame.dual_residual(&dual).unwrap();
        let dual_bounds = dual.optimal_bounds(tol);
        report.check(
            format!("{label}: canonical dual residual"),
            residual <= tol.max(1e-10),
            fmt_f(residual),
        );
        report.check(
            format!("{label}: dual bounds reciprocal"),
            (dual_bounds.lower() - 1.0 / bounds.upper()).abs() <= rtol
                && (dual_bounds.upper() - 1.0 / bounds.lower()).abs()
                    <= rtol * (1.0 / bounds.lower()).max(1.0),
            format!(
                "({}, {})",
                fmt_f(dual_bounds.lower()),
                fmt_f(dual_bounds.upper())
            ),
        );

        // right composition window
        let q = random_self_adjoint_invertible_operator(&mut rng, &sp, 0.25);
        let (m_lo, m_hi) = q.surjectivity_bounds(tol).unwrap().unwrap();
        let (_, comp_bounds) = frame.compose_right(&q, tol).unwrap();
        report.check(
            format!("{label}: composition window"),
            comp_bounds.lower() >= bounds.lower() * m_lo - rtol
                && comp_bounds.upper() <= bounds.upper() * m_hi + rtol,
            format!(
                "[{}, {}] within [{}, {}]",
                fmt_f(comp_bounds.lower()),
                fmt_f(comp_bounds.upper()),
                fmt_f(bounds.lower() * m_lo),
                fmt_f(bounds.upper() * m_hi)
            ),
        );

        // two-sided comparison for invertible operators
        let mut sandwich_ok = true;
        for _ in 0..50 {
            let t = random_invertible_operator(&mut rng, &sp, 0.05);
            let y = random_module_element(&mut rng, &sp);
            sandwich_ok &= t.sandwich_check(&y, tol).unwrap();
        }
        report.check(
            format!("{label}: invertible operator sandwich"),
            sandwich_ok,
            "50 seeded instances",
        );

        // order monotonicity of seminorms
        let mut order_ok = true;
        for _ in 0..50 {
            let a = random_positive_element(&mut rng, sp.signature());
            let b = a
                .add(&random_positive_element(&mut rng, sp.signature()))
                .unwrap();
            for k in 0..sp.num_blocks() {
                order_ok &= a.seminorm(k).unwrap() <= b.seminorm(k).unwrap() + 1e-9;
            }
        }
        report.check(
            format!("{label}: seminorm order monotonicity"),
            order_ok,
            "50 seeded instances",
        );
    }

    // parseval and tight generation contracts
    let sp = space(&[1, 2], 2);
    let parseval = gen_frame(seed.wrapping_add(41), &sp, 4, GenMode::Parseval).unwrap();
    report.check(
        "gen parseval classifies parseval",
        parseval.classify(1e-8) == FrameClass::Parseval,
        parseval.classify(1e-8).to_string(),
    );
    let tight = gen_frame(seed.wrapping_add(42), &sp, 4, GenMode::Tight(4.0)).unwrap();
    let tb = tight.optimal_bounds(tol);
    report.check(
        "gen tight hits lambda",
        (tb.lower() - 4.0).abs() <= 1e-8 && (tb.upper() - 4.0).abs() <= 1e-8,
        format!("({}, {})", fmt_f(tb.lower()), fmt_f(tb.upper())),
    );

    // transport
    let mut rng = rng_from_seed(seed.wrapping_add(43));
    let sig = AlgebraSignature::new(vec![1, 2]).unwrap();
    let frame = gen_frame(seed.wrapping_add(44), &sp, 3, GenMode::Generic).unwrap();
    let theta = random_theta_map(&mut rng, &sig, 2, 2);
    match frame.transform(&theta, tol) {
        Ok((transported, tb)) => {
            let s_src = frame.frame_operator();
            let s_tgt = transported.frame_operator();
            let mut worst = 0.0f64;
            for _ in 0..8 {
                let x = random_module_element(&mut rng, &sp);
                let y = random_module_element(&mut rng, &sp);
                let x = x.scale(1.0 / x.max_module_seminorm().max(1e-9));
                let y = y.scale(1.0 / y.max_module_seminorm().max(1e-9));
                let lhs = s_tgt
                    .apply(&theta.apply(&x).unwrap())
                    .unwrap()
                    .inner_product(&theta.apply(&y).unwrap())
                    .unwrap();
                let rhs = theta
                    .hom()
                    .apply(&s_src.apply(&x).unwrap().inner_product(&y).unwrap())
                    .unwrap();
                worst = worst.max(lhs.sub(&rhs).unwrap().max_seminorm());
            }
            report.check("transport identity", worst <= rtol, fmt_f(worst));
            report.info(
                "transported bounds",
                format!("({}, {})", fmt_f(tb.lower()), fmt_f(tb.upper())),
            );
        }
        Err(err) => report.fail("transport", err.to_string()),
    }

    // perturbation: exact scalar case and a seeded window
    let sp1 = space(&[1], 1);
    let f1 = OperatorFrame::new(sp1.clone(), vec![ModuleOperator::identity(&sp1)]).unwrap();
    let r1 = OperatorFrame::new(
        sp1.clone(),
        vec![ModuleOperator::identity(&sp1).scale(0.25)],
    )
    .unwrap();
    let scalar = perturb_check(&f1, &r1, tol).unwrap();
    report.check(
        "perturbation scalar case",
        (scalar.frame_diff.lower() - 0.5625).abs() <= 1e-12
            && (scalar.frame_diff.upper() - 0.5625).abs() <= 1e-12,
        fmt_f(scalar.frame_diff.lower()),
    );
    let sp = space(&[2], 2);
    let f = gen_frame(seed.wrapping_add(45), &sp, 3, GenMode::Generic).unwrap();
    let raw = gen_frame(seed.wrapping_add(46), &sp, 3, GenMode::Generic).unwrap();
    let a = f.optimal_bounds(tol).lower();
    let shrink = (0.25 * a / raw.optimal_bounds(tol).upper()).sqrt();
    let r = OperatorFrame::new(
        sp.clone(),
        raw.ops().iter().map(|t| t.scale(shrink)).collect(),
    )
    .unwrap();
    let window = perturb_check(&f, &r, tol).unwrap();
    report.check(
        "perturbation window",
        window.satisfied && window.frame_diff.lower() >= window.guaranteed_lower - rtol,
        format!(
            "lower {} >= {}",
            fmt_f(window.frame_diff.lower()),
            fmt_f(window.guaranteed_lower)
        ),
    );

    // deviation constants: sampled domination and extremal attainment
    let g = gen_frame(seed.wrapping_add(47), &sp, 3, GenMode::Generic).unwrap();
    let constants = deviation_constants(&f, &g, tol).unwrap();
    let m_t = constants.m_against_t.unwrap();
    let diff = OperatorFrame::new(
        sp.clone(),
        f.ops()
            .iter()
            .zip(g.ops())
            .map(|(x, y)| x.sub(y).unwrap())
            .collect(),
    )
    .unwrap();
    let mut rng = rng_from_seed(seed.wrapping_add(48));
    let mut dominated = true;
    for _ in 0..50 {
        let x = random_module_element(&mut rng, &sp);
        for k in 0..sp.num_blocks() {
            let num = diff.energy(&x).unwrap().seminorm(k).unwrap();
            let den = f.energy(&x).unwrap().seminorm(k).unwrap();
            dominated &= num <= m_t * den + rtol * 1.0f64.max(m_t * den);
        }
    }
    let x_star = deviation_extremal_element(&f, &g, tol).unwrap();
    let attained =
        diff.energy(&x_star).unwrap().max_seminorm() / f.energy(&x_star).unwrap().max_seminorm();
    report.check(
        "deviation constant dominates samples",
        dominated,
        fmt_f(m_t),
    );
    report.check(
        "deviation constant attained",
        attained >= m_t - 1e-6,
        fmt_f(attained),
    );

    // tensor product
    let spx = space(&[1], 2);
    let spy = space(&[2], 1);
    let tf = gen_frame(seed.wrapping_add(49), &spx, 3, GenMode::Generic).unwrap();
    let tg = gen_frame(seed.wrapping_add(50), &spy, 2, GenMode::Generic).unwrap();
    let (product, pb) = tensor_frame(&tf, &tg, tol);
    let bf = tf.optimal_bounds(tol);
    let bg = tg.optimal_bounds(tol);
    report.check(
        "tensor bounds multiply",
        (pb.lower() - bf.lower() * bg.lower()).abs() <= rtol * 1.0f64.max(pb.lower())
            && (pb.upper() - bf.upper() * bg.upper()).abs() <= rtol * 1.0f64.max(pb.upper()),
        format!("({}, {})", fmt_f(pb.lower()), fmt_f(pb.upper())),
    );
    let factored = tensor_operator(&tf.frame_operator(), &tg.frame_operator());
    let tensor_residual = product
        .frame_operator()
        .sub(&factored)
        .unwrap()
        .uniform_norm();
    report.check(
        "tensor frame operator factorizes",
        tensor_residual <= rtol * 1.0f64.max(factored.uniform_norm()),
        fmt_f(tensor_residual),
    );
    let fd = tf.canonical_dual(tol).unwrap();
    let gd = tg.canonical_dual(tol).unwrap();
    report.check(
        "tensor dual transfer",
        tensor_dual_check(&tf, &fd, &tg, &gd, tol.max(1e-10)).unwrap_or(false),
        "canonical duals",
    );

    // fusion systems
    let sp = space(&[2], 2);
    let mut rng = rng_from_seed(seed.wrapping_add(51));
    let parts = random_identity_resolution(&mut rng, &sp, 3);
    let pairs: Vec<(SubmoduleProjection, CentralWeight)> = parts
        .into_iter()
        .map(|p| {
            (
                SubmoduleProjection::new(p, tol.max(1e-9)).unwrap(),
                CentralWeight::uniform(1.0, sp.num_blocks()).unwrap(),
            )
        })
        .collect();
    let parseval_sys = FusionSystem::new(sp.clone(), pairs).unwrap();
    report.check(
        "fusion resolution self-dual",
        parseval_sys.parseval_self_dual_check(tol),
        "unit-weight identity resolution",
    );
    let ranks: Vec<usize> = sp
        .signature()
        .block_dims()
        .iter()
        .map(|&n| (sp.rank() * n).div_ceil(2))
        .collect();
    let pairs: Vec<(SubmoduleProjection, CentralWeight)> = (0..3)
        .map(|i| {
            let p = random_projection_blocks(&mut rng, &sp, &ranks);
            (
                SubmoduleProjection::new(p, tol.max(1e-9)).unwrap(),
                CentralWeight::uniform(1.0 + 0.5 * i as f64, sp.num_blocks()).unwrap(),
            )
        })
        .collect();
    let sys = FusionSystem::new(sp, pairs).unwrap();
    if sys.optimal_bounds(tol).lower() > tol {
        match sys.dual_pair(tol) {
            Ok((t, q)) => {
                let residual = t.dual_residual(&q).unwrap();
                report.check(
                    "fusion dual pair residual",
                    residual <= tol.max(1e-10),
                    fmt_f(residual),
                );
            }
            Err(err) => report.fail("fusion dual pair", err.to_string()),
        }
        report.check(
            "fusion conjugation invariance",
            sys.frame_operator_conjugation_check(tol).unwrap_or(false),
            "weighted conjugated squares recover S",
        );
    } else {
        report.info("fusion dual pair", "skipped (system below frame floor)");
    }

    report
}
