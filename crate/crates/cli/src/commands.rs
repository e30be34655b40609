//! Subcommand definitions and dispatch.
//!
//! Input problems (unreadable files, malformed documents, unknown names,
//! bad flags) exit with code 2. A command that runs but whose mathematical
//! checks fail exits with code 1; all-green reports exit 0.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use proframe_core::sampling::{random_module_element, rng_from_seed};
use proframe_core::{
    deviation_constants, equivalence_check, gen_frame, perturb_check, tensor_dual_check,
    tensor_frame, tensor_operator, CoreError, FrameClass, GenMode, ModuleSpace, OperatorFrame,
};

use crate::document::{document_for_frame, emit_document, parse_document, FrameDocument};
use crate::error::CliError;
use crate::report::{fmt_f, Report};
use crate::selftest;

#[derive(Debug, Parser)]
#[command(
    name = "proframe",
    version,
    about = "Operator-frame workbench over products of matrix algebras"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Optimal frame bounds and classification of a family
    Bounds(DocArgs),
    /// Canonical dual frame, emitted as a document
    Dual(DocArgs),
    /// Verify that --other is a dual of --frame
    VerifyDual(DocArgs),
    /// Reconstruction residual on a supplied or seeded random element
    Reconstruct(DocArgs),
    /// Right-compose --frame with the first operator of --other
    Compose(DocArgs),
    /// Transport --frame along the theta map named by --other
    Transform(DocArgs),
    /// Perturbation window of --frame against --other
    Perturb(DocArgs),
    /// Optimal deviation constants between --frame and --other
    Deviation(DocArgs),
    /// Tensor product of --frame and --other over the same document
    Tensor(DocArgs),
    /// Fusion system: projections --frame weighted by --other
    Fusion(DocArgs),
    /// Generate a seeded random frame document
    Gen(GenArgs),
    /// Run the seeded invariant suite
    Selftest(SelftestArgs),
}

#[derive(Debug, Args)]
pub struct DocArgs {
    /// Input document (JSON)
    pub document: PathBuf,
    /// Name of the primary frame (optional when the document has one)
    #[arg(long)]
    pub frame: Option<String>,
    /// Name of the secondary object (frame, theta, weights or element)
    #[arg(long)]
    pub other: Option<String>,
    /// Seed for generated elements
    #[arg(long)]
    pub seed: Option<u64>,
    /// Structural tolerance
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
    /// Residual tolerance
    #[arg(long, default_value_t = 1e-8)]
    pub rtol: f64,
    /// Emit the report as JSON instead of markdown
    #[arg(long)]
    pub json: bool,
    /// Write the emitted document (dual, gen) to this path
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct GenArgs {
    /// Block dimensions, comma separated (e.g. 1,2)
    #[arg(long)]
    pub signature: String,
    /// Module rank
    #[arg(long, default_value_t = 1)]
    pub rank: usize,
    /// Number of operators
    #[arg(long, default_value_t = 4)]
    pub count: usize,
    /// generic | parseval | tight:<lambda> | near-singular
    #[arg(long, default_value = "generic")]
    pub mode: String,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Name of the generated frame inside the document
    #[arg(long, default_value = "F")]
    pub name: String,
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
    #[arg(long)]
    pub json: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SelftestArgs {
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
    #[arg(long, default_value_t = 1e-8)]
    pub rtol: f64,
    #[arg(long)]
    pub json: bool,
}

/// Runs a command to completion, printing its output. Returns the process
/// exit code.
pub fn execute(cli: Cli) -> i32 {
    match run(cli) {
        Ok(Outcome { stdout, pass }) => {
            print!("{stdout}");
            if pass {
                0
            } else {
                1
            }
        }
        Err(err) => {
            eprintln!("error: {err}");
            2
        }
    }
}

/// Rendered output plus the overall verdict.
pub struct Outcome {
    pub stdout: String,
    pub pass: bool,
}

fn write_out(path: &PathBuf, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|e| CliError::Write {
        path: path.display().to_string(),
        detail: e.to_string(),
    })
}

pub fn run(cli: Cli) -> Result<Outcome, CliError> {
    match cli.command {
        Command::Bounds(args) => cmd_bounds(args),
        Command::Dual(args) => cmd_dual(args),
        Command::VerifyDual(args) => cmd_verify_dual(args),
        Command::Reconstruct(args) => cmd_reconstruct(args),
        Command::Compose(args) => cmd_compose(args),
        Command::Transform(args) => cmd_transform(args),
        Command::Perturb(args) => cmd_perturb(args),
        Command::Deviation(args) => cmd_deviation(args),
        Command::Tensor(args) => cmd_tensor(args),
        Command::Fusion(args) => cmd_fusion(args),
        Command::Gen(args) => cmd_gen(args),
        Command::Selftest(args) => {
            let report = selftest::run(args.seed, args.tol, args.rtol);
            Ok(Outcome {
                pass: report.overall,
                stdout: report.render(args.json),
            })
        }
    }
}

fn load(args: &DocArgs) -> Result<(FrameDocument, String, OperatorFrame), CliError> {
    let doc = parse_document(&args.document)?;
    let name = doc.frame_name(args.frame.as_deref())?;
    let frame = doc.frame(&name)?;
    Ok((doc, name, frame))
}

fn other_name(args: &DocArgs) -> Result<&str, CliError> {
    args.other
        .as_deref()
        .ok_or_else(|| CliError::InvalidArg("--other is required for this command".into()))
}

fn finish(report: Report, args: &DocArgs) -> Result<Outcome, CliError> {
    Ok(Outcome {
        pass: report.overall,
        stdout: report.render(args.json),
    })
}

fn cmd_bounds(args: DocArgs) -> Result<Outcome, CliError> {
    let (_, name, frame) = load(&args)?;
    let mut report = Report::new(format!("bounds --frame {name}"));
    let bounds = frame.optimal_bounds(args.tol);
    let class = frame.classify(args.tol);
    report.info("space", frame.space().to_string());
    report.info("operators", frame.len().to_string());
    report.info("optimal lower bound A", fmt_f(bounds.lower()));
    report.info("optimal upper bound B", fmt_f(bounds.upper()));
    report.info("class", class.to_string());
    report.check(
        "frame operator positive",
        frame.frame_operator().is_positive(args.tol),
        "PSD per block",
    );
    report.check(
        "bounds ordered",
        bounds.lower() <= bounds.upper(),
        format!("{} <= {}", fmt_f(bounds.lower()), fmt_f(bounds.upper())),
    );
    finish(report, &args)
}

fn cmd_dual(args: DocArgs) -> Result<Outcome, CliError> {
    let (_, name, frame) = load(&args)?;
    let mut report = Report::new(format!("dual --frame {name}"));
    let dual = match frame.canonical_dual(args.tol) {
        Ok(dual) => dual,
        Err(err) => {
            report.fail("canonical dual", err.to_string());
            return finish(report, &args);
        }
    };
    let residual = frame.dual_residual(&dual).map_err(shape_from_core)?;
    report.info("duality residual", fmt_f(residual));
    report.check(
        "dual verifies",
        residual <= args.tol,
        format!("residual <= {}", fmt_f(args.tol)),
    );
    let bounds = frame.optimal_bounds(args.tol);
    let dual_bounds = dual.optimal_bounds(args.tol);
    report.info("dual lower bound", fmt_f(dual_bounds.lower()));
    report.info("dual upper bound", fmt_f(dual_bounds.upper()));
    report.check(
        "dual bounds are reciprocal",
        (dual_bounds.lower() - 1.0 / bounds.upper()).abs() <= args.rtol
            && (dual_bounds.upper() - 1.0 / bounds.lower()).abs()
                <= args.rtol * (1.0 / bounds.lower()).max(1.0),
        "dual bounds equal (1/B, 1/A)",
    );
    let mut out_doc = document_for_frame(&name, &frame);
    out_doc.insert_frame(&format!("{name}_dual"), &dual);
    let doc_text = emit_document(&out_doc);
    match &args.out {
        Some(path) => {
            write_out(path, &doc_text)?;
            report.info("document written", path.display().to_string());
            finish(report, &args)
        }
        None => Ok(Outcome {
            pass: report.overall,
            stdout: doc_text,
        }),
    }
}

fn cmd_verify_dual(args: DocArgs) -> Result<Outcome, CliError> {
    let (doc, name, frame) = load(&args)?;
    let other = other_name(&args)?;
    let dual = doc.frame(other)?;
    let mut report = Report::new(format!("verify-dual --frame {name} --other {other}"));
    match frame.dual_residual(&dual) {
        Ok(residual) => {
            report.info("duality residual", fmt_f(residual));
            report.check(
                "dual verifies",
                residual <= args.tol,
                format!("residual <= {}", fmt_f(args.tol)),
            );
        }
        Err(err) => report.fail("duality residual", err.to_string()),
    }
    finish(report, &args)
}

fn cmd_reconstruct(args: DocArgs) -> Result<Outcome, CliError> {
    let (doc, name, frame) = load(&args)?;
    let mut report = Report::new(format!("reconstruct --frame {name}"));
    let element = match &args.other {
        Some(elem_name) => {
            report.info("element", elem_name.clone());
            doc.element(elem_name)?
        }
        None => {
            let seed = args
                .seed
                .or_else(|| doc.seeds.get("default").copied())
                .unwrap_or(0);
            report.info("element", format!("random (seed {seed})"));
            let mut rng = rng_from_seed(seed);
            random_module_element(&mut rng, frame.space())
        }
    };
    match frame.reconstruct(&element, args.tol) {
        Ok(rec) => {
            let diff = rec.sub(&element).map_err(shape_from_core)?;
            let mut worst = 0.0f64;
            for (k, block) in diff.blocks().iter().enumerate() {
                let scale = 1.0f64.max(element.module_seminorm(k).map_err(shape_from_core)?);
                let res = block.map(|z| z.norm()).max() / scale;
                worst = worst.max(res);
            }
            report.info("worst relative residual", fmt_f(worst));
            report.check(
                "reconstruction",
                worst <= args.rtol,
                format!("residual <= {}", fmt_f(args.rtol)),
            );
        }
        Err(err) => report.fail("reconstruction", err.to_string()),
    }
    finish(report, &args)
}

fn cmd_compose(args: DocArgs) -> Result<Outcome, CliError> {
    let (doc, name, frame) = load(&args)?;
    let other = other_name(&args)?;
    let q_frame = doc.frame(other)?;
    let q = q_frame.ops()[0].clone();
    let mut report = Report::new(format!("compose --frame {name} --other {other}"));
    let bounds = frame.optimal_bounds(args.tol);
    match frame.compose_right(&q, args.tol) {
        Ok((_, new_bounds)) => {
            let (m_lo, m_hi) = q
                .surjectivity_bounds(args.tol)
                .map_err(shape_from_core)?
                .expect("compose_right already verified surjectivity");
            report.info("surjectivity window m'", fmt_f(m_lo));
            report.info("surjectivity window M'", fmt_f(m_hi));
            report.info("composed lower bound", fmt_f(new_bounds.lower()));
            report.info("composed upper bound", fmt_f(new_bounds.upper()));
            report.check(
                "composed bounds inside window",
                new_bounds.lower() >= bounds.lower() * m_lo - args.rtol
                    && new_bounds.upper() <= bounds.upper() * m_hi + args.rtol,
                "A·m' <= A' and B' <= B·M'",
            );
        }
        Err(err) => report.fail("composition", err.to_string()),
    }
    finish(report, &args)
}

fn cmd_transform(args: DocArgs) -> Result<Outcome, CliError> {
    let (doc, name, frame) = load(&args)?;
    let other = other_name(&args)?;
    let theta = doc.theta(other, args.tol)?;
    let mut report = Report::new(format!("transform --frame {name} --other {other}"));
    match frame.transform(&theta, args.tol) {
        Ok((transported, bounds)) => {
            let before = frame.optimal_bounds(args.tol);
            report.info("source lower bound", fmt_f(before.lower()));
            report.info("source upper bound", fmt_f(before.upper()));
            report.info("transported lower bound", fmt_f(bounds.lower()));
            report.info("transported upper bound", fmt_f(bounds.upper()));
            // sampled transport identity residual
            let s_src = frame.frame_operator();
            let s_tgt = transported.frame_operator();
            let mut rng = rng_from_seed(args.seed.unwrap_or(0));
            let mut worst = 0.0f64;
            for _ in 0..8 {
                let x = random_module_element(&mut rng, frame.space());
                let y = random_module_element(&mut rng, frame.space());
                let x = x.scale(1.0 / x.max_module_seminorm().max(1e-9));
                let y = y.scale(1.0 / y.max_module_seminorm().max(1e-9));
                let run = || -> Result<f64, CoreError> {
                    let lhs = s_tgt
                        .apply(&theta.apply(&x)?)?
                        .inner_product(&theta.apply(&y)?)?;
                    let rhs = theta.hom().apply(&s_src.apply(&x)?.inner_product(&y)?)?;
                    Ok(lhs.sub(&rhs)?.max_seminorm())
                };
                match run() {
                    Ok(res) => worst = worst.max(res),
                    Err(err) => {
                        report.fail("transport identity", err.to_string());
                        return finish(report, &args);
                    }
                }
            }
            report.info("transport identity residual", fmt_f(worst));
            report.check(
                "frame operator transports",
                worst <= args.rtol,
                format!("residual <= {}", fmt_f(args.rtol)),
            );
        }
        Err(err) => report.fail("transform", err.to_string()),
    }
    finish(report, &args)
}

fn cmd_perturb(args: DocArgs) -> Result<Outcome, CliError> {
    let (doc, name, frame) = load(&args)?;
    let other = other_name(&args)?;
    let r = doc.frame(other)?;
    let mut report = Report::new(format!("perturb --frame {name} --other {other}"));
    match perturb_check(&frame, &r, args.tol) {
        Ok(out) => {
            report.info("reference lower bound A", fmt_f(out.bounds_t.lower()));
            report.info("reference upper bound B", fmt_f(out.bounds_t.upper()));
            report.info("perturbation Bessel bound M", fmt_f(out.bessel_r));
            report.info("difference lower bound", fmt_f(out.frame_diff.lower()));
            report.info("difference upper bound", fmt_f(out.frame_diff.upper()));
            report.info("guaranteed lower (√A−√M)²", fmt_f(out.guaranteed_lower));
            let a = out.bounds_t.lower();
            let b = out.bounds_t.upper();
            let m = out.bessel_r;
            if m < a {
                report.check("difference family is a frame", out.satisfied, "M < A");
                report.check(
                    "difference bounds inside guaranteed window",
                    out.frame_diff.lower() >= out.guaranteed_lower - args.rtol
                        && out.frame_diff.upper() <= (b.sqrt() + m.sqrt()).powi(2) + args.rtol,
                    "(√A−√M)² <= A' and B' <= (√B+√M)²",
                );
            } else {
                report.info("window", "not applicable (M >= A)");
            }
        }
        Err(err) => report.fail("perturbation", err.to_string()),
    }
    finish(report, &args)
}

fn cmd_deviation(args: DocArgs) -> Result<Outcome, CliError> {
    let (doc, name, frame) = load(&args)?;
    let other = other_name(&args)?;
    let r = doc.frame(other)?;
    let mut report = Report::new(format!("deviation --frame {name} --other {other}"));
    match deviation_constants(&frame, &r, args.tol) {
        Ok(constants) => {
            report.info(
                "constant against reference",
                constants
                    .m_against_t
                    .map_or("absent (reference not a frame)".into(), fmt_f),
            );
            report.info(
                "constant against perturbed",
                constants
                    .m_against_r
                    .map_or("absent (perturbed not a frame)".into(), fmt_f),
            );
            if let Some(min) = constants.combined_min() {
                report.info("smaller one-sided constant", fmt_f(min));
            }
            if let Some(joint) = constants.joint() {
                report.info("joint constant", fmt_f(joint));
            }
            match equivalence_check(&frame, &r, args.tol) {
                Ok(equivalent) => report.check(
                    "families are equivalent frames",
                    equivalent,
                    "second family is a frame with consistent derived bounds",
                ),
                Err(err) => report.fail("equivalence", err.to_string()),
            }
        }
        Err(err) => report.fail("deviation constants", err.to_string()),
    }
    finish(report, &args)
}

fn cmd_tensor(args: DocArgs) -> Result<Outcome, CliError> {
    let (doc, name, frame) = load(&args)?;
    let other = other_name(&args)?;
    let g = doc.frame(other)?;
    let mut report = Report::new(format!("tensor --frame {name} --other {other}"));
    let (product, bounds) = tensor_frame(&frame, &g, args.tol);
    let bf = frame.optimal_bounds(args.tol);
    let bg = g.optimal_bounds(args.tol);
    report.info("product operators", product.len().to_string());
    report.info("product lower bound", fmt_f(bounds.lower()));
    report.info("product upper bound", fmt_f(bounds.upper()));
    report.check(
        "bounds multiply",
        (bounds.lower() - bf.lower() * bg.lower()).abs() <= args.rtol * 1.0f64.max(bounds.lower())
            && (bounds.upper() - bf.upper() * bg.upper()).abs()
                <= args.rtol * 1.0f64.max(bounds.upper()),
        "A⊗C = A·C and B⊗D = B·D",
    );
    let factored = tensor_operator(&frame.frame_operator(), &g.frame_operator());
    let residual = product
        .frame_operator()
        .sub(&factored)
        .map_err(shape_from_core)?
        .uniform_norm();
    report.info("frame operator factorization residual", fmt_f(residual));
    report.check(
        "frame operator factorizes",
        residual <= args.rtol * 1.0f64.max(factored.uniform_norm()),
        "S of the product equals the operator tensor of the factors",
    );
    if frame.classify(args.tol).is_frame() && g.classify(args.tol).is_frame() {
        let run = || -> Result<bool, CoreError> {
            let fd = frame.canonical_dual(args.tol)?;
            let gd = g.canonical_dual(args.tol)?;
            tensor_dual_check(&frame, &fd, &g, &gd, args.tol.max(1e-10))
        };
        match run() {
            Ok(ok) => report.check("canonical duals tensor to a dual", ok, "dual transfer"),
            Err(err) => report.fail("dual transfer", err.to_string()),
        }
    }
    finish(report, &args)
}

fn cmd_fusion(args: DocArgs) -> Result<Outcome, CliError> {
    let doc = parse_document(&args.document)?;
    let proj_name = match &args.frame {
        Some(name) => name.clone(),
        None if doc.projections.len() == 1 => doc.projections.keys().next().unwrap().clone(),
        None => {
            return Err(CliError::InvalidArg(
                "--frame must name a projection family".into(),
            ))
        }
    };
    let weight_name = match &args.other {
        Some(name) => name.clone(),
        None if doc.weights.len() == 1 => doc.weights.keys().next().unwrap().clone(),
        None => {
            return Err(CliError::InvalidArg(
                "--other must name a weight family".into(),
            ))
        }
    };
    let sys = doc.fusion_system(&proj_name, &weight_name, args.tol)?;
    let mut report = Report::new(format!("fusion --frame {proj_name} --other {weight_name}"));
    let bounds = sys.optimal_bounds(args.tol);
    report.info("fusion lower bound", fmt_f(bounds.lower()));
    report.info("fusion upper bound", fmt_f(bounds.upper()));
    report.info(
        "class",
        sys.to_operator_frame().classify(args.tol).to_string(),
    );
    match sys.dual_pair(args.tol) {
        Ok((t, q)) => {
            let residual = t.dual_residual(&q).map_err(shape_from_core)?;
            report.info("dual pair residual", fmt_f(residual));
            report.check(
                "dual pair verifies",
                residual <= args.tol.max(1e-10),
                format!("residual <= {}", fmt_f(args.tol.max(1e-10))),
            );
            match sys.frame_operator_conjugation_check(args.tol) {
                Ok(ok) => report.check(
                    "frame operator conjugation invariance",
                    ok,
                    "weighted conjugated squares recover S",
                ),
                Err(err) => report.fail("conjugation invariance", err.to_string()),
            }
        }
        Err(err) => report.fail("dual pair", err.to_string()),
    }
    report.info(
        "parseval self-dual",
        sys.parseval_self_dual_check(args.tol).to_string(),
    );
    finish(report, &args)
}

fn parse_mode(mode: &str) -> Result<GenMode, CliError> {
    match mode {
        "generic" => Ok(GenMode::Generic),
        "parseval" => Ok(GenMode::Parseval),
        "near-singular" => Ok(GenMode::NearSingular),
        other => {
            if let Some(rest) = other.strip_prefix("tight:") {
                let lambda: f64 = rest.parse().map_err(|_| {
                    CliError::InvalidArg(format!("bad tight mode '{other}', want tight:<lambda>"))
                })?;
                if lambda <= 0.0 || !lambda.is_finite() {
                    return Err(CliError::InvalidArg(format!(
                        "tight lambda must be positive and finite, got {lambda}"
                    )));
                }
                Ok(GenMode::Tight(lambda))
            } else {
                Err(CliError::InvalidArg(format!(
                    "unknown mode '{other}' (generic | parseval | tight:<lambda> | near-singular)"
                )))
            }
        }
    }
}

fn cmd_gen(args: GenArgs) -> Result<Outcome, CliError> {
    let dims: Vec<usize> = args
        .signature
        .split(',')
        .map(|s| {
            s.trim()
                .parse::<usize>()
                .map_err(|_| CliError::InvalidArg(format!("bad signature entry '{s}'")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let mode = parse_mode(&args.mode)?;
    let space = proframe_core::AlgebraSignature::new(dims)
        .and_then(|sig| ModuleSpace::new(sig, args.rank))
        .map_err(|e| CliError::InvalidArg(e.to_string()))?;
    let frame = gen_frame(args.seed, &space, args.count, mode)
        .map_err(|e| CliError::InvalidArg(e.to_string()))?;
    let mut doc = document_for_frame(&args.name, &frame);
    doc.seeds.insert("default".into(), args.seed);
    let mut report = Report::new(format!(
        "gen --signature {} --rank {} --count {} --mode {} --seed {}",
        args.signature, args.rank, args.count, args.mode, args.seed
    ));
    let bounds = frame.optimal_bounds(args.tol);
    report.info("lower bound", fmt_f(bounds.lower()));
    report.info("upper bound", fmt_f(bounds.upper()));
    report.info("class", frame.classify(args.tol).to_string());
    let mode_ok = match mode {
        GenMode::Generic => true,
        GenMode::Parseval => frame.classify(1e-8) == FrameClass::Parseval,
        GenMode::Tight(lambda) => {
            (bounds.lower() - lambda).abs() <= 1e-8 * lambda.max(1.0)
                && (bounds.upper() - lambda).abs() <= 1e-8 * lambda.max(1.0)
        }
        GenMode::NearSingular => bounds.lower() <= 1e-6,
    };
    report.check("mode contract", mode_ok, args.mode.clone());
    let text = emit_document(&doc);
    match &args.out {
        Some(path) => {
            write_out(path, &text)?;
            report.info("document written", path.display().to_string());
            Ok(Outcome {
                pass: report.overall,
                stdout: report.render(args.json),
            })
        }
        None => Ok(Outcome {
            pass: report.overall,
            stdout: text,
        }),
    }
}

fn shape_from_core(err: CoreError) -> CliError {
    CliError::Shape {
        object: "document object".into(),
        detail: err.to_string(),
    }
}
