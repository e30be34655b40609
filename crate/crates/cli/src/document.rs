//! JSON document format: signatures, frames, projections, weights,
//! homomorphisms, transport maps, elements and seeds in one file.
//!
//! Every complex entry is a two-element `[re, im]` array and every number
//! must be a finite double; shapes are validated on conversion with errors
//! naming the offending object. Maps are ordered, so emission is
//! deterministic and `emit(parse(d))` parses back equal.

use std::collections::BTreeMap;
use std::path::Path;

use num_complex::Complex64;
use proframe_core::{
    AlgebraElement, AlgebraSignature, BlockHom, CMat, CentralWeight, FusionSystem, ModuleElement,
    ModuleOperator, ModuleSpace, OperatorFrame, SubmoduleProjection, ThetaMap,
};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

pub type Entry = [f64; 2];
/// Row-major complex matrix.
pub type MatrixDoc = Vec<Vec<Entry>>;
/// One square matrix per block.
pub type OperatorDoc = Vec<MatrixDoc>;
/// One `n_k × (m·n_k)` matrix per block.
pub type ElementDoc = Vec<MatrixDoc>;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HomDoc {
    /// Target signature block dimensions.
    pub target: Vec<usize>,
    /// Source block feeding each target block.
    pub block_map: Vec<usize>,
    /// Unitary conjugator per target block.
    pub conjugators: Vec<MatrixDoc>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThetaDoc {
    pub hom: HomDoc,
    /// Unitary module conjugator per target block, `(m·n'_l)` square.
    pub module_conjugators: Vec<MatrixDoc>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrameDocument {
    pub signature: Vec<usize>,
    pub rank: usize,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub frames: BTreeMap<String, Vec<OperatorDoc>>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub projections: BTreeMap<String, Vec<OperatorDoc>>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub weights: BTreeMap<String, Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub homs: BTreeMap<String, HomDoc>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub thetas: BTreeMap<String, ThetaDoc>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub elements: BTreeMap<String, ElementDoc>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub seeds: BTreeMap<String, u64>,
}

pub fn parse_document(path: &Path) -> Result<FrameDocument, CliError> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        detail: source.to_string(),
    })?;
    // serde_json's message already carries line and column
    let doc: FrameDocument = serde_json::from_str(&text).map_err(|err| CliError::Parse {
        path: path.display().to_string(),
        detail: err.to_string(),
    })?;
    validate(&doc).map_err(|err| match err {
        CliError::Shape { object, detail } => CliError::Shape {
            object: format!("{} (in {})", object, path.display()),
            detail,
        },
        other => other,
    })?;
    Ok(doc)
}

pub fn emit_document(doc: &FrameDocument) -> String {
    let mut text = serde_json::to_string_pretty(doc).expect("document serializes");
    text.push('\n');
    text
}

fn check_finite(object: &str, value: f64) -> Result<(), CliError> {
    if !value.is_finite() {
        return Err(CliError::Shape {
            object: object.to_string(),
            detail: format!("non-finite number {value}"),
        });
    }
    Ok(())
}

fn matrix_shape_ok(object: &str, m: &MatrixDoc, rows: usize, cols: usize) -> Result<(), CliError> {
    if m.len() != rows || m.iter().any(|r| r.len() != cols) {
        return Err(CliError::Shape {
            object: object.to_string(),
            detail: format!(
                "expected {rows}x{cols}, got {}x{}",
                m.len(),
                m.first().map_or(0, Vec::len)
            ),
        });
    }
    for row in m {
        for &[re, im] in row {
            check_finite(object, re)?;
            check_finite(object, im)?;
        }
    }
    Ok(())
}

/// Structural validation of every object in the document.
pub fn validate(doc: &FrameDocument) -> Result<(), CliError> {
    if doc.signature.is_empty() || doc.signature.contains(&0) {
        return Err(CliError::Shape {
            object: "signature".into(),
            detail: "needs at least one block of dimension >= 1".into(),
        });
    }
    if doc.rank == 0 {
        return Err(CliError::Shape {
            object: "rank".into(),
            detail: "must be at least 1".into(),
        });
    }
    let op_dims: Vec<usize> = doc.signature.iter().map(|&n| doc.rank * n).collect();
    for (name, ops) in &doc.frames {
        if ops.is_empty() {
            return Err(CliError::Shape {
                object: format!("frame '{name}'"),
                detail: "operator family is empty".into(),
            });
        }
        for (i, op) in ops.iter().enumerate() {
            check_operator_doc(&format!("frame '{name}' operator {i}"), op, &op_dims)?;
        }
    }
    for (name, ops) in &doc.projections {
        for (i, op) in ops.iter().enumerate() {
            check_operator_doc(&format!("projection '{name}' entry {i}"), op, &op_dims)?;
        }
    }
    for (name, family) in &doc.weights {
        for (i, per_block) in family.iter().enumerate() {
            if per_block.len() != doc.signature.len() {
                return Err(CliError::Shape {
                    object: format!("weights '{name}' entry {i}"),
                    detail: format!(
                        "expected {} per-block scalars, got {}",
                        doc.signature.len(),
                        per_block.len()
                    ),
                });
            }
            for &v in per_block {
                check_finite(&format!("weights '{name}' entry {i}"), v)?;
            }
        }
    }
    for (name, hom) in &doc.homs {
        check_hom_doc(&format!("hom '{name}'"), hom, &doc.signature)?;
    }
    for (name, theta) in &doc.thetas {
        check_hom_doc(&format!("theta '{name}' hom"), &theta.hom, &doc.signature)?;
        if theta.module_conjugators.len() != theta.hom.target.len() {
            return Err(CliError::Shape {
                object: format!("theta '{name}'"),
                detail: "one module conjugator per target block required".into(),
            });
        }
        for (l, g) in theta.module_conjugators.iter().enumerate() {
            let d = doc.rank * theta.hom.target[l];
            matrix_shape_ok(&format!("theta '{name}' module conjugator {l}"), g, d, d)?;
        }
    }
    for (name, elem) in &doc.elements {
        if elem.len() != doc.signature.len() {
            return Err(CliError::Shape {
                object: format!("element '{name}'"),
                detail: format!(
                    "expected {} blocks, got {}",
                    doc.signature.len(),
                    elem.len()
                ),
            });
        }
        for (k, block) in elem.iter().enumerate() {
            let n = doc.signature[k];
            matrix_shape_ok(
                &format!("element '{name}' block {k}"),
                block,
                n,
                doc.rank * n,
            )?;
        }
    }
    Ok(())
}

fn check_operator_doc(object: &str, op: &OperatorDoc, op_dims: &[usize]) -> Result<(), CliError> {
    if op.len() != op_dims.len() {
        return Err(CliError::Shape {
            object: object.to_string(),
            detail: format!("expected {} blocks, got {}", op_dims.len(), op.len()),
        });
    }
    for (k, (m, &d)) in op.iter().zip(op_dims).enumerate() {
        matrix_shape_ok(&format!("{object} block {k}"), m, d, d)?;
    }
    Ok(())
}

fn check_hom_doc(object: &str, hom: &HomDoc, source: &[usize]) -> Result<(), CliError> {
    if hom.target.is_empty() {
        return Err(CliError::Shape {
            object: object.to_string(),
            detail: "target signature is empty".into(),
        });
    }
    if hom.block_map.len() != hom.target.len() || hom.conjugators.len() != hom.target.len() {
        return Err(CliError::Shape {
            object: object.to_string(),
            detail: "block_map and conjugators must have one entry per target block".into(),
        });
    }
    for (l, &src) in hom.block_map.iter().enumerate() {
        if src >= source.len() {
            return Err(CliError::Shape {
                object: object.to_string(),
                detail: format!("block_map[{l}] = {src} out of range"),
            });
        }
        if source[src] != hom.target[l] {
            return Err(CliError::Shape {
                object: object.to_string(),
                detail: format!(
                    "target block {l} has dim {} but source block {src} has dim {}",
                    hom.target[l], source[src]
                ),
            });
        }
        matrix_shape_ok(
            &format!("{object} conjugator {l}"),
            &hom.conjugators[l],
            hom.target[l],
            hom.target[l],
        )?;
    }
    Ok(())
}

// conversions between documents and core types

pub fn matrix_from_doc(m: &MatrixDoc) -> CMat {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    CMat::from_fn(rows, cols, |i, j| Complex64::new(m[i][j][0], m[i][j][1]))
}

pub fn matrix_to_doc(m: &CMat) -> MatrixDoc {
    (0..m.nrows())
        .map(|i| {
            (0..m.ncols())
                .map(|j| [m[(i, j)].re, m[(i, j)].im])
                .collect()
        })
        .collect()
}

impl FrameDocument {
    pub fn new(signature: Vec<usize>, rank: usize) -> Self {
        Self {
            signature,
            rank,
            frames: BTreeMap::new(),
            projections: BTreeMap::new(),
            weights: BTreeMap::new(),
            homs: BTreeMap::new(),
            thetas: BTreeMap::new(),
            elements: BTreeMap::new(),
            seeds: BTreeMap::new(),
        }
    }

    pub fn space(&self) -> Result<ModuleSpace, CliError> {
        let sig = AlgebraSignature::new(self.signature.clone()).map_err(|e| CliError::Shape {
            object: "signature".into(),
            detail: e.to_string(),
        })?;
        ModuleSpace::new(sig, self.rank).map_err(|e| CliError::Shape {
            object: "rank".into(),
            detail: e.to_string(),
        })
    }

    fn operator_from_doc(
        &self,
        object: &str,
        doc: &OperatorDoc,
    ) -> Result<ModuleOperator, CliError> {
        let space = self.space()?;
        let blocks = doc.iter().map(matrix_from_doc).collect();
        ModuleOperator::from_blocks(space, blocks).map_err(|e| CliError::Shape {
            object: object.to_string(),
            detail: e.to_string(),
        })
    }

    /// The only frame in the document, or the named one.
    pub fn frame_name(&self, requested: Option<&str>) -> Result<String, CliError> {
        match requested {
            Some(name) => {
                if self.frames.contains_key(name) {
                    Ok(name.to_string())
                } else {
                    Err(CliError::UnknownName {
                        kind: "frame",
                        name: name.to_string(),
                    })
                }
            }
            None => {
                if self.frames.len() == 1 {
                    Ok(self.frames.keys().next().unwrap().clone())
                } else {
                    Err(CliError::InvalidArg(format!(
                        "--frame required: document has {} frames",
                        self.frames.len()
                    )))
                }
            }
        }
    }

    pub fn frame(&self, name: &str) -> Result<OperatorFrame, CliError> {
        let ops_doc = self.frames.get(name).ok_or(CliError::UnknownName {
            kind: "frame",
            name: name.to_string(),
        })?;
        let ops = ops_doc
            .iter()
            .enumerate()
            .map(|(i, op)| self.operator_from_doc(&format!("frame '{name}' operator {i}"), op))
            .collect::<Result<Vec<_>, _>>()?;
        OperatorFrame::new(self.space()?, ops).map_err(|e| CliError::Shape {
            object: format!("frame '{name}'"),
            detail: e.to_string(),
        })
    }

    pub fn element(&self, name: &str) -> Result<ModuleElement, CliError> {
        let doc = self.elements.get(name).ok_or(CliError::UnknownName {
            kind: "element",
            name: name.to_string(),
        })?;
        let blocks = doc.iter().map(matrix_from_doc).collect();
        ModuleElement::from_blocks(self.space()?, blocks).map_err(|e| CliError::Shape {
            object: format!("element '{name}'"),
            detail: e.to_string(),
        })
    }

    pub fn theta(&self, name: &str, tol: f64) -> Result<ThetaMap, CliError> {
        let doc = self.thetas.get(name).ok_or(CliError::UnknownName {
            kind: "theta",
            name: name.to_string(),
        })?;
        let source =
            AlgebraSignature::new(self.signature.clone()).map_err(|e| CliError::Shape {
                object: "signature".into(),
                detail: e.to_string(),
            })?;
        let target =
            AlgebraSignature::new(doc.hom.target.clone()).map_err(|e| CliError::Shape {
                object: format!("theta '{name}' target"),
                detail: e.to_string(),
            })?;
        let hom = BlockHom::new(
            source,
            target,
            doc.hom.block_map.clone(),
            doc.hom.conjugators.iter().map(matrix_from_doc).collect(),
            tol,
        )
        .map_err(|e| CliError::Shape {
            object: format!("theta '{name}' hom"),
            detail: e.to_string(),
        })?;
        ThetaMap::new(
            hom,
            self.rank,
            doc.module_conjugators.iter().map(matrix_from_doc).collect(),
            tol,
        )
        .map_err(|e| CliError::Shape {
            object: format!("theta '{name}'"),
            detail: e.to_string(),
        })
    }

    pub fn fusion_system(
        &self,
        projections: &str,
        weights: &str,
        tol: f64,
    ) -> Result<FusionSystem, CliError> {
        let proj_doc = self
            .projections
            .get(projections)
            .ok_or(CliError::UnknownName {
                kind: "projection family",
                name: projections.to_string(),
            })?;
        let weight_doc = self.weights.get(weights).ok_or(CliError::UnknownName {
            kind: "weight family",
            name: weights.to_string(),
        })?;
        if proj_doc.len() != weight_doc.len() {
            return Err(CliError::Shape {
                object: format!("fusion system ({projections}, {weights})"),
                detail: format!(
                    "{} projections but {} weights",
                    proj_doc.len(),
                    weight_doc.len()
                ),
            });
        }
        let space = self.space()?;
        let pairs = proj_doc
            .iter()
            .zip(weight_doc)
            .enumerate()
            .map(|(i, (p, w))| {
                let op =
                    self.operator_from_doc(&format!("projection '{projections}' entry {i}"), p)?;
                let proj = SubmoduleProjection::new(op, tol).map_err(|e| CliError::Shape {
                    object: format!("projection '{projections}' entry {i}"),
                    detail: e.to_string(),
                })?;
                let weight = CentralWeight::new(w.clone()).map_err(|e| CliError::Shape {
                    object: format!("weights '{weights}' entry {i}"),
                    detail: e.to_string(),
                })?;
                Ok((proj, weight))
            })
            .collect::<Result<Vec<_>, CliError>>()?;
        FusionSystem::new(space, pairs).map_err(|e| CliError::Shape {
            object: format!("fusion system ({projections}, {weights})"),
            detail: e.to_string(),
        })
    }

    pub fn insert_frame(&mut self, name: &str, frame: &OperatorFrame) {
        let ops = frame
            .ops()
            .iter()
            .map(|op| op.blocks().iter().map(matrix_to_doc).collect())
            .collect();
        self.frames.insert(name.to_string(), ops);
    }

    pub fn insert_element(&mut self, name: &str, element: &ModuleElement) {
        self.elements.insert(
            name.to_string(),
            element.blocks().iter().map(matrix_to_doc).collect(),
        );
    }
}

/// Document holding a frame over its space, ready to serialize.
pub fn document_for_frame(name: &str, frame: &OperatorFrame) -> FrameDocument {
    let space = frame.space();
    let mut doc = FrameDocument::new(space.signature().block_dims().to_vec(), space.rank());
    doc.insert_frame(name, frame);
    doc
}

pub fn element_to_doc(element: &ModuleElement) -> ElementDoc {
    element.blocks().iter().map(matrix_to_doc).collect()
}
