//! JSON document schemas for losses, cell families, surrogates, links and
//! flats, plus exact conversions to and from the semantic types.
//!
//! Rationals travel as strings ("3/4", "-2"); decimal notation is
//! rejected so the exactness contract holds end to end. Every document
//! error is reported as a parse error naming the offending field, which
//! the command-line interface maps to its own exit code; query errors
//! against well-formed inputs remain precondition errors.

use crate::cells::PropertyCells;
use crate::error::{Error, Result};
use crate::flats::Flat;
use crate::linalg::RationalVector;
use crate::loss::DiscreteLoss;
use crate::polyhedron::{Constraint, Polyhedron};
use crate::rational::{format_rational, parse_rational, Rational};
use crate::surrogate::{Link, LinkRegion, PolyhedralSurrogate};
use serde::{Deserialize, Serialize};

/// Discrete loss document: `matrix[i][j]` is the loss of report `i` under
/// outcome `j`, as a rational string.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LossDoc {
    pub reports: Vec<String>,
    pub outcomes: Vec<String>,
    pub matrix: Vec<Vec<String>>,
}

/// One linear inequality `normal . x <= offset`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InequalityDoc {
    pub normal: Vec<String>,
    pub offset: String,
}

/// One named cell, as inequalities cutting into the probability simplex
/// (the simplex constraints themselves are implicit).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CellDoc {
    pub report: String,
    pub inequalities: Vec<InequalityDoc>,
}

/// Property-cells document. An optional `restriction` confines the
/// property to a sub-domain of the simplex, again with the simplex
/// constraints implicit.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CellsDoc {
    pub outcomes: Vec<String>,
    pub cells: Vec<CellDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub restriction: Option<Vec<InequalityDoc>>,
}

/// One affine piece `u -> gradient . u + intercept`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PieceDoc {
    pub gradient: Vec<String>,
    pub intercept: String,
}

/// Polyhedral surrogate document: per outcome, the affine pieces whose
/// maximum is the loss.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurrogateDoc {
    pub dim: usize,
    pub outcomes: Vec<String>,
    pub pieces: Vec<Vec<PieceDoc>>,
}

/// One link region: predictions satisfying all inequalities map to
/// `report`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinkRegionDoc {
    pub inequalities: Vec<InequalityDoc>,
    pub report: String,
}

/// Link document: first matching region wins, otherwise `default`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinkDoc {
    pub dim: usize,
    pub regions: Vec<LinkRegionDoc>,
    pub default: String,
}

/// Flat document: linear functionals over the outcomes, one row each.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FlatDoc {
    pub outcomes: usize,
    pub functionals: Vec<Vec<String>>,
}

fn parse_error(path: &str, detail: &str) -> Error {
    Error::Parse(format!("{path}: {detail}"))
}

fn rational_at(path: String, text: &str) -> Result<Rational> {
    parse_rational(text).map_err(|e| parse_error(&path, &e))
}

fn vector_at(path: &str, texts: &[String]) -> Result<RationalVector> {
    texts
        .iter()
        .enumerate()
        .map(|(i, t)| rational_at(format!("{path}[{i}]"), t))
        .collect()
}

fn format_vector(v: &[Rational]) -> Vec<String> {
    v.iter().map(format_rational).collect()
}

/// Reclassify construction failures of a document's semantic object as
/// parse errors: the document itself is the invalid input.
fn document_stage(context: &str, error: Error) -> Error {
    match error {
        Error::Parse(msg) => Error::Parse(msg),
        Error::Precondition(msg) => Error::Parse(format!("{context}: {msg}")),
        other => other,
    }
}

/// Parse a JSON loss document into an exact `DiscreteLoss`.
pub fn parse_loss(text: &str) -> Result<DiscreteLoss> {
    let doc: LossDoc =
        serde_json::from_str(text).map_err(|e| parse_error("loss document", &e.to_string()))?;
    loss_from_doc(&doc)
}

/// Convert a parsed loss document.
pub fn loss_from_doc(doc: &LossDoc) -> Result<DiscreteLoss> {
    let mut matrix: Vec<RationalVector> = Vec::with_capacity(doc.matrix.len());
    for (i, row) in doc.matrix.iter().enumerate() {
        matrix.push(vector_at(&format!("matrix[{i}]"), row)?);
    }
    DiscreteLoss::new(doc.reports.clone(), doc.outcomes.clone(), matrix)
        .map_err(|e| document_stage("loss document", e))
}

/// Render a loss back into its document form.
pub fn loss_to_doc(loss: &DiscreteLoss) -> LossDoc {
    LossDoc {
        reports: loss.reports.clone(),
        outcomes: loss.outcomes.clone(),
        matrix: loss.matrix.iter().map(|row| format_vector(row)).collect(),
    }
}

fn constraint_at(path: &str, doc: &InequalityDoc, dim: usize) -> Result<Constraint> {
    if doc.normal.len() != dim {
        return Err(parse_error(
            &format!("{path}.normal"),
            &format!("expected {dim} coordinates, found {}", doc.normal.len()),
        ));
    }
    Ok(Constraint::new(
        vector_at(&format!("{path}.normal"), &doc.normal)?,
        rational_at(format!("{path}.offset"), &doc.offset)?,
    ))
}

/// Parse a JSON cells document into validated `PropertyCells`.
pub fn parse_cells(text: &str) -> Result<PropertyCells> {
    let doc: CellsDoc =
        serde_json::from_str(text).map_err(|e| parse_error("cells document", &e.to_string()))?;
    cells_from_doc(&doc)
}

/// Convert a parsed cells document.
pub fn cells_from_doc(doc: &CellsDoc) -> Result<PropertyCells> {
    let n = doc.outcomes.len();
    let mut named: Vec<(String, Polyhedron)> = Vec::with_capacity(doc.cells.len());
    for (i, cell) in doc.cells.iter().enumerate() {
        let mut region = Polyhedron::standard_simplex(n);
        for (j, ineq) in cell.inequalities.iter().enumerate() {
            region.add_le(constraint_at(
                &format!("cells[{i}].inequalities[{j}]"),
                ineq,
                n,
            )?);
        }
        named.push((cell.report.clone(), region));
    }
    let restriction = match &doc.restriction {
        None => None,
        Some(rows) => {
            let mut region = Polyhedron::standard_simplex(n);
            for (j, ineq) in rows.iter().enumerate() {
                region.add_le(constraint_at(&format!("restriction[{j}]"), ineq, n)?);
            }
            Some(region)
        }
    };
    PropertyCells::new_user(doc.outcomes.clone(), named, restriction)
        .map_err(|e| document_stage("cells document", e))
}

/// Parse a JSON surrogate document into a validated surrogate.
pub fn parse_surrogate(text: &str) -> Result<PolyhedralSurrogate> {
    let doc: SurrogateDoc = serde_json::from_str(text)
        .map_err(|e| parse_error("surrogate document", &e.to_string()))?;
    surrogate_from_doc(&doc)
}

/// Convert a parsed surrogate document.
pub fn surrogate_from_doc(doc: &SurrogateDoc) -> Result<PolyhedralSurrogate> {
    let mut pieces: Vec<Vec<(RationalVector, Rational)>> = Vec::with_capacity(doc.pieces.len());
    for (y, list) in doc.pieces.iter().enumerate() {
        let mut converted = Vec::with_capacity(list.len());
        for (i, piece) in list.iter().enumerate() {
            let path = format!("pieces[{y}][{i}]");
            if piece.gradient.len() != doc.dim {
                return Err(parse_error(
                    &format!("{path}.gradient"),
                    &format!(
                        "expected {} coordinates, found {}",
                        doc.dim,
                        piece.gradient.len()
                    ),
                ));
            }
            converted.push((
                vector_at(&format!("{path}.gradient"), &piece.gradient)?,
                rational_at(format!("{path}.intercept"), &piece.intercept)?,
            ));
        }
        pieces.push(converted);
    }
    PolyhedralSurrogate::new(doc.dim, doc.outcomes.clone(), pieces)
        .map_err(|e| document_stage("surrogate document", e))
}

/// Parse a JSON link document into a validated link.
pub fn parse_link(text: &str) -> Result<Link> {
    let doc: LinkDoc =
        serde_json::from_str(text).map_err(|e| parse_error("link document", &e.to_string()))?;
    link_from_doc(&doc)
}

/// Convert a parsed link document.
pub fn link_from_doc(doc: &LinkDoc) -> Result<Link> {
    let mut regions = Vec::with_capacity(doc.regions.len());
    for (i, region) in doc.regions.iter().enumerate() {
        let mut inequalities = Vec::with_capacity(region.inequalities.len());
        for (j, ineq) in region.inequalities.iter().enumerate() {
            inequalities.push(constraint_at(
                &format!("regions[{i}].inequalities[{j}]"),
                ineq,
                doc.dim,
            )?);
        }
        regions.push(LinkRegion {
            inequalities,
            report: region.report.clone(),
        });
    }
    Link::new(doc.dim, regions, doc.default.clone())
        .map_err(|e| document_stage("link document", e))
}

/// Parse a JSON flat document into a validated flat.
pub fn parse_flat(text: &str) -> Result<Flat> {
    let doc: FlatDoc =
        serde_json::from_str(text).map_err(|e| parse_error("flat document", &e.to_string()))?;
    let mut functionals = Vec::with_capacity(doc.functionals.len());
    for (i, row) in doc.functionals.iter().enumerate() {
        functionals.push(vector_at(&format!("functionals[{i}]"), row)?);
    }
    Flat::new(doc.outcomes, functionals).map_err(|e| document_stage("flat document", e))
}

/// Serialize any document to pretty JSON with a trailing newline, the
/// single formatting used for all emitted reports and files.
pub fn to_json<T: Serialize>(doc: &T) -> Result<String> {
    let body = serde_json::to_string_pretty(doc)
        .map_err(|e| Error::Invariant(format!("serialization failed: {e}")))?;
    Ok(body + "\n")
}
