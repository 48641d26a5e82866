//! Crate-wide error type.

use thiserror::Error;

use crate::cls::InfomorphismReport;
use crate::database::DbMorphismReport;
use crate::fincat::{ConeReport, DiagramReport};
use crate::sig::SignatureMorphismReport;
use crate::table::{CellViolation, TableMorphismReport};

/// Errors raised by constructors and operations.
///
/// Validation *checkers* return report values instead; an `Error` wraps a
/// report only when a constructor refuses to build an invalid value.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("unknown type `{0}`")]
    UnknownType(String),
    #[error("unknown instance `{0}`")]
    UnknownInstance(String),
    #[error("unknown column `{0}`")]
    UnknownColumn(String),
    #[error("unknown key `{0}`")]
    UnknownKey(String),
    #[error("unknown object `{0}`")]
    UnknownObject(String),
    #[error("unknown arrow `{0}`")]
    UnknownArrow(String),
    #[error("duplicate {kind} `{name}`")]
    Duplicate { kind: &'static str, name: String },
    #[error("conflicting images `{first}` and `{second}` for `{element}`")]
    ConflictingEntry {
        element: String,
        first: String,
        second: String,
    },
    #[error("map is not total: `{element}` has no image")]
    NotTotal { element: String },
    #[error("image `{value}` of `{element}` lies outside the codomain")]
    OutsideCodomain { element: String, value: String },
    #[error("`{element}` is not an element of the declared domain")]
    OutsideDomain { element: String },
    #[error("incidence pair ({instance}, {type_name}) references an undeclared name")]
    BadIncidence {
        instance: String,
        type_name: String,
    },
    #[error("signature universes differ")]
    UniverseMismatch,
    #[error("classifications differ where equal classifications are required")]
    ClassificationMismatch,
    #[error("morphism boundaries do not match: `{0}`")]
    BoundaryMismatch(String),
    #[error("sort mismatch: `{left}` vs `{right}`")]
    SortMismatch { left: String, right: String },
    #[error("invalid infomorphism: {0}")]
    InvalidInfomorphism(InfomorphismReport),
    #[error("invalid signature morphism: {0}")]
    InvalidSignatureMorphism(SignatureMorphismReport),
    #[error("domain integrity violated: {}", render_cells(.0))]
    DomainIntegrity(Vec<CellViolation>),
    #[error("invalid table morphism: {0}")]
    InvalidTableMorphism(TableMorphismReport),
    #[error("invalid category: {0}")]
    InvalidCategory(String),
    #[error("graph has a cycle through `{0}`")]
    CyclicGraph(String),
    #[error("relation `{0}` is not a preorder: {1}")]
    NotPreorder(String, String),
    #[error("invalid diagram: {0}")]
    InvalidDiagram(DiagramReport),
    #[error("invalid cone: {0}")]
    InvalidCone(ConeReport),
    #[error("invalid database schema: {}", .0.join("; "))]
    InvalidDbSchema(Vec<String>),
    #[error("invalid database: {}", .0.join("; "))]
    InvalidDatabase(Vec<String>),
    #[error("invalid database morphism: {0}")]
    InvalidDbMorphism(DbMorphismReport),
    #[error("database is not in unified form: {0}")]
    NotUnified(String),
    #[error("referential integrity must hold: {0}")]
    ReferentialIntegrity(String),
    #[error("size cap exceeded: {what} has {actual}, cap is {cap}")]
    SizeCap {
        what: &'static str,
        actual: usize,
        cap: usize,
    },
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

fn render_cells(cells: &[CellViolation]) -> String {
    cells
        .iter()
        .map(|c| c.to_string())
        .collect::<Vec<_>>()
        .join("; ")
}
