//! Unified-form machinery: the relation classification, unified-form
//! detection, the sketch graph with its interpretation, and referential
//! integrity.
//!
//! A database is in unified form when its relation classification (relation
//! symbols classifying keys) coincides with its entity classification. In
//! unified form every column is a foreign key into the key set of its sort,
//! which is what referential integrity checks and what the sketch
//! interpretation realizes as functions between key sets. Datatypes are
//! key-only relations: their keys stand for themselves and they contribute
//! no columns.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::Serialize;

use crate::cls::Classification;
use crate::database::{Database, DbSchema};
use crate::error::Error;
use crate::map::FinMap;

/// Builds the relation classification of a database: types are the relation
/// symbols, instances the union of all key sets, and a key is classified by
/// every relation it keys.
pub fn relation_classification(db: &Database) -> Classification {
    let types: Vec<String> = db.relations().iter().cloned().collect();
    let mut instances = BTreeSet::new();
    let mut incidence = Vec::new();
    for relation in db.relations() {
        for key in db.keys_at(relation).expect("declared relation") {
            instances.insert(key.clone());
            incidence.push((key.clone(), relation.clone()));
        }
    }
    Classification::new(types, instances, incidence)
        .expect("keys and relations are duplicate-free by construction")
}

/// Differences between a database's relation classification and its entity
/// classification.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct UnifiedReport {
    pub missing_types: BTreeSet<String>,
    pub extra_types: BTreeSet<String>,
    pub missing_instances: BTreeSet<String>,
    pub extra_instances: BTreeSet<String>,
    /// Pairs `(instance, type)` on which the two incidences disagree.
    pub incidence_mismatches: BTreeSet<(String, String)>,
}

impl UnifiedReport {
    pub fn holds(&self) -> bool {
        self.missing_types.is_empty()
            && self.extra_types.is_empty()
            && self.missing_instances.is_empty()
            && self.extra_instances.is_empty()
            && self.incidence_mismatches.is_empty()
    }
}

impl fmt::Display for UnifiedReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.holds() {
            return write!(f, "unified");
        }
        let mut parts = Vec::new();
        if !self.missing_types.is_empty() {
            parts.push(format!(
                "entity types missing as relations: {}",
                self.missing_types.iter().cloned().collect::<Vec<_>>().join(", ")
            ));
        }
        if !self.extra_types.is_empty() {
            parts.push(format!(
                "relations not declared as entity types: {}",
                self.extra_types.iter().cloned().collect::<Vec<_>>().join(", ")
            ));
        }
        if !self.missing_instances.is_empty() {
            parts.push(format!(
                "instances never used as keys: {}",
                self.missing_instances.iter().cloned().collect::<Vec<_>>().join(", ")
            ));
        }
        if !self.extra_instances.is_empty() {
            parts.push(format!(
                "keys not declared as instances: {}",
                self.extra_instances.iter().cloned().collect::<Vec<_>>().join(", ")
            ));
        }
        if !self.incidence_mismatches.is_empty() {
            let items: Vec<String> = self
                .incidence_mismatches
                .iter()
                .map(|(y, x)| format!("({y}, {x})"))
                .collect();
            parts.push(format!("incidence disagreements: {}", items.join(", ")));
        }
        write!(f, "{}", parts.join("; "))
    }
}

/// Compares the relation classification with the entity classification and
/// reports every difference. The database is unified exactly when the report
/// holds.
pub fn is_unified(db: &Database) -> UnifiedReport {
    let relation = relation_classification(db);
    let entity = db.cls();
    let mut report = UnifiedReport::default();
    report.missing_types = entity.types().difference(relation.types()).cloned().collect();
    report.extra_types = relation.types().difference(entity.types()).cloned().collect();
    report.missing_instances = entity
        .instances()
        .difference(relation.instances())
        .cloned()
        .collect();
    report.extra_instances = relation
        .instances()
        .difference(entity.instances())
        .cloned()
        .collect();
    for y in relation.instances().intersection(entity.instances()) {
        for x in relation.types().intersection(entity.types()) {
            if relation.holds(y, x) != entity.holds(y, x) {
                report.incidence_mismatches.insert((y.clone(), x.clone()));
            }
        }
    }
    report
}

/// One edge of a sketch graph: relation `relation` points along its column
/// `column` to the node named by the column's sort.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct SketchEdge {
    pub relation: String,
    pub column: String,
    pub target: String,
}

/// A constraint arrow recorded from the relation category. The sketch keeps
/// these as data; they are not reified as 2-cells.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct ConstraintArrow {
    pub name: String,
    pub dom: String,
    pub cod: String,
}

/// The sketch of a unified-form schema: nodes are the relation symbols, one
/// edge per (relation, column) into the column's sort.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SketchGraph {
    pub nodes: BTreeSet<String>,
    pub edges: Vec<SketchEdge>,
    pub constraint_arrows: Vec<ConstraintArrow>,
}

/// Extracts the sketch graph of a schema in unified form (relation symbols
/// equal to the universe). Every edge target is then automatically a node.
pub fn sketch_graph(schema: &DbSchema) -> Result<SketchGraph, Error> {
    if schema.rel_cat().objects() != schema.universe() {
        return Err(Error::NotUnified(
            "relation symbols differ from the entity types".into(),
        ));
    }
    let mut edges = Vec::new();
    for relation in schema.rel_cat().objects() {
        for (column, sort) in schema.sig_at(relation)?.sorts().iter() {
            edges.push(SketchEdge {
                relation: relation.clone(),
                column: column.to_string(),
                target: sort.to_string(),
            });
        }
    }
    edges.sort();
    let mut constraint_arrows = Vec::new();
    for (name, arrow) in schema.rel_cat().non_identity_arrows() {
        constraint_arrows.push(ConstraintArrow {
            name: name.to_string(),
            dom: arrow.dom.clone(),
            cod: arrow.cod.clone(),
        });
    }
    constraint_arrows.sort();
    Ok(SketchGraph {
        nodes: schema.rel_cat().objects().clone(),
        edges,
        constraint_arrows,
    })
}

/// One referential-integrity failure: the entry of `(relation, key, column)`
/// does not occur as a key of the referenced relation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RefIntegrityViolation {
    pub relation: String,
    pub key: String,
    pub column: String,
    pub value: String,
}

impl fmt::Display for RefIntegrityViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({}, {}, {}, {}): entry does not occur as a key of the referenced relation",
            self.relation, self.key, self.column, self.value
        )
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct RefIntegrityReport {
    pub violations: Vec<RefIntegrityViolation>,
}

impl RefIntegrityReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for RefIntegrityReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            return write!(f, "referential integrity holds");
        }
        let items: Vec<String> = self.violations.iter().map(|v| v.to_string()).collect();
        write!(f, "{}", items.join("; "))
    }
}

/// Checks referential integrity: every entry in every column occurs in the
/// key set of the relation named by the column's sort.
///
/// Requires unified *schema* form (relation symbols equal to the entity
/// types) so that every sort names a relation; key sets themselves may
/// disagree with the instance universe, which is exactly what the membership
/// check then reports.
pub fn check_referential_integrity(db: &Database) -> Result<RefIntegrityReport, Error> {
    if db.schema().rel_cat().objects() != db.schema().universe() {
        return Err(Error::NotUnified(
            "relation symbols differ from the entity types".into(),
        ));
    }
    let mut violations = Vec::new();
    for relation in db.relations() {
        let sig = db.schema().sig_at(relation)?;
        for key in db.keys_at(relation)? {
            let tup = db.tuple_at(relation, key)?;
            for (column, sort) in sig.sorts().iter() {
                let value = tup.entry(column)?;
                if !db.keys_at(sort)?.contains(value) {
                    violations.push(RefIntegrityViolation {
                        relation: relation.clone(),
                        key: key.clone(),
                        column: column.to_string(),
                        value: value.to_string(),
                    });
                }
            }
        }
    }
    Ok(RefIntegrityReport { violations })
}

/// One interpreted sketch edge: the function it denotes between key sets.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EdgeFunction {
    pub relation: String,
    pub column: String,
    pub target: String,
    pub map: FinMap,
}

/// The interpretation of a unified database's sketch: each node denotes its
/// key set, each edge `(r, i)` the function `k ↦ tuple(r)(k)(i)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SketchInterpretation {
    pub nodes: BTreeMap<String, BTreeSet<String>>,
    pub edges: Vec<EdgeFunction>,
}

impl SketchInterpretation {
    pub fn edge(&self, relation: &str, column: &str) -> Option<&EdgeFunction> {
        self.edges
            .iter()
            .find(|e| e.relation == relation && e.column == column)
    }
}

/// Interprets the sketch of a unified database. Referential integrity is
/// checked first so that every edge function lands in its node's key set.
pub fn sketch_interpretation(db: &Database) -> Result<SketchInterpretation, Error> {
    let integrity = check_referential_integrity(db)?;
    if !integrity.is_valid() {
        return Err(Error::ReferentialIntegrity(integrity.to_string()));
    }
    let graph = sketch_graph(db.schema())?;
    let mut nodes = BTreeMap::new();
    for relation in db.relations() {
        nodes.insert(relation.clone(), db.keys_at(relation)?.clone());
    }
    let mut edges = Vec::new();
    for edge in &graph.edges {
        let mut pairs = Vec::new();
        for key in db.keys_at(&edge.relation)? {
            pairs.push((
                key.clone(),
                db.tuple_at(&edge.relation, key)?.entry(&edge.column)?.to_string(),
            ));
        }
        edges.push(EdgeFunction {
            relation: edge.relation.clone(),
            column: edge.column.clone(),
            target: edge.target.clone(),
            map: FinMap::new(pairs)?,
        });
    }
    Ok(SketchInterpretation { nodes, edges })
}
