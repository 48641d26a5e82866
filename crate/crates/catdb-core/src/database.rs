//! Relational databases as functorial diagrams of tables over a category of
//! relation symbols.
//!
//! A database schema assigns a signature to every relation symbol and a
//! sort-preserving column map to every arrow, covariantly. A database adds a
//! contravariant key functor and natural tuple components, which is the same
//! thing as a diagram of tables over the opposite shape. The join of a
//! database is the limit of that diagram; its signature coincides with the
//! schema's reference (colimit) signature.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::Serialize;

use crate::cls::{check_infomorphism, BiconditionViolation, Classification, Infomorphism};
use crate::error::Error;
use crate::fincat::{FinCat, TableDiagram};
use crate::limits::{component_column_name, limit, ColumnClass, LimitResult};
use crate::map::FinMap;
use crate::quotient::UnionFind;
use crate::sig::{Signature, Tup};
use crate::table::Table;

/// A database schema: relation category, universe, signatures, and covariant
/// column maps. For an arrow `p : r' → r`, `sig_morph_at(p)` runs
/// `arity(r') → arity(r)` and preserves sorts on the nose.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DbSchema {
    rel_cat: FinCat,
    universe: BTreeSet<String>,
    sigs: BTreeMap<String, Signature>,
    sig_morphs: BTreeMap<String, FinMap>,
}

impl DbSchema {
    /// Validates signatures, sort preservation, and functor laws over the
    /// relation category's full composition table.
    pub fn new(
        rel_cat: FinCat,
        universe: BTreeSet<String>,
        sigs: BTreeMap<String, Signature>,
        sig_morphs: BTreeMap<String, FinMap>,
    ) -> Result<Self, Error> {
        let mut issues = Vec::new();
        for object in rel_cat.objects() {
            match sigs.get(object) {
                None => issues.push(format!("relation `{object}` has no signature")),
                Some(sig) if sig.universe() != &universe => {
                    issues.push(format!("signature of `{object}` is over the wrong universe"))
                }
                Some(_) => {}
            }
        }
        if !issues.is_empty() {
            return Err(Error::InvalidDbSchema(issues));
        }
        for (name, arrow) in rel_cat.arrows() {
            let Some(map) = sig_morphs.get(name) else {
                issues.push(format!("arrow `{name}` has no column map"));
                continue;
            };
            let dom_sig = &sigs[&arrow.dom];
            let cod_sig = &sigs[&arrow.cod];
            if let Err(e) = map.check_total(&dom_sig.arity(), &cod_sig.arity()) {
                issues.push(format!("arrow `{name}`: {e}"));
                continue;
            }
            for (col, sort) in dom_sig.sorts().iter() {
                let image_sort = cod_sig.sort_of(map.apply(col)?)?;
                if image_sort != sort {
                    issues.push(format!(
                        "arrow `{name}`: column `{col}` of sort {sort} maps to a {image_sort} column"
                    ));
                }
            }
        }
        if issues.is_empty() {
            for object in rel_cat.objects() {
                let id = rel_cat.identity_of(object)?;
                if !sig_morphs[id].is_identity() {
                    issues.push(format!("identity arrow of `{object}` has a non-identity column map"));
                }
            }
            for (a, b, c) in rel_cat.composable_pairs() {
                let via = sig_morphs[a].then(&sig_morphs[b])?;
                if via != sig_morphs[c] {
                    issues.push(format!("column maps are not functorial on ({a}; {b})"));
                }
            }
        }
        if !issues.is_empty() {
            return Err(Error::InvalidDbSchema(issues));
        }
        Ok(DbSchema {
            rel_cat,
            universe,
            sigs,
            sig_morphs,
        })
    }

    pub fn rel_cat(&self) -> &FinCat {
        &self.rel_cat
    }

    pub fn universe(&self) -> &BTreeSet<String> {
        &self.universe
    }

    pub fn sig_at(&self, relation: &str) -> Result<&Signature, Error> {
        self.sigs
            .get(relation)
            .ok_or_else(|| Error::UnknownObject(relation.to_string()))
    }

    pub fn sig_morph_at(&self, arrow: &str) -> Result<&FinMap, Error> {
        self.sig_morphs
            .get(arrow)
            .ok_or_else(|| Error::UnknownArrow(arrow.to_string()))
    }

    /// The reference schema: the colimit of the signature functor in the
    /// slice over the universe. Columns of the relations are merged along
    /// the arrows' column maps; each class is named after its least member
    /// `relation.column`, matching the join's column naming exactly.
    pub fn reference_schema(&self) -> Result<ReferenceSchema, Error> {
        let mut uf: UnionFind<(String, String)> = UnionFind::new();
        for (relation, sig) in &self.sigs {
            for column in sig.columns() {
                uf.add((relation.clone(), column.to_string()));
            }
        }
        for (name, arrow) in self.rel_cat.arrows() {
            if self.rel_cat.is_identity(name) {
                continue;
            }
            let map = &self.sig_morphs[name];
            for (i_dom, i_cod) in map.iter() {
                uf.union(
                    &(arrow.dom.clone(), i_dom.to_string()),
                    &(arrow.cod.clone(), i_cod.to_string()),
                );
            }
        }
        let mut classes = Vec::new();
        for (root, members) in uf.classes() {
            let name = component_column_name(&root.0, &root.1);
            let sort = self.sigs[&root.0].sort_of(&root.1)?.to_string();
            classes.push(ColumnClass {
                name,
                sort,
                members: members.into_iter().collect(),
            });
        }
        let sig = Signature::new(
            self.universe.iter().cloned(),
            classes.iter().map(|c| (c.name.clone(), c.sort.clone())),
        )?;
        let mut injections = BTreeMap::new();
        for (relation, rel_sig) in &self.sigs {
            let mut pairs = Vec::new();
            for column in rel_sig.columns() {
                let class = classes
                    .iter()
                    .find(|c| c.members.contains(&(relation.clone(), column.to_string())))
                    .ok_or_else(|| Error::Internal("column missing from its class".into()))?;
                pairs.push((column.to_string(), class.name.clone()));
            }
            injections.insert(relation.clone(), FinMap::new(pairs)?);
        }
        Ok(ReferenceSchema {
            sig,
            injections,
            column_classes: classes,
        })
    }
}

/// The colimit reference signature of a schema, with per-relation injections.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReferenceSchema {
    pub sig: Signature,
    /// Per relation, the map from its columns into the merged columns.
    pub injections: BTreeMap<String, FinMap>,
    pub column_classes: Vec<ColumnClass>,
}

/// A relational database: a schema, an entity classification over the same
/// universe, a contravariant key functor, and natural tuple components.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Database {
    schema: DbSchema,
    cls: Classification,
    keys: BTreeMap<String, BTreeSet<String>>,
    /// For `p : r' → r`, the key map runs `K(r) → K(r')`.
    key_maps: BTreeMap<String, FinMap>,
    tuples: BTreeMap<String, BTreeMap<String, Tup>>,
    #[serde(skip)]
    tables: BTreeMap<String, Table>,
}

impl Database {
    /// Validates per-relation table integrity, contravariant functor laws for
    /// the key maps, and naturality of the tuple components. Violations are
    /// itemized, naturality failures naming `(arrow, key, column)`.
    pub fn new(
        schema: DbSchema,
        cls: Classification,
        keys: BTreeMap<String, BTreeSet<String>>,
        key_maps: BTreeMap<String, FinMap>,
        tuples: BTreeMap<String, BTreeMap<String, Tup>>,
    ) -> Result<Self, Error> {
        let mut issues = Vec::new();
        if cls.types() != &schema.universe {
            return Err(Error::UniverseMismatch);
        }
        let mut tables = BTreeMap::new();
        for relation in schema.rel_cat.objects() {
            let Some(rel_keys) = keys.get(relation) else {
                issues.push(format!("relation `{relation}` has no key set"));
                continue;
            };
            let rel_tuples = tuples.get(relation).cloned().unwrap_or_default();
            let declared: BTreeSet<String> = rel_tuples.keys().cloned().collect();
            if &declared != rel_keys {
                issues.push(format!(
                    "relation `{relation}`: tuple map is not total on its key set"
                ));
                continue;
            }
            match Table::new(
                schema.sigs[relation].clone(),
                cls.clone(),
                rel_tuples.into_iter().collect::<Vec<_>>(),
            ) {
                Ok(table) => {
                    tables.insert(relation.clone(), table);
                }
                Err(e) => issues.push(format!("relation `{relation}`: {e}")),
            }
        }
        if !issues.is_empty() {
            return Err(Error::InvalidDatabase(issues));
        }
        for (name, arrow) in schema.rel_cat.arrows() {
            let Some(map) = key_maps.get(name) else {
                issues.push(format!("arrow `{name}` has no key map"));
                continue;
            };
            // contravariant: K(cod) → K(dom)
            if let Err(e) = map.check_total(&keys[&arrow.cod], &keys[&arrow.dom]) {
                issues.push(format!("arrow `{name}`: {e}"));
            }
        }
        if !issues.is_empty() {
            return Err(Error::InvalidDatabase(issues));
        }
        for object in schema.rel_cat.objects() {
            let id = schema.rel_cat.identity_of(object)?;
            if !key_maps[id].is_identity() {
                issues.push(format!(
                    "identity arrow of `{object}` has a non-identity key map"
                ));
            }
        }
        for (a, b, c) in schema.rel_cat.composable_pairs() {
            // K is contravariant: K(a;b) = K(b) then K(a)
            let via = key_maps[b].then(&key_maps[a])?;
            if via != key_maps[c] {
                issues.push(format!("key maps are not functorial on ({a}; {b})"));
            }
        }
        // τ naturality: for p : r' → r, key k of r, column i' of r':
        // tuple(r')(key_map(k))(i') = tuple(r)(k)(sig_morph(i'))
        for (name, arrow) in schema.rel_cat.arrows() {
            if schema.rel_cat.is_identity(name) {
                continue;
            }
            let sig_morph = &schema.sig_morphs[name];
            let key_map = &key_maps[name];
            for k in &keys[&arrow.cod] {
                let k_dom = key_map.apply(k)?;
                for (i_dom, _) in schema.sigs[&arrow.dom].sorts().iter() {
                    let lhs = tuples[&arrow.dom][k_dom].entry(i_dom)?;
                    let rhs = tuples[&arrow.cod][k].entry(sig_morph.apply(i_dom)?)?;
                    if lhs != rhs {
                        issues.push(format!(
                            "naturality fails at (arrow `{name}`, key `{k}`, column `{i_dom}`): {lhs} vs {rhs}"
                        ));
                    }
                }
            }
        }
        if !issues.is_empty() {
            return Err(Error::InvalidDatabase(issues));
        }
        Ok(Database {
            schema,
            cls,
            keys,
            key_maps,
            tuples,
            tables,
        })
    }

    /// Wraps a diagram of tables as a database over the opposite of its
    /// shape. Inverse to [`Database::to_diagram`] on the nose.
    pub fn from_diagram(diagram: &TableDiagram) -> Result<Database, Error> {
        let rel_cat = diagram.shape().opposite();
        let mut sigs = BTreeMap::new();
        let mut keys = BTreeMap::new();
        let mut tuples = BTreeMap::new();
        for (object, table) in diagram.tables() {
            sigs.insert(object.to_string(), table.sig().clone());
            keys.insert(object.to_string(), table.keys());
            tuples.insert(
                object.to_string(),
                table
                    .rows()
                    .map(|(k, t)| (k.to_string(), t.clone()))
                    .collect::<BTreeMap<_, _>>(),
            );
        }
        let mut sig_morphs = BTreeMap::new();
        let mut key_maps = BTreeMap::new();
        for (name, _) in rel_cat.arrows() {
            let m = diagram.morphism_at(name)?;
            sig_morphs.insert(name.to_string(), m.col_map().clone());
            key_maps.insert(name.to_string(), m.key_map().clone());
        }
        let schema = DbSchema::new(
            rel_cat,
            diagram.cls().types().clone(),
            sigs,
            sig_morphs,
        )?;
        Database::new(schema, diagram.cls().clone(), keys, key_maps, tuples)
    }

    pub fn schema(&self) -> &DbSchema {
        &self.schema
    }

    pub fn cls(&self) -> &Classification {
        &self.cls
    }

    pub fn relations(&self) -> &BTreeSet<String> {
        self.schema.rel_cat.objects()
    }

    pub fn keys_at(&self, relation: &str) -> Result<&BTreeSet<String>, Error> {
        self.keys
            .get(relation)
            .ok_or_else(|| Error::UnknownObject(relation.to_string()))
    }

    pub fn key_map_at(&self, arrow: &str) -> Result<&FinMap, Error> {
        self.key_maps
            .get(arrow)
            .ok_or_else(|| Error::UnknownArrow(arrow.to_string()))
    }

    pub fn tuple_at(&self, relation: &str, key: &str) -> Result<&Tup, Error> {
        self.tuples
            .get(relation)
            .ok_or_else(|| Error::UnknownObject(relation.to_string()))?
            .get(key)
            .ok_or_else(|| Error::UnknownKey(key.to_string()))
    }

    pub fn table_at(&self, relation: &str) -> Result<&Table, Error> {
        self.tables
            .get(relation)
            .ok_or_else(|| Error::UnknownObject(relation.to_string()))
    }

    /// Unfolds the database into its diagram of tables: the shape is the
    /// opposite relation category, and an arrow `p : r' → r` becomes the
    /// fiber morphism `T(r) → T(r')` carrying `sig_morph_at(p)` and
    /// `key_map_at(p)`.
    pub fn to_diagram(&self) -> Result<TableDiagram, Error> {
        let shape = self.schema.rel_cat.opposite();
        let tables: BTreeMap<String, Table> = self
            .tables
            .iter()
            .map(|(k, v)| (k.clone(), v.clone()))
            .collect();
        let mut edge_maps = BTreeMap::new();
        for (name, _) in shape.arrows() {
            if shape.is_identity(name) {
                continue;
            }
            edge_maps.insert(
                name.to_string(),
                (
                    self.schema.sig_morphs[name].clone(),
                    self.key_maps[name].clone(),
                ),
            );
        }
        TableDiagram::new(shape, self.cls.clone(), tables, edge_maps)
    }

    /// The join: the limit of the database's diagram of tables.
    pub fn join(&self) -> Result<LimitResult, Error> {
        limit(&self.to_diagram()?)
    }
}

/// Object and arrow assignments of a functor between finite categories.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FunctorData {
    pub objects: FinMap,
    pub arrows: FinMap,
}

impl FunctorData {
    pub fn identity(cat: &FinCat) -> Self {
        FunctorData {
            objects: FinMap::identity(cat.objects().iter().cloned()),
            arrows: FinMap::identity(cat.arrows().map(|(n, _)| n.to_string())),
        }
    }
}

/// One failure of the database-morphism cell condition.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DbCellViolation {
    pub relation: String,
    pub key: String,
    pub column: String,
    pub expected: String,
    pub actual: String,
}

impl fmt::Display for DbCellViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "cell ({}, {}, {}): expected {}, found {}",
            self.relation, self.key, self.column, self.expected, self.actual
        )
    }
}

/// Itemized result of checking a database morphism.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct DbMorphismReport {
    pub functor: Vec<String>,
    pub infomorphism: Vec<BiconditionViolation>,
    pub sig_trans: Vec<String>,
    pub key_trans: Vec<String>,
    pub cells: Vec<DbCellViolation>,
}

impl DbMorphismReport {
    pub fn is_valid(&self) -> bool {
        self.functor.is_empty()
            && self.infomorphism.is_empty()
            && self.sig_trans.is_empty()
            && self.key_trans.is_empty()
            && self.cells.is_empty()
    }
}

impl fmt::Display for DbMorphismReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_valid() {
            return write!(f, "valid");
        }
        let mut parts = Vec::new();
        if !self.functor.is_empty() {
            parts.push(format!("functor: {}", self.functor.join("; ")));
        }
        if !self.infomorphism.is_empty() {
            parts.push(format!(
                "infomorphism: {}",
                self.infomorphism
                    .iter()
                    .map(|v| v.to_string())
                    .collect::<Vec<_>>()
                    .join("; ")
            ));
        }
        if !self.sig_trans.is_empty() {
            parts.push(format!("signature transformation: {}", self.sig_trans.join("; ")));
        }
        if !self.key_trans.is_empty() {
            parts.push(format!("key transformation: {}", self.key_trans.join("; ")));
        }
        if !self.cells.is_empty() {
            parts.push(format!(
                "cells: {}",
                self.cells
                    .iter()
                    .map(|v| v.to_string())
                    .collect::<Vec<_>>()
                    .join("; ")
            ));
        }
        write!(f, "{}", parts.join(" | "))
    }
}

/// Checks every component of a candidate database morphism `src → dst`:
/// functoriality of the relation functor, the infomorphism biconditional,
/// naturality and sort compatibility of the signature transformation,
/// naturality of the key transformation, and the per-cell condition
/// `τ_src(r)(κ_r(k))(i) = inst_map(τ_dst(F r)(k)(θ_r(i)))`.
#[allow(clippy::too_many_arguments)]
pub fn check_db_morphism(
    src: &Database,
    dst: &Database,
    functor: &FunctorData,
    sig_trans: &BTreeMap<String, FinMap>,
    type_map: &FinMap,
    inst_map: &FinMap,
    key_trans: &BTreeMap<String, FinMap>,
) -> Result<DbMorphismReport, Error> {
    let src_cat = src.schema.rel_cat();
    let dst_cat = dst.schema.rel_cat();
    functor.objects.check_total(src_cat.objects(), dst_cat.objects())?;
    let src_arrows: BTreeSet<String> = src_cat.arrows().map(|(n, _)| n.to_string()).collect();
    let dst_arrows: BTreeSet<String> = dst_cat.arrows().map(|(n, _)| n.to_string()).collect();
    functor.arrows.check_total(&src_arrows, &dst_arrows)?;

    let mut report = DbMorphismReport::default();
    for (name, arrow) in src_cat.arrows() {
        let image = functor.arrows.apply(name)?;
        let image_arrow = dst_cat.arrow(image)?;
        if image_arrow.dom != functor.objects.apply(&arrow.dom)?
            || image_arrow.cod != functor.objects.apply(&arrow.cod)?
        {
            report.functor.push(format!(
                "arrow `{name}` maps to `{image}` with mismatched endpoints"
            ));
        }
    }
    for object in src_cat.objects() {
        let id = src_cat.identity_of(object)?;
        let image_obj = functor.objects.apply(object)?;
        if functor.arrows.apply(id)? != dst_cat.identity_of(image_obj)? {
            report
                .functor
                .push(format!("identity of `{object}` is not sent to an identity"));
        }
    }
    for (a, b, c) in src_cat.composable_pairs() {
        let fa = functor.arrows.apply(a)?;
        let fb = functor.arrows.apply(b)?;
        let fc = functor.arrows.apply(c)?;
        if dst_cat.composite(fa, fb)? != fc {
            report
                .functor
                .push(format!("composition is not preserved on ({a}; {b})"));
        }
    }

    let info = check_infomorphism(src.cls(), dst.cls(), type_map, inst_map)?;
    report.infomorphism = info.violations;

    // θ: per source relation, a column map arity_src(r) → arity_dst(F r)
    for r in src_cat.objects() {
        let image = functor.objects.apply(r)?;
        let Some(theta) = sig_trans.get(r) else {
            report
                .sig_trans
                .push(format!("relation `{r}` has no column transformation"));
            continue;
        };
        let src_sig = src.schema.sig_at(r)?;
        let dst_sig = dst.schema.sig_at(image)?;
        if let Err(e) = theta.check_total(&src_sig.arity(), &dst_sig.arity()) {
            report.sig_trans.push(format!("relation `{r}`: {e}"));
            continue;
        }
        for (col, sort) in src_sig.sorts().iter() {
            let expected = type_map.apply(sort)?;
            let actual = dst_sig.sort_of(theta.apply(col)?)?;
            if actual != expected {
                report.sig_trans.push(format!(
                    "relation `{r}` column `{col}`: sort {actual} is not {expected}"
                ));
            }
        }
    }
    if report.sig_trans.is_empty() {
        for (name, arrow) in src_cat.arrows() {
            if src_cat.is_identity(name) {
                continue;
            }
            let image = functor.arrows.apply(name)?;
            // naturality: θ_dom then S_dst(F p) = S_src(p) then θ_cod
            let lhs = sig_trans[&arrow.dom].then(dst.schema.sig_morph_at(image)?)?;
            let rhs = src.schema.sig_morph_at(name)?.then(&sig_trans[&arrow.cod])?;
            if lhs != rhs {
                report
                    .sig_trans
                    .push(format!("column transformation is not natural at `{name}`"));
            }
        }
    }

    // κ: per source relation, a key map K_dst(F r) → K_src(r)
    for r in src_cat.objects() {
        let image = functor.objects.apply(r)?;
        let Some(kappa) = key_trans.get(r) else {
            report
                .key_trans
                .push(format!("relation `{r}` has no key transformation"));
            continue;
        };
        if let Err(e) = kappa.check_total(dst.keys_at(image)?, src.keys_at(r)?) {
            report.key_trans.push(format!("relation `{r}`: {e}"));
        }
    }
    if report.key_trans.is_empty() {
        for (name, arrow) in src_cat.arrows() {
            if src_cat.is_identity(name) {
                continue;
            }
            let image = functor.arrows.apply(name)?;
            // naturality: K_dst(F p) then κ_dom = κ_cod then K_src(p)
            let lhs = dst.key_map_at(image)?.then(&key_trans[&arrow.dom])?;
            let rhs = key_trans[&arrow.cod].then(src.key_map_at(name)?)?;
            if lhs != rhs {
                report
                    .key_trans
                    .push(format!("key transformation is not natural at `{name}`"));
            }
        }
    }

    if report.is_valid() {
        for r in src_cat.objects() {
            let image = functor.objects.apply(r)?;
            let theta = &sig_trans[r];
            let kappa = &key_trans[r];
            for k_dst in dst.keys_at(image)? {
                let k_src = kappa.apply(k_dst)?;
                for (col, _) in src.schema.sig_at(r)?.sorts().iter() {
                    let via_dst = dst.tuple_at(image, k_dst)?.entry(theta.apply(col)?)?;
                    let expected = inst_map.apply(via_dst)?;
                    let actual = src.tuple_at(r, k_src)?.entry(col)?;
                    if expected != actual {
                        report.cells.push(DbCellViolation {
                            relation: r.clone(),
                            key: k_dst.clone(),
                            column: col.to_string(),
                            expected: expected.to_string(),
                            actual: actual.to_string(),
                        });
                    }
                }
            }
        }
    }
    Ok(report)
}

/// A validated database morphism `src → dst`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DatabaseMorphism {
    src: Database,
    dst: Database,
    functor: FunctorData,
    sig_trans: BTreeMap<String, FinMap>,
    info: Infomorphism,
    key_trans: BTreeMap<String, FinMap>,
}

impl DatabaseMorphism {
    pub fn new(
        src: Database,
        dst: Database,
        functor: FunctorData,
        sig_trans: BTreeMap<String, FinMap>,
        info: Infomorphism,
        key_trans: BTreeMap<String, FinMap>,
    ) -> Result<Self, Error> {
        if info.source() != src.cls() || info.target() != dst.cls() {
            return Err(Error::BoundaryMismatch(
                "infomorphism endpoints must be src.cls ⇄ dst.cls".into(),
            ));
        }
        let report = check_db_morphism(
            &src,
            &dst,
            &functor,
            &sig_trans,
            info.type_map(),
            info.inst_map(),
            &key_trans,
        )?;
        if !report.is_valid() {
            return Err(Error::InvalidDbMorphism(report));
        }
        Ok(DatabaseMorphism {
            src,
            dst,
            functor,
            sig_trans,
            info,
            key_trans,
        })
    }

    pub fn identity(db: &Database) -> Self {
        let functor = FunctorData::identity(db.schema.rel_cat());
        let sig_trans = db
            .schema
            .rel_cat()
            .objects()
            .iter()
            .map(|r| {
                (
                    r.clone(),
                    FinMap::identity(db.schema.sigs[r].columns().map(str::to_string)),
                )
            })
            .collect();
        let key_trans = db
            .schema
            .rel_cat()
            .objects()
            .iter()
            .map(|r| (r.clone(), FinMap::identity(db.keys[r].iter().cloned())))
            .collect();
        DatabaseMorphism {
            src: db.clone(),
            dst: db.clone(),
            functor,
            sig_trans,
            info: Infomorphism::identity(db.cls()),
            key_trans,
        }
    }

    pub fn src(&self) -> &Database {
        &self.src
    }

    pub fn dst(&self) -> &Database {
        &self.dst
    }

    pub fn functor(&self) -> &FunctorData {
        &self.functor
    }

    pub fn sig_trans(&self) -> &BTreeMap<String, FinMap> {
        &self.sig_trans
    }

    pub fn info(&self) -> &Infomorphism {
        &self.info
    }

    pub fn key_trans(&self) -> &BTreeMap<String, FinMap> {
        &self.key_trans
    }

    /// Strict morphisms have identity column transformations.
    pub fn is_strict(&self) -> bool {
        self.sig_trans.values().all(FinMap::is_identity)
    }
}

/// Componentwise composition, diagrammatic: `first : A → B`, `second : B → C`
/// give `A → C`.
pub fn compose_db_morphisms(
    first: &DatabaseMorphism,
    second: &DatabaseMorphism,
) -> Result<DatabaseMorphism, Error> {
    if first.dst != second.src {
        return Err(Error::BoundaryMismatch(
            "middle databases of a composition differ".into(),
        ));
    }
    let functor = FunctorData {
        objects: first.functor.objects.then(&second.functor.objects)?,
        arrows: first.functor.arrows.then(&second.functor.arrows)?,
    };
    let mut sig_trans = BTreeMap::new();
    let mut key_trans = BTreeMap::new();
    for r in first.src.schema.rel_cat().objects() {
        let mid = first.functor.objects.apply(r)?;
        sig_trans.insert(r.clone(), first.sig_trans[r].then(&second.sig_trans[mid])?);
        key_trans.insert(r.clone(), second.key_trans[mid].then(&first.key_trans[r])?);
    }
    let info = second.info.compose(&first.info)?;
    DatabaseMorphism::new(
        first.src.clone(),
        second.dst.clone(),
        functor,
        sig_trans,
        info,
        key_trans,
    )
}

/// Regards a classification as a relational database.
///
/// Relation symbols are the types ordered by reverse extent containment
/// (`x' ≥ x` when `extent(x') ⊇ extent(x)`); the signature at `x` is the
/// principal filter `↑x` with inclusion sorts; keys at `x` are the extent of
/// `x`; and the tuple of an instance is constant at that instance.
pub fn db_of_classification(e: &Classification) -> Result<Database, Error> {
    let mut extents: BTreeMap<String, BTreeSet<String>> = BTreeMap::new();
    for x in e.types() {
        extents.insert(x.clone(), e.extent(x)?);
    }
    // arrow x' → x whenever extent(x') ⊇ extent(x)
    let mut related = Vec::new();
    for x_up in e.types() {
        for x in e.types() {
            if extents[x_up].is_superset(&extents[x]) {
                related.push((x_up.clone(), x.clone()));
            }
        }
    }
    let rel_cat = FinCat::preorder(e.types().iter().cloned(), related.clone())?;

    let filter_of = |x: &str| -> BTreeSet<String> {
        related
            .iter()
            .filter(|(_, lower)| lower == x)
            .map(|(upper, _)| upper.clone())
            .collect()
    };
    let mut sigs = BTreeMap::new();
    let mut keys = BTreeMap::new();
    let mut tuples = BTreeMap::new();
    for x in e.types() {
        let filter = filter_of(x);
        sigs.insert(
            x.clone(),
            Signature::new(
                e.types().iter().cloned(),
                filter.iter().map(|x_up| (x_up.clone(), x_up.clone())),
            )?,
        );
        keys.insert(x.clone(), extents[x].clone());
        let mut rows = BTreeMap::new();
        for y in &extents[x] {
            rows.insert(
                y.clone(),
                Tup::new(filter.iter().map(|x_up| (x_up.clone(), y.clone())))?,
            );
        }
        tuples.insert(x.clone(), rows);
    }
    let mut sig_morphs = BTreeMap::new();
    let mut key_maps = BTreeMap::new();
    for (name, arrow) in rel_cat.arrows() {
        // p : x' → x embeds ↑x' into ↑x and extent(x) into extent(x')
        sig_morphs.insert(
            name.to_string(),
            FinMap::identity(filter_of(&arrow.dom).iter().cloned()),
        );
        key_maps.insert(
            name.to_string(),
            FinMap::identity(extents[&arrow.cod].iter().cloned()),
        );
    }
    let schema = DbSchema::new(rel_cat, e.types().clone(), sigs, sig_morphs)?;
    Database::new(schema, e.clone(), keys, key_maps, tuples)
}

/// Regards an infomorphism as a database morphism between the classifications
/// viewed as databases.
///
/// The relation functor is the type map, monotone for the reverse conceptual
/// preorders; the column transformation is the type map restricted to
/// principal filters; the key transformation is the instance map restricted
/// to extents. A monotonicity failure cannot occur for a valid infomorphism
/// and is reported as an internal inconsistency.
pub fn db_morphism_of_infomorphism(m: &Infomorphism) -> Result<DatabaseMorphism, Error> {
    let src_db = db_of_classification(m.source())?;
    let dst_db = db_of_classification(m.target())?;
    let src_cat = src_db.schema().rel_cat().clone();
    let dst_cat = dst_db.schema().rel_cat().clone();

    let mut arrow_pairs = Vec::new();
    for (name, arrow) in src_cat.arrows() {
        let f_dom = m.type_map().apply(&arrow.dom)?;
        let f_cod = m.type_map().apply(&arrow.cod)?;
        let image = if f_dom == f_cod {
            dst_cat.identity_of(f_dom)?.to_string()
        } else {
            format!("{f_dom}->{f_cod}")
        };
        if dst_cat.arrow(&image).is_err() {
            return Err(Error::Internal(format!(
                "type map is not monotone: no arrow {f_dom} → {f_cod}"
            )));
        }
        arrow_pairs.push((name.to_string(), image));
    }
    let functor = FunctorData {
        objects: m.type_map().clone(),
        arrows: FinMap::new(arrow_pairs)?,
    };

    let mut sig_trans = BTreeMap::new();
    let mut key_trans = BTreeMap::new();
    for x in src_cat.objects() {
        let filter = src_db.schema().sig_at(x)?.arity();
        sig_trans.insert(x.clone(), m.type_map().restrict(&filter));
        let image = m.type_map().apply(x)?;
        let image_extent = dst_db.keys_at(image)?.clone();
        key_trans.insert(x.clone(), m.inst_map().restrict(&image_extent));
    }
    DatabaseMorphism::new(src_db, dst_db, functor, sig_trans, m.clone(), key_trans)
}
