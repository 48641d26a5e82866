//! Tables and table morphisms.
//!
//! A table is a signature, a classification, a key set, and a content map
//! sending keys to classified tuples. Entity integrity (duplicate-free keys)
//! and domain integrity (pointwise classification) are enforced at
//! construction, so a `Table` value is always valid.
//!
//! A table morphism `T₁ → T₂` carries, exactly once and in this fixed
//! convention:
//!   * a column map `col_map : I₂ → I₁` (backward on columns),
//!   * an infomorphism `dst.cls ⇄ src.cls` (type map `X₂ → X₁`, instance map
//!     `Y₁ → Y₂`),
//!   * a key map `key_map : K₁ → K₂` (forward on keys),
//! subject to the sort condition and the commuting condition
//! `t₂(key_map(k))(i) = inst_map(t₁(k)(col_map(i)))`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::Serialize;

use crate::cls::{check_infomorphism, BiconditionViolation, Classification, Infomorphism};
use crate::error::Error;
use crate::map::FinMap;
use crate::sig::{
    check_signature_morphism, f_star, pulled_column_name, Signature, SortViolation, Tup,
};

/// A validated table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Table {
    sig: Signature,
    cls: Classification,
    rows: BTreeMap<String, Tup>,
}

/// A domain-integrity failure at one cell.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CellViolation {
    pub key: String,
    pub column: String,
    pub value: String,
    pub sort: String,
}

impl fmt::Display for CellViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({}, {}, {}) is not of sort {}",
            self.key, self.column, self.value, self.sort
        )
    }
}

impl Table {
    /// Builds a table, enforcing entity and domain integrity.
    ///
    /// Rows are stored in canonical key order. Every domain-integrity
    /// violation is reported, each naming its `(key, column, entry)`.
    pub fn new(
        sig: Signature,
        cls: Classification,
        rows: impl IntoIterator<Item = (String, Tup)>,
    ) -> Result<Self, Error> {
        if sig.universe() != cls.types() {
            return Err(Error::UniverseMismatch);
        }
        let mut stored = BTreeMap::new();
        let mut violations = Vec::new();
        let arity = sig.arity();
        for (key, tup) in rows {
            if stored.contains_key(&key) {
                return Err(Error::Duplicate {
                    kind: "key",
                    name: key,
                });
            }
            if tup.arity() != arity {
                for col in arity.symmetric_difference(&tup.arity()) {
                    violations.push(CellViolation {
                        key: key.clone(),
                        column: col.clone(),
                        value: "<arity mismatch>".into(),
                        sort: sig.sorts().get(col).unwrap_or("<none>").to_string(),
                    });
                }
            } else {
                for (col, sort) in sig.sorts().iter() {
                    let value = tup.entry(col)?;
                    if !cls.holds(value, sort) {
                        violations.push(CellViolation {
                            key: key.clone(),
                            column: col.to_string(),
                            value: value.to_string(),
                            sort: sort.to_string(),
                        });
                    }
                }
            }
            stored.insert(key, tup);
        }
        if !violations.is_empty() {
            return Err(Error::DomainIntegrity(violations));
        }
        Ok(Table {
            sig,
            cls,
            rows: stored,
        })
    }

    /// A table with no rows.
    pub fn empty(sig: Signature, cls: Classification) -> Result<Self, Error> {
        Table::new(sig, cls, Vec::new())
    }

    pub fn sig(&self) -> &Signature {
        &self.sig
    }

    pub fn cls(&self) -> &Classification {
        &self.cls
    }

    pub fn keys(&self) -> BTreeSet<String> {
        self.rows.keys().cloned().collect()
    }

    pub fn key_count(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> impl Iterator<Item = (&str, &Tup)> {
        self.rows.iter().map(|(k, t)| (k.as_str(), t))
    }

    pub fn row(&self, key: &str) -> Result<&Tup, Error> {
        self.rows
            .get(key)
            .ok_or_else(|| Error::UnknownKey(key.to_string()))
    }

    pub fn contains_key(&self, key: &str) -> bool {
        self.rows.contains_key(key)
    }
}

/// One failure of the commuting condition at a `(key, column)` cell.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CommutingViolation {
    /// Source-table key.
    pub key: String,
    /// Destination-table column.
    pub column: String,
    /// `inst_map(src row value)`, what the destination cell should hold.
    pub expected: String,
    /// What the destination cell holds.
    pub actual: String,
}

impl fmt::Display for CommutingViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "cell ({}, {}): expected {}, found {}",
            self.key, self.column, self.expected, self.actual
        )
    }
}

/// Itemized result of checking a table morphism.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct TableMorphismReport {
    pub infomorphism: Vec<BiconditionViolation>,
    pub sorts: Vec<SortViolation>,
    pub cells: Vec<CommutingViolation>,
}

impl TableMorphismReport {
    pub fn is_valid(&self) -> bool {
        self.infomorphism.is_empty() && self.sorts.is_empty() && self.cells.is_empty()
    }
}

impl fmt::Display for TableMorphismReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_valid() {
            return write!(f, "valid");
        }
        let mut parts = Vec::new();
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
        if !self.sorts.is_empty() {
            parts.push(format!(
                "sorts: {}",
                self.sorts
                    .iter()
                    .map(|v| v.to_string())
                    .collect::<Vec<_>>()
                    .join("; ")
            ));
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

/// Checks all three conditions on a candidate morphism `src → dst`:
/// the infomorphism biconditional, the signature sort condition, and the
/// per-cell commuting condition. Totality failures are hard errors.
pub fn check_table_morphism(
    src: &Table,
    dst: &Table,
    col_map: &FinMap,
    type_map: &FinMap,
    inst_map: &FinMap,
    key_map: &FinMap,
) -> Result<TableMorphismReport, Error> {
    let info = check_infomorphism(dst.cls(), src.cls(), type_map, inst_map)?;
    let sorts = check_signature_morphism(col_map, dst.sig(), src.sig(), type_map)?;
    key_map.check_total(&src.keys(), &dst.keys())?;
    let mut cells = Vec::new();
    for (key, src_row) in src.rows() {
        let dst_key = key_map.apply(key)?;
        let dst_row = dst.row(dst_key)?;
        for (col, _) in dst.sig().sorts().iter() {
            let src_col = col_map.apply(col)?;
            let expected = inst_map.apply(src_row.entry(src_col)?)?;
            let actual = dst_row.entry(col)?;
            if expected != actual {
                cells.push(CommutingViolation {
                    key: key.to_string(),
                    column: col.to_string(),
                    expected: expected.to_string(),
                    actual: actual.to_string(),
                });
            }
        }
    }
    Ok(TableMorphismReport {
        infomorphism: info.violations,
        sorts: sorts.violations,
        cells,
    })
}

/// A validated table morphism.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TableMorphism {
    src: Table,
    dst: Table,
    col_map: FinMap,
    info: Infomorphism,
    key_map: FinMap,
}

impl TableMorphism {
    pub fn new(
        src: Table,
        dst: Table,
        col_map: FinMap,
        info: Infomorphism,
        key_map: FinMap,
    ) -> Result<Self, Error> {
        if info.source() != dst.cls() || info.target() != src.cls() {
            return Err(Error::BoundaryMismatch(
                "infomorphism endpoints must be dst.cls ⇄ src.cls".into(),
            ));
        }
        let report = check_table_morphism(
            &src,
            &dst,
            &col_map,
            info.type_map(),
            info.inst_map(),
            &key_map,
        )?;
        if !report.is_valid() {
            return Err(Error::InvalidTableMorphism(report));
        }
        Ok(TableMorphism {
            src,
            dst,
            col_map,
            info,
            key_map,
        })
    }

    /// A fiber morphism: identity infomorphism over a shared classification.
    pub fn fiber(src: Table, dst: Table, col_map: FinMap, key_map: FinMap) -> Result<Self, Error> {
        if src.cls() != dst.cls() {
            return Err(Error::ClassificationMismatch);
        }
        let info = Infomorphism::identity(src.cls());
        TableMorphism::new(src, dst, col_map, info, key_map)
    }

    pub fn identity(table: &Table) -> Self {
        let col_map = FinMap::identity(table.sig().columns().map(str::to_string));
        let key_map = FinMap::identity(table.keys());
        let info = Infomorphism::identity(table.cls());
        TableMorphism {
            src: table.clone(),
            dst: table.clone(),
            col_map,
            info,
            key_map,
        }
    }

    pub fn src(&self) -> &Table {
        &self.src
    }

    pub fn dst(&self) -> &Table {
        &self.dst
    }

    pub fn col_map(&self) -> &FinMap {
        &self.col_map
    }

    pub fn key_map(&self) -> &FinMap {
        &self.key_map
    }

    pub fn info(&self) -> &Infomorphism {
        &self.info
    }

    /// True when the underlying infomorphism is an identity.
    pub fn is_fiber(&self) -> bool {
        self.info.is_identity()
    }
}

/// Composes morphisms diagrammatically: `first : T₁ → T₂`, `second : T₂ → T₃`
/// yield `T₁ → T₃`. All components compose map-wise; the result is
/// re-validated.
pub fn compose_table_morphisms(
    first: &TableMorphism,
    second: &TableMorphism,
) -> Result<TableMorphism, Error> {
    if first.dst != second.src {
        return Err(Error::BoundaryMismatch(
            "middle tables of a composition differ".into(),
        ));
    }
    let col_map = second.col_map.then(&first.col_map)?;
    let key_map = first.key_map.then(&second.key_map)?;
    let info = first.info.compose(&second.info)?;
    TableMorphism::new(first.src.clone(), second.dst.clone(), col_map, info, key_map)
}

/// Base change: transports a table over the infomorphism's target
/// classification to one over its source.
///
/// The signature is pulled back (columns renamed `i@x`), keys are unchanged,
/// and every cell is relabeled through the instance map. Domain integrity of
/// the result is guaranteed by the infomorphism condition and re-validated.
pub fn migrate(table: &Table, info: &Infomorphism) -> Result<Table, Error> {
    if table.cls() != info.target() {
        return Err(Error::ClassificationMismatch);
    }
    let sig = f_star(table.sig(), info.type_map(), info.source().types())?;
    let mut rows = Vec::new();
    for (key, tup) in table.rows() {
        let mut entries = Vec::new();
        for (col, sort) in sig.sorts().iter() {
            // col is "i@x"; recover i by stripping the sort suffix
            let original = col
                .strip_suffix(&format!("@{sort}"))
                .ok_or_else(|| Error::Internal(format!("malformed pulled column `{col}`")))?;
            let value = info.inst_map().apply(tup.entry(original)?)?;
            entries.push((col.to_string(), value.to_string()));
        }
        rows.push((key.to_string(), Tup::new(entries)?));
    }
    Table::new(sig, info.source().clone(), rows)
}

/// Base change on a fiber morphism over the infomorphism's target: produces
/// the corresponding fiber morphism between the migrated tables.
pub fn migrate_morphism(m: &TableMorphism, info: &Infomorphism) -> Result<TableMorphism, Error> {
    if !m.is_fiber() {
        return Err(Error::BoundaryMismatch(
            "only fiber morphisms migrate along an infomorphism".into(),
        ));
    }
    let src = migrate(m.src(), info)?;
    let dst = migrate(m.dst(), info)?;
    let mut pairs = Vec::new();
    for (col, sort) in dst.sig().sorts().iter() {
        let original = col
            .strip_suffix(&format!("@{sort}"))
            .ok_or_else(|| Error::Internal(format!("malformed pulled column `{col}`")))?;
        let image = m.col_map().apply(original)?;
        pairs.push((col.to_string(), pulled_column_name(image, sort)));
    }
    TableMorphism::fiber(src, dst, FinMap::new(pairs)?, m.key_map().clone())
}

/// Search caps for [`tables_isomorphic_with`].
#[derive(Debug, Clone, Copy)]
pub struct IsoCaps {
    pub max_columns: usize,
    pub max_keys: usize,
}

impl Default for IsoCaps {
    fn default() -> Self {
        IsoCaps {
            max_columns: 10,
            max_keys: 64,
        }
    }
}

/// An isomorphism witness: a sort-respecting column bijection and a key
/// bijection making both directions valid fiber morphisms.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TableIso {
    /// Column bijection, first table's arity to second's.
    pub columns: FinMap,
    /// Key bijection, first table's keys to second's.
    pub keys: FinMap,
}

/// Searches for an isomorphism between two tables over the same
/// classification, under the default caps (10 columns, 64 keys).
pub fn tables_isomorphic(t1: &Table, t2: &Table) -> Result<Option<TableIso>, Error> {
    tables_isomorphic_with(t1, t2, IsoCaps::default())
}

/// Exhaustive isomorphism search with explicit caps.
///
/// Candidate column bijections are restricted to columns of equal sort and
/// equal value multiset; candidates are tried in lexicographic order, so the
/// returned witness is deterministic.
pub fn tables_isomorphic_with(
    t1: &Table,
    t2: &Table,
    caps: IsoCaps,
) -> Result<Option<TableIso>, Error> {
    if t1.cls() != t2.cls() {
        return Err(Error::ClassificationMismatch);
    }
    for t in [t1, t2] {
        if t.sig().len() > caps.max_columns {
            return Err(Error::SizeCap {
                what: "columns in isomorphism search",
                actual: t.sig().len(),
                cap: caps.max_columns,
            });
        }
        if t.key_count() > caps.max_keys {
            return Err(Error::SizeCap {
                what: "keys in isomorphism search",
                actual: t.key_count(),
                cap: caps.max_keys,
            });
        }
    }
    if t1.sig().len() != t2.sig().len() || t1.key_count() != t2.key_count() {
        return Ok(None);
    }

    // Group columns by (sort, value multiset); any isomorphism must match
    // within groups.
    let profile = |t: &Table, col: &str| -> (String, Vec<String>) {
        let sort = t.sig().sort_of(col).unwrap_or_default().to_string();
        let mut values: Vec<String> = t
            .rows()
            .map(|(_, tup)| tup.get(col).unwrap_or_default().to_string())
            .collect();
        values.sort();
        (sort, values)
    };
    let mut groups1: BTreeMap<(String, Vec<String>), Vec<String>> = BTreeMap::new();
    for col in t1.sig().columns() {
        groups1.entry(profile(t1, col)).or_default().push(col.to_string());
    }
    let mut groups2: BTreeMap<(String, Vec<String>), Vec<String>> = BTreeMap::new();
    for col in t2.sig().columns() {
        groups2.entry(profile(t2, col)).or_default().push(col.to_string());
    }
    if groups1.len() != groups2.len() {
        return Ok(None);
    }
    let mut grouped: Vec<(Vec<String>, Vec<String>)> = Vec::new();
    for (key, cols1) in &groups1 {
        match groups2.get(key) {
            Some(cols2) if cols2.len() == cols1.len() => {
                grouped.push((cols1.clone(), cols2.clone()))
            }
            _ => return Ok(None),
        }
    }

    let mut assignment: BTreeMap<String, String> = BTreeMap::new();
    let mut found = None;
    search_column_bijections(t1, t2, &grouped, 0, &mut Vec::new(), &mut assignment, &mut found);
    Ok(found)
}

fn search_column_bijections(
    t1: &Table,
    t2: &Table,
    grouped: &[(Vec<String>, Vec<String>)],
    group_idx: usize,
    scratch: &mut Vec<bool>,
    assignment: &mut BTreeMap<String, String>,
    found: &mut Option<TableIso>,
) {
    if found.is_some() {
        return;
    }
    if group_idx == grouped.len() {
        if let Some(keys) = match_keys(t1, t2, assignment) {
            let columns: FinMap = assignment
                .iter()
                .map(|(a, b)| (a.clone(), b.clone()))
                .collect();
            *found = Some(TableIso { columns, keys });
        }
        return;
    }
    let (cols1, cols2) = &grouped[group_idx];
    permute_group(
        t1, t2, grouped, group_idx, cols1, cols2, 0, scratch, assignment, found,
    );
}

#[allow(clippy::too_many_arguments)]
fn permute_group(
    t1: &Table,
    t2: &Table,
    grouped: &[(Vec<String>, Vec<String>)],
    group_idx: usize,
    cols1: &[String],
    cols2: &[String],
    pos: usize,
    scratch: &mut Vec<bool>,
    assignment: &mut BTreeMap<String, String>,
    found: &mut Option<TableIso>,
) {
    if found.is_some() {
        return;
    }
    if pos == cols1.len() {
        search_column_bijections(t1, t2, grouped, group_idx + 1, scratch, assignment, found);
        return;
    }
    let depth = scratch.len();
    scratch.resize(depth.max(cols2.len()), false);
    for (j, c2) in cols2.iter().enumerate() {
        if assignment.values().any(|v| v == c2) {
            continue;
        }
        assignment.insert(cols1[pos].clone(), c2.clone());
        permute_group(
            t1,
            t2,
            grouped,
            group_idx,
            cols1,
            cols2,
            pos + 1,
            scratch,
            assignment,
            found,
        );
        assignment.remove(&cols1[pos]);
        if found.is_some() {
            return;
        }
        let _ = j;
    }
}

/// Given a full column bijection, pairs keys whose renamed tuples agree.
/// Within a content class, keys are paired in lexicographic order.
fn match_keys(t1: &Table, t2: &Table, columns: &BTreeMap<String, String>) -> Option<FinMap> {
    let render1 = |tup: &Tup| -> Vec<(String, String)> {
        // rename T1 columns into T2 names
        columns
            .iter()
            .map(|(c1, c2)| (c2.clone(), tup.get(c1).unwrap_or_default().to_string()))
            .collect()
    };
    let render2 = |tup: &Tup| -> Vec<(String, String)> {
        tup.iter()
            .map(|(c, v)| (c.to_string(), v.to_string()))
            .collect()
    };
    let mut class1: BTreeMap<Vec<(String, String)>, Vec<String>> = BTreeMap::new();
    for (k, tup) in t1.rows() {
        let mut r = render1(tup);
        r.sort();
        class1.entry(r).or_default().push(k.to_string());
    }
    let mut class2: BTreeMap<Vec<(String, String)>, Vec<String>> = BTreeMap::new();
    for (k, tup) in t2.rows() {
        let mut r = render2(tup);
        r.sort();
        class2.entry(r).or_default().push(k.to_string());
    }
    if class1.len() != class2.len() {
        return None;
    }
    let mut pairs = Vec::new();
    for (content, keys1) in &class1 {
        let keys2 = class2.get(content)?;
        if keys1.len() != keys2.len() {
            return None;
        }
        for (a, b) in keys1.iter().zip(keys2.iter()) {
            pairs.push((a.clone(), b.clone()));
        }
    }
    FinMap::new(pairs).ok()
}
