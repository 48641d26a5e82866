//! Limits in the fiber category of tables over a fixed classification:
//! the terminal table, binary pullbacks, limits of arbitrary finite diagrams
//! (database joins), mediating morphisms, and selection.
//!
//! Limit columns are the quotient of the disjoint union of component columns
//! by the equivalence generated by the diagram's column maps; a merged class
//! is named after its lexicographically least member `object.column`. Limit
//! keys are the arrow-compatible families of component keys, serialized
//! `⟨k₁,…,kₙ⟩` in lexicographic object order.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::cls::Classification;
use crate::error::Error;
use crate::fincat::{check_cone, Cone, TableDiagram};
use crate::map::FinMap;
use crate::quotient::UnionFind;
use crate::sig::{Signature, Tup};
use crate::table::{Table, TableMorphism};

/// Serialized name of a key family or tuple of values: `⟨a,b,…⟩`.
pub fn family_name<'a>(parts: impl IntoIterator<Item = &'a str>) -> String {
    let joined = parts.into_iter().collect::<Vec<_>>().join(",");
    format!("⟨{joined}⟩")
}

/// Name of the column contributed by `object`'s column `column`.
pub fn component_column_name(object: &str, column: &str) -> String {
    format!("{object}.{column}")
}

/// One merged column class of a limit, with its provenance.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ColumnClass {
    /// The merged column's name: its least member, as `object.column`.
    pub name: String,
    pub sort: String,
    /// Members as `(object, column)` pairs.
    pub members: BTreeSet<(String, String)>,
}

/// A limit: the limit table, its projection cone, and the merged-column
/// provenance.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LimitResult {
    pub table: Table,
    /// Projections, keyed by diagram object: `table → table_at(object)`.
    pub projections: BTreeMap<String, TableMorphism>,
    pub column_classes: Vec<ColumnClass>,
}

/// The terminal table over a classification: empty arity, one key `⋆`.
pub fn terminal_table(cls: &Classification) -> Table {
    let sig = Signature::empty(cls.types().iter().cloned());
    Table::new(sig, cls.clone(), vec![("⋆".to_string(), Tup::empty())])
        .expect("the terminal table is always valid")
}

fn merged_columns(diagram: &TableDiagram) -> Result<Vec<ColumnClass>, Error> {
    let mut uf: UnionFind<(String, String)> = UnionFind::new();
    for (object, table) in diagram.tables() {
        for column in table.sig().columns() {
            uf.add((object.to_string(), column.to_string()));
        }
    }
    for (name, arrow) in diagram.shape().arrows() {
        if diagram.shape().is_identity(name) {
            continue;
        }
        let m = diagram.morphism_at(name)?;
        // arrow e : j → j' sends column i' of j' to col_map(i') of j
        for (i_cod, i_dom) in m.col_map().iter() {
            uf.union(
                &(arrow.dom.clone(), i_dom.to_string()),
                &(arrow.cod.clone(), i_cod.to_string()),
            );
        }
    }
    let mut classes = Vec::new();
    for (root, members) in uf.classes() {
        let name = component_column_name(&root.0, &root.1);
        let mut sort: Option<String> = None;
        for (object, column) in &members {
            let s = diagram.table_at(object)?.sig().sort_of(column)?.to_string();
            match &sort {
                None => sort = Some(s),
                Some(existing) if existing != &s => {
                    return Err(Error::Internal(format!(
                        "merged column class {name} mixes sorts {existing} and {s}"
                    )))
                }
                Some(_) => {}
            }
        }
        classes.push(ColumnClass {
            name,
            sort: sort.expect("classes are nonempty"),
            members: members.into_iter().collect(),
        });
    }
    Ok(classes)
}

/// Enumerates all arrow-compatible key families, assigning objects in
/// lexicographic order. Candidates for the next object are intersected with
/// everything forced by arrows into and out of already-assigned objects, so
/// constrained objects never fan out.
fn compatible_families(diagram: &TableDiagram) -> Result<Vec<BTreeMap<String, String>>, Error> {
    let objects: Vec<String> = diagram.shape().objects().iter().cloned().collect();
    // (arrow dom, arrow cod, key map) for non-identity arrows
    let mut arrows = Vec::new();
    for (name, arrow) in diagram.shape().arrows() {
        if diagram.shape().is_identity(name) {
            continue;
        }
        let m = diagram.morphism_at(name)?;
        arrows.push((arrow.dom.clone(), arrow.cod.clone(), m.key_map().clone()));
    }
    let mut out = Vec::new();
    let mut assign: BTreeMap<String, String> = BTreeMap::new();
    search_families(diagram, &objects, &arrows, 0, &mut assign, &mut out)?;
    Ok(out)
}

fn search_families(
    diagram: &TableDiagram,
    objects: &[String],
    arrows: &[(String, String, FinMap)],
    idx: usize,
    assign: &mut BTreeMap<String, String>,
    out: &mut Vec<BTreeMap<String, String>>,
) -> Result<(), Error> {
    if idx == objects.len() {
        out.push(assign.clone());
        return Ok(());
    }
    let object = &objects[idx];
    let all_keys = diagram.table_at(object)?.keys();
    // intersect with keys forced by arrows touching assigned objects
    let mut candidates: Vec<String> = Vec::new();
    'keys: for key in &all_keys {
        for (dom, cod, key_map) in arrows {
            if dom == object {
                if let Some(assigned) = assign.get(cod) {
                    if key_map.apply(key)? != assigned {
                        continue 'keys;
                    }
                }
            }
            if cod == object {
                if let Some(assigned) = assign.get(dom) {
                    if key_map.apply(assigned)? != key {
                        continue 'keys;
                    }
                }
            }
        }
        candidates.push(key.clone());
    }
    for key in candidates {
        assign.insert(object.clone(), key);
        search_families(diagram, objects, arrows, idx + 1, assign, out)?;
        assign.remove(object);
    }
    Ok(())
}

/// The limit of a finite diagram of tables.
pub fn limit(diagram: &TableDiagram) -> Result<LimitResult, Error> {
    let objects: Vec<String> = diagram.shape().objects().iter().cloned().collect();
    let classes = merged_columns(diagram)?;
    let families = compatible_families(diagram)?;

    let sig = Signature::new(
        diagram.cls().types().iter().cloned(),
        classes
            .iter()
            .map(|c| (c.name.clone(), c.sort.clone())),
    )?;
    let mut rows = Vec::new();
    for family in &families {
        let key = family_name(objects.iter().map(|j| family[j].as_str()));
        let mut entries = Vec::new();
        for class in &classes {
            let mut value: Option<String> = None;
            for (object, column) in &class.members {
                let v = diagram
                    .table_at(object)?
                    .row(&family[object])?
                    .entry(column)?
                    .to_string();
                match &value {
                    None => value = Some(v),
                    Some(existing) if existing != &v => {
                        return Err(Error::Internal(format!(
                            "limit content ill-defined at class {} for family {key}",
                            class.name
                        )))
                    }
                    Some(_) => {}
                }
            }
            entries.push((class.name.clone(), value.expect("classes are nonempty")));
        }
        rows.push((key, Tup::new(entries)?));
    }
    let table = Table::new(sig, diagram.cls().clone(), rows)?;

    let mut projections = BTreeMap::new();
    for object in &objects {
        let component = diagram.table_at(object)?;
        let mut col_pairs = Vec::new();
        for column in component.sig().columns() {
            let class = classes
                .iter()
                .find(|c| c.members.contains(&(object.clone(), column.to_string())))
                .ok_or_else(|| Error::Internal("column missing from its class".into()))?;
            col_pairs.push((column.to_string(), class.name.clone()));
        }
        let mut key_pairs = Vec::new();
        for family in &families {
            let key = family_name(objects.iter().map(|j| family[j].as_str()));
            key_pairs.push((key, family[object].clone()));
        }
        let projection = TableMorphism::fiber(
            table.clone(),
            component.clone(),
            FinMap::new(col_pairs)?,
            FinMap::new(key_pairs)?,
        )?;
        projections.insert(object.clone(), projection);
    }
    Ok(LimitResult {
        table,
        projections,
        column_classes: classes,
    })
}

/// Binary pullback of two fiber morphisms with a common target.
///
/// Keys are the pairs `⟨a,b⟩` whose images agree in the middle table;
/// columns are merged exactly as in the limit over the span shape, with
/// component tags `left`, `mid`, `right`. The result equals the span limit
/// up to the canonical isomorphism collapsing the determined middle key.
pub fn pullback(left: &TableMorphism, right: &TableMorphism) -> Result<LimitResult, Error> {
    if !left.is_fiber() || !right.is_fiber() {
        return Err(Error::BoundaryMismatch(
            "pullback legs must be fiber morphisms".into(),
        ));
    }
    if left.dst() != right.dst() {
        return Err(Error::BoundaryMismatch(
            "pullback legs must share their target".into(),
        ));
    }
    let a = left.src();
    let b = right.src();
    let c = left.dst();
    let cls = a.cls().clone();

    let mut uf: UnionFind<(String, String)> = UnionFind::new();
    let tagged: [(&str, &Table); 3] = [("left", a), ("mid", c), ("right", b)];
    for (tag, table) in tagged {
        for column in table.sig().columns() {
            uf.add((tag.to_string(), column.to_string()));
        }
    }
    for (i_c, i_a) in left.col_map().iter() {
        uf.union(
            &("left".to_string(), i_a.to_string()),
            &("mid".to_string(), i_c.to_string()),
        );
    }
    for (i_c, i_b) in right.col_map().iter() {
        uf.union(
            &("right".to_string(), i_b.to_string()),
            &("mid".to_string(), i_c.to_string()),
        );
    }
    let mut classes = Vec::new();
    for (root, members) in uf.classes() {
        let name = component_column_name(&root.0, &root.1);
        let table_of = |tag: &str| -> &Table {
            match tag {
                "left" => a,
                "mid" => c,
                _ => b,
            }
        };
        let sort = table_of(&root.0).sig().sort_of(&root.1)?.to_string();
        classes.push(ColumnClass {
            name,
            sort,
            members: members.into_iter().collect(),
        });
    }

    let sig = Signature::new(
        cls.types().iter().cloned(),
        classes.iter().map(|cl| (cl.name.clone(), cl.sort.clone())),
    )?;
    let mut rows = Vec::new();
    let mut key_components = Vec::new();
    for ka in a.keys() {
        for kb in b.keys() {
            if left.key_map().apply(&ka)? != right.key_map().apply(&kb)? {
                continue;
            }
            let kc = left.key_map().apply(&ka)?.to_string();
            let key = family_name([ka.as_str(), kb.as_str()]);
            let mut entries = Vec::new();
            for class in &classes {
                let mut value: Option<String> = None;
                for (tag, column) in &class.members {
                    let v = match tag.as_str() {
                        "left" => a.row(&ka)?.entry(column)?,
                        "mid" => c.row(&kc)?.entry(column)?,
                        _ => b.row(&kb)?.entry(column)?,
                    }
                    .to_string();
                    match &value {
                        None => value = Some(v),
                        Some(existing) if existing != &v => {
                            return Err(Error::Internal(format!(
                                "pullback content ill-defined at class {}",
                                class.name
                            )))
                        }
                        Some(_) => {}
                    }
                }
                entries.push((class.name.clone(), value.expect("nonempty class")));
            }
            rows.push((key.clone(), Tup::new(entries)?));
            key_components.push((key, ka.clone(), kb.clone(), kc));
        }
    }
    let table = Table::new(sig, cls, rows)?;

    let mut projections = BTreeMap::new();
    for (tag, component) in tagged {
        let mut col_pairs = Vec::new();
        for column in component.sig().columns() {
            let class = classes
                .iter()
                .find(|cl| cl.members.contains(&(tag.to_string(), column.to_string())))
                .ok_or_else(|| Error::Internal("column missing from its class".into()))?;
            col_pairs.push((column.to_string(), class.name.clone()));
        }
        let mut key_pairs = Vec::new();
        for (key, ka, kb, kc) in &key_components {
            let target = match tag {
                "left" => ka,
                "mid" => kc,
                _ => kb,
            };
            key_pairs.push((key.clone(), target.clone()));
        }
        let projection = TableMorphism::fiber(
            table.clone(),
            component.clone(),
            FinMap::new(col_pairs)?,
            FinMap::new(key_pairs)?,
        )?;
        projections.insert(tag.to_string(), projection);
    }
    Ok(LimitResult {
        table,
        projections,
        column_classes: classes,
    })
}

/// The unique mediating morphism from a validated cone into the limit.
///
/// Its key map sends an apex key to the family of leg images; its column map
/// sends a merged class to the common leg image of its members. Failure of
/// that well-definedness is a bug in the caller-supplied limit, not user
/// error.
pub fn mediating_morphism(
    diagram: &TableDiagram,
    lim: &LimitResult,
    cone: &Cone,
) -> Result<TableMorphism, Error> {
    let report = check_cone(diagram, cone)?;
    if !report.is_valid() {
        return Err(Error::InvalidCone(report));
    }
    let objects: Vec<String> = diagram.shape().objects().iter().cloned().collect();
    let mut key_pairs = Vec::new();
    for apex_key in cone.apex.keys() {
        let mut parts = Vec::new();
        for object in &objects {
            parts.push(cone.legs[object].key_map().apply(&apex_key)?.to_string());
        }
        let target = family_name(parts.iter().map(|s| s.as_str()));
        if !lim.table.contains_key(&target) {
            return Err(Error::Internal(format!(
                "cone key family {target} is missing from the limit"
            )));
        }
        key_pairs.push((apex_key, target));
    }
    let mut col_pairs = Vec::new();
    for class in &lim.column_classes {
        let mut value: Option<String> = None;
        for (object, column) in &class.members {
            let v = cone.legs[object].col_map().apply(column)?.to_string();
            match &value {
                None => value = Some(v),
                Some(existing) if existing != &v => {
                    return Err(Error::Internal(format!(
                        "mediating column map ill-defined at class {}",
                        class.name
                    )))
                }
                Some(_) => {}
            }
        }
        col_pairs.push((class.name.clone(), value.expect("nonempty class")));
    }
    TableMorphism::fiber(
        cone.apex.clone(),
        lim.table.clone(),
        FinMap::new(col_pairs)?,
        FinMap::new(key_pairs)?,
    )
}

/// Selection: keeps the rows of `table` whose entries under `binding` occur
/// in the reference table. `binding` maps each reference column to an
/// equal-sorted column of `table`.
///
/// Realized as the pullback of the two projections into the table of bound
/// value tuples, so the result is a limit like any other join.
pub fn select(table: &Table, reference: &Table, binding: &FinMap) -> Result<LimitResult, Error> {
    if table.cls() != reference.cls() {
        return Err(Error::ClassificationMismatch);
    }
    binding.check_total(&reference.sig().arity(), &table.sig().arity())?;
    for (ref_col, table_col) in binding.iter() {
        let ref_sort = reference.sig().sort_of(ref_col)?;
        let table_sort = table.sig().sort_of(table_col)?;
        if ref_sort != table_sort {
            return Err(Error::SortMismatch {
                left: ref_sort.to_string(),
                right: table_sort.to_string(),
            });
        }
    }
    let ref_cols: Vec<String> = reference.sig().columns().map(str::to_string).collect();
    let value_key = |values: &BTreeMap<String, String>| -> String {
        family_name(ref_cols.iter().map(|c| values[c].as_str()))
    };

    // the middle table: every bound value tuple seen on either side
    let mut mid_rows: BTreeMap<String, Tup> = BTreeMap::new();
    let mut left_keys = Vec::new();
    for (key, tup) in table.rows() {
        let mut values = BTreeMap::new();
        for (ref_col, table_col) in binding.iter() {
            values.insert(ref_col.to_string(), tup.entry(table_col)?.to_string());
        }
        let mid = value_key(&values);
        mid_rows.entry(mid.clone()).or_insert(Tup::new(values)?);
        left_keys.push((key.to_string(), mid));
    }
    let mut right_keys = Vec::new();
    for (key, tup) in reference.rows() {
        let values: BTreeMap<String, String> = tup
            .iter()
            .map(|(c, v)| (c.to_string(), v.to_string()))
            .collect();
        let mid = value_key(&values);
        mid_rows.entry(mid.clone()).or_insert(Tup::new(values)?);
        right_keys.push((key.to_string(), mid));
    }
    let mid_sig = Signature::new(
        table.cls().types().iter().cloned(),
        reference
            .sig()
            .sorts()
            .iter()
            .map(|(c, s)| (c.to_string(), s.to_string())),
    )?;
    let mid = Table::new(mid_sig, table.cls().clone(), mid_rows)?;

    let left = TableMorphism::fiber(
        table.clone(),
        mid.clone(),
        binding.clone(),
        FinMap::new(left_keys)?,
    )?;
    let right = TableMorphism::fiber(
        reference.clone(),
        mid,
        FinMap::identity(ref_cols),
        FinMap::new(right_keys)?,
    )?;
    pullback(&left, &right)
}
