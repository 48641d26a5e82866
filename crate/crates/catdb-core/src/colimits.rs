//! Fiberwise colimits of tables over a fixed classification: the initial
//! table, binary coproducts (distributed unions), colimits of arbitrary
//! finite diagrams, and comediating morphisms.
//!
//! Colimit keys are the quotient of the disjoint union of component keys by
//! the equivalence generated by the diagram's key maps; a merged class is
//! named after its lexicographically least member `object.key`. Colimit
//! columns are the arrow-compatible families of equal-sorted component
//! columns, serialized `⟨i₁,…,iₙ⟩` in lexicographic object order.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::cls::Classification;
use crate::error::Error;
use crate::fincat::{check_cocone, Cocone, TableDiagram};
use crate::limits::family_name;
use crate::map::FinMap;
use crate::quotient::UnionFind;
use crate::sig::{Signature, Tup};
use crate::table::{Table, TableMorphism};

/// How many columns a component table may have before colimit column-family
/// enumeration refuses to run.
pub const COLIMIT_ARITY_CAP: usize = 8;

/// Name of the key contributed by `object`'s key `key`.
pub fn component_key_name(object: &str, key: &str) -> String {
    format!("{object}.{key}")
}

/// One merged key class of a colimit, with its provenance.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct KeyClass {
    /// The merged key's name: its least member, as `object.key`.
    pub name: String,
    /// Members as `(object, key)` pairs.
    pub members: BTreeSet<(String, String)>,
}

/// A colimit: the colimit table, its injection cocone, and the merged-key
/// provenance.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ColimitResult {
    pub table: Table,
    /// Injections, keyed by diagram object: `table_at(object) → table`.
    pub injections: BTreeMap<String, TableMorphism>,
    pub key_classes: Vec<KeyClass>,
}

/// The initial table over a classification: no keys, one column per type
/// sorted at itself.
pub fn initial_table(cls: &Classification) -> Table {
    let sig = Signature::new(
        cls.types().iter().cloned(),
        cls.types().iter().map(|x| (x.clone(), x.clone())),
    )
    .expect("identity sorts are always well-formed");
    Table::empty(sig, cls.clone()).expect("the initial table is always valid")
}

/// The unique morphism out of the initial table into `table`.
pub fn initial_morphism(table: &Table) -> Result<TableMorphism, Error> {
    let initial = initial_table(table.cls());
    let col_map = FinMap::tabulate(table.sig().columns(), |col| {
        table.sig().sort_of(col).expect("declared column").to_string()
    });
    TableMorphism::fiber(initial, table.clone(), col_map, FinMap::default())
}

/// Binary coproduct, the distributed union: keys are the tagged disjoint
/// union (`0.k` from the first table, `1.k` from the second), columns are the
/// sort-agreeing pairs `⟨i₁,i₂⟩` of component columns.
pub fn coproduct(t1: &Table, t2: &Table) -> Result<ColimitResult, Error> {
    if t1.cls() != t2.cls() {
        return Err(Error::ClassificationMismatch);
    }
    let cls = t1.cls().clone();
    let mut columns = Vec::new();
    for (i1, s1) in t1.sig().sorts().iter() {
        for (i2, s2) in t2.sig().sorts().iter() {
            if s1 == s2 {
                columns.push((family_name([i1, i2]), s1.to_string(), i1.to_string(), i2.to_string()));
            }
        }
    }
    let sig = Signature::new(
        cls.types().iter().cloned(),
        columns.iter().map(|(name, sort, _, _)| (name.clone(), sort.clone())),
    )?;
    let mut rows = Vec::new();
    let mut key_classes = Vec::new();
    for (tag, table, side) in [("0", t1, 0usize), ("1", t2, 1usize)] {
        for (key, tup) in table.rows() {
            let tagged = component_key_name(tag, key);
            let mut entries = Vec::new();
            for (name, _, i1, i2) in &columns {
                let col = if side == 0 { i1 } else { i2 };
                entries.push((name.clone(), tup.entry(col)?.to_string()));
            }
            rows.push((tagged.clone(), Tup::new(entries)?));
            key_classes.push(KeyClass {
                name: tagged,
                members: [(tag.to_string(), key.to_string())].into_iter().collect(),
            });
        }
    }
    let table = Table::new(sig, cls, rows)?;
    let mut injections = BTreeMap::new();
    for (tag, component, side) in [("0", t1, 0usize), ("1", t2, 1usize)] {
        let col_pairs: Vec<(String, String)> = columns
            .iter()
            .map(|(name, _, i1, i2)| {
                (
                    name.clone(),
                    if side == 0 { i1.clone() } else { i2.clone() },
                )
            })
            .collect();
        let key_pairs: Vec<(String, String)> = component
            .rows()
            .map(|(k, _)| (k.to_string(), component_key_name(tag, k)))
            .collect();
        let injection = TableMorphism::fiber(
            component.clone(),
            table.clone(),
            FinMap::new(col_pairs)?,
            FinMap::new(key_pairs)?,
        )?;
        injections.insert(tag.to_string(), injection);
    }
    key_classes.sort_by(|a, b| a.name.cmp(&b.name));
    Ok(ColimitResult {
        table,
        injections,
        key_classes,
    })
}

fn merged_keys(diagram: &TableDiagram) -> Result<Vec<KeyClass>, Error> {
    let mut uf: UnionFind<(String, String)> = UnionFind::new();
    for (object, table) in diagram.tables() {
        for key in table.keys() {
            uf.add((object.to_string(), key));
        }
    }
    for (name, arrow) in diagram.shape().arrows() {
        if diagram.shape().is_identity(name) {
            continue;
        }
        let m = diagram.morphism_at(name)?;
        for (k_dom, k_cod) in m.key_map().iter() {
            uf.union(
                &(arrow.dom.clone(), k_dom.to_string()),
                &(arrow.cod.clone(), k_cod.to_string()),
            );
        }
    }
    let mut classes = Vec::new();
    for (root, members) in uf.classes() {
        classes.push(KeyClass {
            name: component_key_name(&root.0, &root.1),
            members: members.into_iter().collect(),
        });
    }
    Ok(classes)
}

/// Enumerates the arrow-compatible column families with a common sort.
fn compatible_columns(
    diagram: &TableDiagram,
) -> Result<Vec<(BTreeMap<String, String>, String)>, Error> {
    let objects: Vec<String> = diagram.shape().objects().iter().cloned().collect();
    for object in &objects {
        let arity = diagram.table_at(object)?.sig().len();
        if arity > COLIMIT_ARITY_CAP {
            return Err(Error::SizeCap {
                what: "component arity in colimit column enumeration",
                actual: arity,
                cap: COLIMIT_ARITY_CAP,
            });
        }
    }
    let mut arrows = Vec::new();
    for (name, arrow) in diagram.shape().arrows() {
        if diagram.shape().is_identity(name) {
            continue;
        }
        let m = diagram.morphism_at(name)?;
        arrows.push((arrow.dom.clone(), arrow.cod.clone(), m.col_map().clone()));
    }
    let mut out = Vec::new();
    let mut assign: BTreeMap<String, String> = BTreeMap::new();
    search_columns(diagram, &objects, &arrows, 0, None, &mut assign, &mut out)?;
    Ok(out)
}

#[allow(clippy::too_many_arguments)]
fn search_columns(
    diagram: &TableDiagram,
    objects: &[String],
    arrows: &[(String, String, FinMap)],
    idx: usize,
    sort: Option<String>,
    assign: &mut BTreeMap<String, String>,
    out: &mut Vec<(BTreeMap<String, String>, String)>,
) -> Result<(), Error> {
    if idx == objects.len() {
        if let Some(sort) = sort {
            out.push((assign.clone(), sort));
        }
        return Ok(());
    }
    let object = &objects[idx];
    let table = diagram.table_at(object)?;
    let columns: Vec<(String, String)> = table
        .sig()
        .sorts()
        .iter()
        .map(|(c, s)| (c.to_string(), s.to_string()))
        .collect();
    'candidates: for (column, col_sort) in columns {
        if let Some(existing) = &sort {
            if existing != &col_sort {
                continue;
            }
        }
        // arrow e : dom → cod constrains col_map(i_cod) = i_dom
        for (dom, cod, col_map) in arrows {
            if cod == object {
                if let Some(i_dom) = assign.get(dom) {
                    if col_map.apply(&column)? != i_dom {
                        continue 'candidates;
                    }
                }
            }
            if dom == object {
                if let Some(i_cod) = assign.get(cod) {
                    if col_map.apply(i_cod)? != column {
                        continue 'candidates;
                    }
                }
            }
        }
        assign.insert(object.clone(), column.clone());
        search_columns(
            diagram,
            objects,
            arrows,
            idx + 1,
            Some(col_sort.clone()),
            assign,
            out,
        )?;
        assign.remove(object);
    }
    Ok(())
}

/// The colimit of a finite diagram of tables.
///
/// The empty diagram's colimit is the initial table.
pub fn colimit(diagram: &TableDiagram) -> Result<ColimitResult, Error> {
    let objects: Vec<String> = diagram.shape().objects().iter().cloned().collect();
    if objects.is_empty() {
        return Ok(ColimitResult {
            table: initial_table(diagram.cls()),
            injections: BTreeMap::new(),
            key_classes: Vec::new(),
        });
    }
    let key_classes = merged_keys(diagram)?;
    let columns = compatible_columns(diagram)?;
    let named_columns: Vec<(String, BTreeMap<String, String>, String)> = columns
        .into_iter()
        .map(|(family, sort)| {
            (
                family_name(objects.iter().map(|j| family[j].as_str())),
                family,
                sort,
            )
        })
        .collect();
    let sig = Signature::new(
        diagram.cls().types().iter().cloned(),
        named_columns
            .iter()
            .map(|(name, _, sort)| (name.clone(), sort.clone())),
    )?;
    let mut rows = Vec::new();
    for class in &key_classes {
        let mut entries = Vec::new();
        for (name, family, _) in &named_columns {
            let mut value: Option<String> = None;
            for (object, key) in &class.members {
                let v = diagram
                    .table_at(object)?
                    .row(key)?
                    .entry(&family[object])?
                    .to_string();
                match &value {
                    None => value = Some(v),
                    Some(existing) if existing != &v => {
                        return Err(Error::Internal(format!(
                            "colimit content ill-defined at key class {} column {name}",
                            class.name
                        )))
                    }
                    Some(_) => {}
                }
            }
            entries.push((name.clone(), value.expect("nonempty class")));
        }
        rows.push((class.name.clone(), Tup::new(entries)?));
    }
    let table = Table::new(sig, diagram.cls().clone(), rows)?;

    let mut injections = BTreeMap::new();
    for object in &objects {
        let component = diagram.table_at(object)?;
        let col_pairs: Vec<(String, String)> = named_columns
            .iter()
            .map(|(name, family, _)| (name.clone(), family[object].clone()))
            .collect();
        let mut key_pairs = Vec::new();
        for key in component.keys() {
            let class = key_classes
                .iter()
                .find(|c| c.members.contains(&(object.clone(), key.clone())))
                .ok_or_else(|| Error::Internal("key missing from its class".into()))?;
            key_pairs.push((key, class.name.clone()));
        }
        let injection = TableMorphism::fiber(
            component.clone(),
            table.clone(),
            FinMap::new(col_pairs)?,
            FinMap::new(key_pairs)?,
        )?;
        injections.insert(object.clone(), injection);
    }
    Ok(ColimitResult {
        table,
        injections,
        key_classes,
    })
}

/// The unique comediating morphism from the colimit into a validated
/// cocone's apex.
pub fn comediating_morphism(
    diagram: &TableDiagram,
    colim: &ColimitResult,
    cocone: &Cocone,
) -> Result<TableMorphism, Error> {
    let report = check_cocone(diagram, cocone)?;
    if !report.is_valid() {
        return Err(Error::InvalidCone(report));
    }
    let objects: Vec<String> = diagram.shape().objects().iter().cloned().collect();
    if objects.is_empty() {
        return initial_morphism(&cocone.apex);
    }
    let mut col_pairs = Vec::new();
    for apex_col in cocone.apex.sig().columns() {
        let mut parts = Vec::new();
        for object in &objects {
            parts.push(cocone.legs[object].col_map().apply(apex_col)?.to_string());
        }
        let family = family_name(parts.iter().map(|s| s.as_str()));
        if colim.table.sig().sort_of(&family).is_err() {
            return Err(Error::Internal(format!(
                "cocone column family {family} is missing from the colimit"
            )));
        }
        col_pairs.push((apex_col.to_string(), family));
    }
    let mut key_pairs = Vec::new();
    for class in &colim.key_classes {
        let mut value: Option<String> = None;
        for (object, key) in &class.members {
            let v = cocone.legs[object].key_map().apply(key)?.to_string();
            match &value {
                None => value = Some(v),
                Some(existing) if existing != &v => {
                    return Err(Error::Internal(format!(
                        "comediating key map ill-defined at class {}",
                        class.name
                    )))
                }
                Some(_) => {}
            }
        }
        key_pairs.push((class.name.clone(), value.expect("nonempty class")));
    }
    TableMorphism::fiber(
        colim.table.clone(),
        cocone.apex.clone(),
        FinMap::new(col_pairs)?,
        FinMap::new(key_pairs)?,
    )
}
