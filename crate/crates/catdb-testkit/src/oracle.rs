//! Brute-force oracles, implemented independently of the engine's own
//! algorithms: plain cartesian products with filtering where the engine
//! backtracks and propagates, breadth-first component search where the
//! engine uses union-find, and raw function enumeration for uniqueness
//! arguments.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use catdb_core::cls::Infomorphism;
use catdb_core::fincat::TableDiagram;
use catdb_core::limits::LimitResult;
use catdb_core::colimits::ColimitResult;
use catdb_core::fincat::{Cocone, Cone};
use catdb_core::map::FinMap;
use catdb_core::table::{check_table_morphism, Table, TableMorphism};

/// Every function from `dom` into `cod`, as explicit maps. The number of
/// results is `|cod|^|dom|`, so keep the inputs at desk scale.
pub fn all_functions(dom: &[String], cod: &[String]) -> Vec<FinMap> {
    if dom.is_empty() {
        return vec![FinMap::default()];
    }
    if cod.is_empty() {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut indices = vec![0usize; dom.len()];
    loop {
        let map: FinMap = dom
            .iter()
            .zip(indices.iter())
            .map(|(d, &i)| (d.clone(), cod[i].clone()))
            .collect();
        out.push(map);
        let mut pos = 0;
        loop {
            if pos == indices.len() {
                return out;
            }
            indices[pos] += 1;
            if indices[pos] < cod.len() {
                break;
            }
            indices[pos] = 0;
            pos += 1;
        }
    }
}

/// Enumerates every fiber morphism `t1 → t2` by trying all column maps and
/// key maps and keeping the ones the checker accepts.
pub fn enumerate_fiber_morphisms(t1: &Table, t2: &Table) -> Vec<(FinMap, FinMap)> {
    assert_eq!(t1.cls(), t2.cls(), "fiber morphisms share a classification");
    let id_types = FinMap::identity(t1.cls().types().iter().cloned());
    let id_insts = FinMap::identity(t1.cls().instances().iter().cloned());
    let cols2: Vec<String> = t2.sig().columns().map(str::to_string).collect();
    let cols1: Vec<String> = t1.sig().columns().map(str::to_string).collect();
    let keys1: Vec<String> = t1.keys().into_iter().collect();
    let keys2: Vec<String> = t2.keys().into_iter().collect();
    let mut out = Vec::new();
    for col_map in all_functions(&cols2, &cols1) {
        for key_map in all_functions(&keys1, &keys2) {
            let ok = check_table_morphism(t1, t2, &col_map, &id_types, &id_insts, &key_map)
                .map(|r| r.is_valid())
                .unwrap_or(false);
            if ok {
                out.push((col_map.clone(), key_map));
            }
        }
    }
    out
}

fn diagram_arrows(diagram: &TableDiagram) -> Vec<(String, String, FinMap, FinMap)> {
    let mut out = Vec::new();
    for (name, arrow) in diagram.shape().arrows() {
        if diagram.shape().is_identity(name) {
            continue;
        }
        let m = diagram.morphism_at(name).expect("assigned arrow");
        out.push((
            arrow.dom.clone(),
            arrow.cod.clone(),
            m.col_map().clone(),
            m.key_map().clone(),
        ));
    }
    out
}

/// Nested-loop join oracle: the full cartesian product of component key
/// sets, filtered by every arrow's key map.
pub fn compatible_key_families(diagram: &TableDiagram) -> Vec<BTreeMap<String, String>> {
    let objects: Vec<String> = diagram.shape().objects().iter().cloned().collect();
    let arrows = diagram_arrows(diagram);
    let mut families: Vec<BTreeMap<String, String>> = vec![BTreeMap::new()];
    for object in &objects {
        let keys = diagram.table_at(object).expect("assigned object").keys();
        let mut next = Vec::new();
        for family in &families {
            for key in &keys {
                let mut extended = family.clone();
                extended.insert(object.clone(), key.clone());
                next.push(extended);
            }
        }
        families = next;
    }
    families
        .into_iter()
        .filter(|family| {
            arrows.iter().all(|(dom, cod, _, key_map)| {
                key_map.get(&family[dom]) == Some(family[cod].as_str())
            })
        })
        .collect()
}

/// Exhaustive colimit-column oracle: the full product of component arities,
/// filtered by equal sorts and every arrow's column map.
pub fn compatible_column_families(
    diagram: &TableDiagram,
) -> Vec<BTreeMap<String, String>> {
    let objects: Vec<String> = diagram.shape().objects().iter().cloned().collect();
    let arrows = diagram_arrows(diagram);
    let mut families: Vec<BTreeMap<String, String>> = vec![BTreeMap::new()];
    for object in &objects {
        let cols: Vec<String> = diagram
            .table_at(object)
            .expect("assigned object")
            .sig()
            .columns()
            .map(str::to_string)
            .collect();
        let mut next = Vec::new();
        for family in &families {
            for col in &cols {
                let mut extended = family.clone();
                extended.insert(object.clone(), col.clone());
                next.push(extended);
            }
        }
        families = next;
    }
    families
        .into_iter()
        .filter(|family| {
            let mut sorts = BTreeSet::new();
            for (object, col) in family {
                let sort = diagram
                    .table_at(object)
                    .unwrap()
                    .sig()
                    .sort_of(col)
                    .unwrap()
                    .to_string();
                sorts.insert(sort);
            }
            if sorts.len() > 1 {
                return false;
            }
            arrows.iter().all(|(dom, cod, col_map, _)| {
                col_map.get(&family[cod]) == Some(family[dom].as_str())
            })
        })
        .collect()
}

/// Connected components of the key-transition graph, by breadth-first
/// search over an explicit adjacency list.
pub fn key_components(diagram: &TableDiagram) -> BTreeSet<BTreeSet<(String, String)>> {
    let mut nodes: BTreeSet<(String, String)> = BTreeSet::new();
    for (object, table) in diagram.tables() {
        for key in table.keys() {
            nodes.insert((object.to_string(), key));
        }
    }
    let mut adjacency: BTreeMap<(String, String), Vec<(String, String)>> = BTreeMap::new();
    for (dom, cod, _, key_map) in diagram_arrows(diagram) {
        for (k_dom, k_cod) in key_map.iter() {
            let a = (dom.clone(), k_dom.to_string());
            let b = (cod.clone(), k_cod.to_string());
            adjacency.entry(a.clone()).or_default().push(b.clone());
            adjacency.entry(b).or_default().push(a);
        }
    }
    let mut seen: BTreeSet<(String, String)> = BTreeSet::new();
    let mut components = BTreeSet::new();
    for start in &nodes {
        if seen.contains(start) {
            continue;
        }
        let mut component = BTreeSet::new();
        let mut queue = VecDeque::new();
        queue.push_back(start.clone());
        seen.insert(start.clone());
        while let Some(node) = queue.pop_front() {
            component.insert(node.clone());
            for next in adjacency.get(&node).map(|v| v.as_slice()).unwrap_or(&[]) {
                if seen.insert(next.clone()) {
                    queue.push_back(next.clone());
                }
            }
        }
        components.insert(component);
    }
    components
}

/// Nested-loop pullback oracle: all key pairs whose images in the middle
/// table agree, in lexicographic order.
pub fn pullback_pairs(left: &TableMorphism, right: &TableMorphism) -> Vec<(String, String)> {
    let mut out = Vec::new();
    for a in left.src().keys() {
        for b in right.src().keys() {
            if left.key_map().get(&a) == right.key_map().get(&b) {
                out.push((a.clone(), b.clone()));
            }
        }
    }
    out
}

/// Filter oracle for selection: the keys of `table` whose bound entries
/// occur, jointly, in some row of the reference table.
pub fn select_keys(table: &Table, reference: &Table, binding: &FinMap) -> Vec<String> {
    let mut out = Vec::new();
    for (key, tup) in table.rows() {
        let hit = reference.rows().any(|(_, ref_tup)| {
            binding
                .iter()
                .all(|(ref_col, table_col)| ref_tup.get(ref_col) == tup.get(table_col))
        });
        if hit {
            out.push(key.to_string());
        }
    }
    out
}

/// Counts the candidate mediating morphisms for a cone by exhaustive
/// enumeration.
///
/// The triangle equations constrain the key map pointwise per apex key and
/// the column map pointwise per merged class, so the number of satisfying
/// morphisms is the product over those points of the per-point candidate
/// counts; each per-point count enumerates the full key set or column set.
/// The mediating morphism is unique exactly when the product is 1.
pub fn count_mediating_candidates(
    diagram: &TableDiagram,
    lim: &LimitResult,
    cone: &Cone,
) -> u128 {
    let objects: Vec<String> = diagram.shape().objects().iter().cloned().collect();
    let mut count: u128 = 1;
    for apex_key in cone.apex.keys() {
        let candidates = lim
            .table
            .keys()
            .into_iter()
            .filter(|lim_key| {
                objects.iter().all(|object| {
                    lim.projections[object].key_map().get(lim_key)
                        == cone.legs[object].key_map().get(&apex_key)
                })
            })
            .count() as u128;
        count = count.saturating_mul(candidates);
    }
    let apex_cols: Vec<String> = cone.apex.sig().columns().map(str::to_string).collect();
    for class in &lim.column_classes {
        let candidates = apex_cols
            .iter()
            .filter(|col| {
                class
                    .members
                    .iter()
                    .all(|(object, column)| {
                        cone.legs[object].col_map().get(column) == Some(col.as_str())
                    })
            })
            .count() as u128;
        count = count.saturating_mul(candidates);
    }
    count
}

/// Dual of [`count_mediating_candidates`] for cocones.
pub fn count_comediating_candidates(
    diagram: &TableDiagram,
    colim: &ColimitResult,
    cocone: &Cocone,
) -> u128 {
    let objects: Vec<String> = diagram.shape().objects().iter().cloned().collect();
    let mut count: u128 = 1;
    for class in &colim.key_classes {
        let candidates = cocone
            .apex
            .keys()
            .into_iter()
            .filter(|apex_key| {
                class
                    .members
                    .iter()
                    .all(|(object, key)| {
                        cocone.legs[object].key_map().get(key) == Some(apex_key.as_str())
                    })
            })
            .count() as u128;
        count = count.saturating_mul(candidates);
    }
    let colim_cols: Vec<String> = colim.table.sig().columns().map(str::to_string).collect();
    for apex_col in cocone.apex.sig().columns() {
        let candidates = colim_cols
            .iter()
            .filter(|family| {
                objects.iter().all(|object| {
                    let component = colim.injections[object].col_map().get(family);
                    component == cocone.legs[object].col_map().get(apex_col)
                })
            })
            .count() as u128;
        count = count.saturating_mul(candidates);
    }
    count
}

/// Verifies that base change commutes with joins by exhibiting the canonical
/// isomorphism between `migrate(join(db))` and the join of the migrated
/// diagram, and validating it in both directions with the table-morphism
/// checker.
///
/// Keys agree on the nose (migration leaves key families untouched); columns
/// correspond class-by-class: the pulled-back column `C@x` of the migrated
/// join matches the merged class of the migrated diagram containing
/// `(j, i@x)` for any member `(j, i)` of `C`.
pub fn join_migration_commutes(
    db: &catdb_core::database::Database,
    info: &Infomorphism,
) -> bool {
    let join1 = match db.join() {
        Ok(j) => j,
        Err(_) => return false,
    };
    let migrated_join = match catdb_core::table::migrate(&join1.table, info) {
        Ok(t) => t,
        Err(_) => return false,
    };
    let diagram = match db.to_diagram().and_then(|d| d.migrate(info)) {
        Ok(d) => d,
        Err(_) => return false,
    };
    let join2 = match catdb_core::limits::limit(&diagram) {
        Ok(j) => j,
        Err(_) => return false,
    };
    if migrated_join.keys() != join2.table.keys() {
        return false;
    }
    let mut pairs = Vec::new();
    for col in migrated_join.sig().columns() {
        let Some((class_name, sort)) = col.rsplit_once('@') else {
            return false;
        };
        let Some(class) = join1.column_classes.iter().find(|c| c.name == class_name) else {
            return false;
        };
        let Some((j, i)) = class.members.iter().next() else {
            return false;
        };
        let member = (j.clone(), format!("{i}@{sort}"));
        let Some(target) = join2
            .column_classes
            .iter()
            .find(|c| c.members.contains(&member))
        else {
            return false;
        };
        pairs.push((col.to_string(), target.name.clone()));
    }
    let Ok(columns) = FinMap::new(pairs) else {
        return false;
    };
    let Some(inverse) = columns.inverse() else {
        return false;
    };
    if columns.len() != join2.table.sig().len() {
        return false;
    }
    let keys = FinMap::identity(migrated_join.keys());
    let forward = TableMorphism::fiber(
        migrated_join.clone(),
        join2.table.clone(),
        inverse,
        keys.clone(),
    );
    let backward = TableMorphism::fiber(join2.table.clone(), migrated_join, columns, keys);
    forward.is_ok() && backward.is_ok()
}

/// Applies the migration cell formula directly: every cell of the migrated
/// table must equal the instance map applied to the original cell.
pub fn migrated_cells_match(original: &Table, migrated: &Table, info: &Infomorphism) -> bool {
    for (key, tup) in migrated.rows() {
        let Ok(orig) = original.row(key) else {
            return false;
        };
        for (col, _) in migrated.sig().sorts().iter() {
            let Some((base, _)) = col.rsplit_once('@') else {
                return false;
            };
            let expected = orig
                .get(base)
                .and_then(|v| info.inst_map().get(v));
            if expected != tup.get(col) {
                return false;
            }
        }
    }
    true
}
