//! Resolution of raw declarations into a validated workspace.
//!
//! Names are unique per kind across all source files, cross-references
//! resolve by kind (classifications, then tables/infomorphisms/schemas, then
//! databases, then morphisms), and every object is validated by the engine
//! as it is built, with errors pointing back at the declaration.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use catdb_core::cls::{Classification, Infomorphism};
use catdb_core::database::{Database, DbSchema};
use catdb_core::fincat::FinCat;
use catdb_core::map::FinMap;
use catdb_core::sig::{Signature, Tup};
use catdb_core::table::{Table, TableMorphism};

use crate::dsl::{
    parse_raw, Located, Pos, RawDatabase, RawMorphism, RawSchema, RawWorkspace, SourceError,
};

/// A named table declaration.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TableDecl {
    pub cls_name: String,
    pub table: Table,
}

/// A named infomorphism declaration.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InfoDecl {
    pub source_name: String,
    pub target_name: String,
    pub info: Infomorphism,
}

/// One declared (generating) arrow of a schema.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ArrowDecl {
    pub name: String,
    pub dom: String,
    pub cod: String,
    pub col_map: FinMap,
}

/// A named schema declaration. The relation category is the free category on
/// the declared arrows; composite column maps are derived functorially.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SchemaDecl {
    pub cls_name: String,
    pub generators: Vec<ArrowDecl>,
    pub schema: DbSchema,
}

/// A named database declaration. Key maps are declared per generating arrow;
/// composites are derived functorially.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DbDecl {
    pub schema_name: String,
    pub cls_name: String,
    pub db: Database,
}

/// A named table morphism declaration.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MorphismDecl {
    pub src_name: String,
    pub dst_name: String,
    pub morphism: TableMorphism,
}

/// A fully resolved, fully validated workspace.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct Workspace {
    pub classifications: BTreeMap<String, Classification>,
    pub tables: BTreeMap<String, TableDecl>,
    pub infomorphisms: BTreeMap<String, InfoDecl>,
    pub schemas: BTreeMap<String, SchemaDecl>,
    pub databases: BTreeMap<String, DbDecl>,
    pub morphisms: BTreeMap<String, MorphismDecl>,
}

impl Workspace {
    pub fn is_empty(&self) -> bool {
        self.classifications.is_empty()
            && self.tables.is_empty()
            && self.infomorphisms.is_empty()
            && self.schemas.is_empty()
            && self.databases.is_empty()
            && self.morphisms.is_empty()
    }

    /// One line per object, sorted by kind then name.
    pub fn summary_lines(&self) -> Vec<String> {
        let mut lines = Vec::new();
        for name in self.classifications.keys() {
            lines.push(format!("classification {name}: OK"));
        }
        for name in self.infomorphisms.keys() {
            lines.push(format!("infomorphism {name}: OK"));
        }
        for name in self.tables.keys() {
            lines.push(format!("table {name}: OK"));
        }
        for name in self.schemas.keys() {
            lines.push(format!("schema {name}: OK"));
        }
        for name in self.databases.keys() {
            lines.push(format!("database {name}: OK"));
        }
        for name in self.morphisms.keys() {
            lines.push(format!("morphism {name}: OK"));
        }
        lines
    }

    pub fn counts(&self) -> String {
        fn part(n: usize, word: &str) -> Option<String> {
            if n == 0 {
                None
            } else if n == 1 {
                Some(format!("1 {word}"))
            } else {
                Some(format!("{n} {word}s"))
            }
        }
        let parts: Vec<String> = [
            part(self.classifications.len(), "classification"),
            part(self.tables.len(), "table"),
            part(self.infomorphisms.len(), "infomorphism"),
            part(self.schemas.len(), "schema"),
            part(self.databases.len(), "database"),
            part(self.morphisms.len(), "morphism"),
        ]
        .into_iter()
        .flatten()
        .collect();
        if parts.is_empty() {
            "empty".to_string()
        } else {
            parts.join(", ")
        }
    }
}

fn pairs_to_map(pairs: &[(Located<String>, String)]) -> Result<FinMap, SourceError> {
    let pos = pairs.first().map(|(l, _)| l.pos).unwrap_or(Pos { line: 1, col: 1 });
    FinMap::new(
        pairs
            .iter()
            .map(|(l, r)| (l.value.clone(), r.clone()))
            .collect::<Vec<_>>(),
    )
    .map_err(|e| SourceError::validation(pos, e.to_string()))
}

fn validation(pos: Pos, err: impl std::fmt::Display) -> SourceError {
    SourceError::validation(pos, err.to_string())
}

/// Parses one or more source texts and resolves them into a workspace.
pub fn parse_workspace(texts: &[&str]) -> Result<Workspace, SourceError> {
    let mut raw = RawWorkspace::default();
    for text in texts {
        let part = parse_raw(text)?;
        raw.classifications.extend(part.classifications);
        raw.tables.extend(part.tables);
        raw.infomorphisms.extend(part.infomorphisms);
        raw.schemas.extend(part.schemas);
        raw.databases.extend(part.databases);
        raw.morphisms.extend(part.morphisms);
    }
    resolve(raw)
}

fn resolve(raw: RawWorkspace) -> Result<Workspace, SourceError> {
    let mut ws = Workspace::default();

    for decl in &raw.classifications {
        let cls = Classification::new(
            decl.types.iter().map(|t| t.value.clone()).collect::<Vec<_>>(),
            decl.instances
                .iter()
                .map(|t| t.value.clone())
                .collect::<Vec<_>>(),
            decl.holds
                .iter()
                .map(|(y, x)| (y.value.clone(), x.clone()))
                .collect::<Vec<_>>(),
        )
        .map_err(|e| validation(decl.name.pos, e))?;
        if ws
            .classifications
            .insert(decl.name.value.clone(), cls)
            .is_some()
        {
            return Err(SourceError::validation(
                decl.name.pos,
                format!("duplicate classification `{}`", decl.name.value),
            ));
        }
    }

    let lookup_cls = |ws: &Workspace, name: &Located<String>| -> Result<Classification, SourceError> {
        ws.classifications
            .get(&name.value)
            .cloned()
            .ok_or_else(|| {
                SourceError::unresolved(
                    name.pos,
                    format!("unknown classification `{}`", name.value),
                )
            })
    };

    for decl in &raw.tables {
        let cls = lookup_cls(&ws, &decl.cls)?;
        let sig = Signature::new(
            cls.types().iter().cloned(),
            decl.cols
                .iter()
                .map(|(c, s)| (c.value.clone(), s.clone()))
                .collect::<Vec<_>>(),
        )
        .map_err(|e| validation(decl.name.pos, e))?;
        let mut rows = Vec::new();
        let mut seen = BTreeSet::new();
        for row in &decl.rows {
            let tup = Tup::new(
                row.entries
                    .iter()
                    .map(|(c, v)| (c.value.clone(), v.clone()))
                    .collect::<Vec<_>>(),
            )
            .map_err(|e| validation(row.key.pos, e))?;
            // check this row in isolation so the error lands on its line
            if !seen.insert(row.key.value.clone()) {
                return Err(SourceError::validation(
                    row.key.pos,
                    format!("duplicate key `{}`", row.key.value),
                ));
            }
            if tup.arity() != sig.arity() {
                return Err(SourceError::validation(
                    row.key.pos,
                    format!("row `{}` does not match the declared columns", row.key.value),
                ));
            }
            for (col, sort) in sig.sorts().iter() {
                let value = tup.entry(col).map_err(|e| validation(row.key.pos, e))?;
                if !cls.holds(value, sort) {
                    return Err(SourceError::validation(
                        row.key.pos,
                        format!(
                            "domain integrity: ({}, {col}, {value}) is not of sort {sort}",
                            row.key.value
                        ),
                    ));
                }
            }
            rows.push((row.key.value.clone(), tup));
        }
        let table =
            Table::new(sig, cls, rows).map_err(|e| validation(decl.name.pos, e))?;
        let entry = TableDecl {
            cls_name: decl.cls.value.clone(),
            table,
        };
        if ws.tables.insert(decl.name.value.clone(), entry).is_some() {
            return Err(SourceError::validation(
                decl.name.pos,
                format!("duplicate table `{}`", decl.name.value),
            ));
        }
    }

    for decl in &raw.infomorphisms {
        let source = lookup_cls(&ws, &decl.source)?;
        let target = lookup_cls(&ws, &decl.target)?;
        let type_map = pairs_to_map(&decl.type_map)?;
        let inst_map = pairs_to_map(&decl.inst_map)?;
        let info = Infomorphism::new(source, target, type_map, inst_map)
            .map_err(|e| validation(decl.name.pos, e))?;
        let entry = InfoDecl {
            source_name: decl.source.value.clone(),
            target_name: decl.target.value.clone(),
            info,
        };
        if ws
            .infomorphisms
            .insert(decl.name.value.clone(), entry)
            .is_some()
        {
            return Err(SourceError::validation(
                decl.name.pos,
                format!("duplicate infomorphism `{}`", decl.name.value),
            ));
        }
    }

    for decl in &raw.schemas {
        let entry = resolve_schema(&ws, decl)?;
        if ws.schemas.insert(decl.name.value.clone(), entry).is_some() {
            return Err(SourceError::validation(
                decl.name.pos,
                format!("duplicate schema `{}`", decl.name.value),
            ));
        }
    }

    for decl in &raw.databases {
        let entry = resolve_database(&ws, decl)?;
        if ws.databases.insert(decl.name.value.clone(), entry).is_some() {
            return Err(SourceError::validation(
                decl.name.pos,
                format!("duplicate database `{}`", decl.name.value),
            ));
        }
    }

    for decl in &raw.morphisms {
        let entry = resolve_morphism(&ws, decl)?;
        if ws.morphisms.insert(decl.name.value.clone(), entry).is_some() {
            return Err(SourceError::validation(
                decl.name.pos,
                format!("duplicate morphism `{}`", decl.name.value),
            ));
        }
    }
    Ok(ws)
}

/// Builds the free relation category on the declared arrows and extends the
/// declared column maps functorially to identities and composite paths.
fn resolve_schema(ws: &Workspace, decl: &RawSchema) -> Result<SchemaDecl, SourceError> {
    let cls = ws
        .classifications
        .get(&decl.cls.value)
        .ok_or_else(|| {
            SourceError::unresolved(
                decl.cls.pos,
                format!("unknown classification `{}`", decl.cls.value),
            )
        })?;
    let mut sigs = BTreeMap::new();
    for (rel, cols) in &decl.relations {
        let sig = Signature::new(
            cls.types().iter().cloned(),
            cols.iter()
                .map(|(c, s)| (c.value.clone(), s.clone()))
                .collect::<Vec<_>>(),
        )
        .map_err(|e| validation(rel.pos, e))?;
        if sigs.insert(rel.value.clone(), sig).is_some() {
            return Err(SourceError::validation(
                rel.pos,
                format!("duplicate relation `{}`", rel.value),
            ));
        }
    }
    let nodes: Vec<String> = sigs.keys().cloned().collect();
    let edges: Vec<(String, String, String)> = decl
        .arrows
        .iter()
        .map(|a| (a.name.value.clone(), a.dom.value.clone(), a.cod.value.clone()))
        .collect();
    let (rel_cat, decomposition) = FinCat::free_on_graph(nodes.clone(), edges)
        .map_err(|e| validation(decl.name.pos, e))?;

    let mut generators = Vec::new();
    let mut gen_maps: BTreeMap<String, FinMap> = BTreeMap::new();
    for arrow in &decl.arrows {
        let col_map = pairs_to_map(&arrow.col_map)?;
        gen_maps.insert(arrow.name.value.clone(), col_map.clone());
        generators.push(ArrowDecl {
            name: arrow.name.value.clone(),
            dom: arrow.dom.value.clone(),
            cod: arrow.cod.value.clone(),
            col_map,
        });
    }
    let mut sig_morphs: BTreeMap<String, FinMap> = BTreeMap::new();
    for (name, _) in rel_cat.arrows() {
        if rel_cat.is_identity(name) {
            let object = rel_cat.arrow(name).unwrap().dom.clone();
            let sig = sigs.get(&object).ok_or_else(|| {
                SourceError::unresolved(
                    decl.name.pos,
                    format!("relation `{object}` is not declared"),
                )
            })?;
            sig_morphs.insert(
                name.to_string(),
                FinMap::identity(sig.columns().map(str::to_string)),
            );
            continue;
        }
        let gens = &decomposition[name];
        let mut map = gen_maps
            .get(&gens[0])
            .cloned()
            .ok_or_else(|| {
                SourceError::unresolved(decl.name.pos, format!("unknown arrow `{}`", gens[0]))
            })?;
        for g in &gens[1..] {
            map = map
                .then(&gen_maps[g])
                .map_err(|e| validation(decl.name.pos, e))?;
        }
        sig_morphs.insert(name.to_string(), map);
    }
    let schema = DbSchema::new(rel_cat, cls.types().clone(), sigs, sig_morphs)
        .map_err(|e| validation(decl.name.pos, e))?;
    Ok(SchemaDecl {
        cls_name: decl.cls.value.clone(),
        generators,
        schema,
    })
}

fn resolve_database(ws: &Workspace, decl: &RawDatabase) -> Result<DbDecl, SourceError> {
    let schema_decl = ws.schemas.get(&decl.schema.value).ok_or_else(|| {
        SourceError::unresolved(
            decl.schema.pos,
            format!("unknown schema `{}`", decl.schema.value),
        )
    })?;
    let cls = ws
        .classifications
        .get(&decl.cls.value)
        .ok_or_else(|| {
            SourceError::unresolved(
                decl.cls.pos,
                format!("unknown classification `{}`", decl.cls.value),
            )
        })?;
    let rel_cat = schema_decl.schema.rel_cat();

    let mut keys: BTreeMap<String, BTreeSet<String>> = BTreeMap::new();
    for relation in rel_cat.objects() {
        keys.insert(relation.clone(), BTreeSet::new());
    }
    for (rel, list) in &decl.keys {
        let set = keys.get_mut(&rel.value).ok_or_else(|| {
            SourceError::unresolved(rel.pos, format!("unknown relation `{}`", rel.value))
        })?;
        for key in list {
            if !set.insert(key.value.clone()) {
                return Err(SourceError::validation(
                    key.pos,
                    format!("duplicate key `{}`", key.value),
                ));
            }
        }
    }

    let mut tuples: BTreeMap<String, BTreeMap<String, Tup>> = BTreeMap::new();
    for relation in rel_cat.objects() {
        tuples.insert(relation.clone(), BTreeMap::new());
    }
    for (rel, rows) in &decl.rows {
        let map = tuples.get_mut(&rel.value).ok_or_else(|| {
            SourceError::unresolved(rel.pos, format!("unknown relation `{}`", rel.value))
        })?;
        for row in rows {
            let tup = Tup::new(
                row.entries
                    .iter()
                    .map(|(c, v)| (c.value.clone(), v.clone()))
                    .collect::<Vec<_>>(),
            )
            .map_err(|e| validation(row.key.pos, e))?;
            if map.insert(row.key.value.clone(), tup).is_some() {
                return Err(SourceError::validation(
                    row.key.pos,
                    format!("duplicate row `{}`", row.key.value),
                ));
            }
        }
    }

    // declared key maps, then identities and functorial composites
    let (_, decomposition) = FinCat::free_on_graph(
        rel_cat.objects().iter().cloned(),
        schema_decl
            .generators
            .iter()
            .map(|a| (a.name.clone(), a.dom.clone(), a.cod.clone())),
    )
    .map_err(|e| validation(decl.name.pos, e))?;
    let mut gen_key_maps: BTreeMap<String, FinMap> = BTreeMap::new();
    for (arrow, list) in &decl.keymaps {
        if !schema_decl.generators.iter().any(|a| a.name == arrow.value) {
            return Err(SourceError::unresolved(
                arrow.pos,
                format!("unknown arrow `{}`", arrow.value),
            ));
        }
        gen_key_maps.insert(arrow.value.clone(), pairs_to_map(list)?);
    }
    let mut key_maps: BTreeMap<String, FinMap> = BTreeMap::new();
    for (name, arrow) in rel_cat.arrows() {
        if rel_cat.is_identity(name) {
            key_maps.insert(
                name.to_string(),
                FinMap::identity(keys[&arrow.dom].iter().cloned()),
            );
            continue;
        }
        let gens = &decomposition[name];
        // contravariant: the composite key map applies the last generator
        // first
        let mut map = gen_key_maps
            .get(&gens[gens.len() - 1])
            .cloned()
            .unwrap_or_default();
        for g in gens[..gens.len() - 1].iter().rev() {
            let next = gen_key_maps.get(g).cloned().unwrap_or_default();
            map = map.then(&next).map_err(|e| validation(decl.name.pos, e))?;
        }
        key_maps.insert(name.to_string(), map);
    }

    let db = Database::new(
        schema_decl.schema.clone(),
        cls.clone(),
        keys,
        key_maps,
        tuples,
    )
    .map_err(|e| validation(decl.name.pos, e))?;
    Ok(DbDecl {
        schema_name: decl.schema.value.clone(),
        cls_name: decl.cls.value.clone(),
        db,
    })
}

fn resolve_morphism(ws: &Workspace, decl: &RawMorphism) -> Result<MorphismDecl, SourceError> {
    let src = ws.tables.get(&decl.src.value).ok_or_else(|| {
        SourceError::unresolved(decl.src.pos, format!("unknown table `{}`", decl.src.value))
    })?;
    let dst = ws.tables.get(&decl.dst.value).ok_or_else(|| {
        SourceError::unresolved(decl.dst.pos, format!("unknown table `{}`", decl.dst.value))
    })?;
    let col_map = pairs_to_map(&decl.col_map)?;
    let key_map = pairs_to_map(&decl.key_map)?;
    let info = match (&decl.type_map, &decl.inst_map) {
        (None, None) => {
            if src.table.cls() != dst.table.cls() {
                return Err(SourceError::validation(
                    decl.name.pos,
                    "tables live over different classifications; give `f` and `g` explicitly",
                ));
            }
            Infomorphism::identity(src.table.cls())
        }
        (type_map, inst_map) => {
            let f = match type_map {
                Some(pairs) => pairs_to_map(pairs)?,
                None => FinMap::identity(dst.table.cls().types().iter().cloned()),
            };
            let g = match inst_map {
                Some(pairs) => pairs_to_map(pairs)?,
                None => FinMap::identity(src.table.cls().instances().iter().cloned()),
            };
            Infomorphism::new(dst.table.cls().clone(), src.table.cls().clone(), f, g)
                .map_err(|e| validation(decl.name.pos, e))?
        }
    };
    let morphism = TableMorphism::new(src.table.clone(), dst.table.clone(), col_map, info, key_map)
        .map_err(|e| validation(decl.name.pos, e))?;
    Ok(MorphismDecl {
        src_name: decl.src.value.clone(),
        dst_name: decl.dst.value.clone(),
        morphism,
    })
}
