//! Seeded random generators for classifications, tables, diagrams,
//! databases, cones, cocones, infomorphisms, and table morphisms.
//!
//! Everything is driven by a ChaCha stream cipher, so a seed pins the whole
//! test-data population. Structured values (diagrams, morphisms, cones) are
//! generated *valid by construction*: target tables are forced from source
//! rows through the candidate maps, keyed by content so that independently
//! forced rows can never conflict.

use std::collections::{BTreeMap, BTreeSet};

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use catdb_core::cls::{Classification, Infomorphism};
use catdb_core::colimits::ColimitResult;
use catdb_core::database::Database;
use catdb_core::fincat::{Cocone, Cone, FinCat, TableDiagram};
use catdb_core::limits::LimitResult;
use catdb_core::map::FinMap;
use catdb_core::sig::{Signature, Tup};
use catdb_core::table::{Table, TableMorphism};

/// A deterministic generator of desk-scale test data.
pub struct Gen {
    rng: ChaCha8Rng,
}

impl Gen {
    pub fn new(seed: u64) -> Self {
        Gen {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    fn upto(&mut self, n: usize) -> usize {
        self.rng.random_range(0..n)
    }

    fn between(&mut self, lo: usize, hi: usize) -> usize {
        self.rng.random_range(lo..=hi)
    }

    fn flip(&mut self, p: f64) -> bool {
        self.rng.random_bool(p)
    }

    fn pick<'a, T>(&mut self, items: &'a [T]) -> &'a T {
        &items[self.upto(items.len())]
    }

    /// A random classification with at most `max_types` types and
    /// `max_instances` instances.
    pub fn classification(&mut self, max_types: usize, max_instances: usize) -> Classification {
        let n_types = self.between(1, max_types);
        let n_insts = self.between(1, max_instances);
        let types: Vec<String> = (0..n_types).map(|i| format!("T{i}")).collect();
        let instances: Vec<String> = (0..n_insts).map(|i| format!("y{i}")).collect();
        let mut incidence = Vec::new();
        for y in &instances {
            for x in &types {
                if self.flip(0.6) {
                    incidence.push((y.clone(), x.clone()));
                }
            }
        }
        Classification::new(types, instances, incidence).expect("generated names are unique")
    }

    fn inhabited_sorts(cls: &Classification) -> Vec<String> {
        cls.types()
            .iter()
            .filter(|x| !cls.extent(x).unwrap().is_empty())
            .cloned()
            .collect()
    }

    /// A random table over `cls` with at most `max_cols` columns and
    /// `max_keys` keys. Column sorts are drawn from types with nonempty
    /// extents so rows always classify.
    pub fn table(&mut self, cls: &Classification, max_cols: usize, max_keys: usize) -> Table {
        let sorts = Self::inhabited_sorts(cls);
        let n_cols = if sorts.is_empty() {
            0
        } else {
            self.between(0, max_cols)
        };
        let cols: Vec<(String, String)> = (0..n_cols)
            .map(|i| (format!("c{i}"), self.pick(&sorts).clone()))
            .collect();
        let sig = Signature::new(cls.types().iter().cloned(), cols.clone())
            .expect("sorts come from the universe");
        let n_keys = self.between(0, max_keys);
        let mut rows = Vec::new();
        for k in 0..n_keys {
            let mut entries = Vec::new();
            for (col, sort) in &cols {
                let extent: Vec<String> = cls.extent(sort).unwrap().into_iter().collect();
                entries.push((col.clone(), self.pick(&extent).clone()));
            }
            rows.push((format!("k{k}"), Tup::new(entries).unwrap()));
        }
        Table::new(sig, cls.clone(), rows).expect("generated rows classify")
    }

    /// A random diagram of tables: a free category on a small acyclic graph,
    /// with every table holding at most `max_keys` keys and `max_cols`
    /// columns.
    pub fn diagram(&mut self, max_cols: usize, max_keys: usize) -> TableDiagram {
        loop {
            if let Some(d) = self.try_diagram(max_cols, max_keys) {
                return d;
            }
        }
    }

    fn try_diagram(&mut self, max_cols: usize, max_keys: usize) -> Option<TableDiagram> {
        let cls = self.classification(4, 6);
        let n_objects = self.between(1, 4);
        let objects: Vec<String> = (0..n_objects).map(|i| format!("N{i}")).collect();
        let mut edges = Vec::new();
        for i in 0..n_objects {
            for j in (i + 1)..n_objects {
                if edges.len() < 4 && self.flip(0.4) {
                    edges.push((
                        format!("e{}", edges.len()),
                        objects[i].clone(),
                        objects[j].clone(),
                    ));
                }
            }
        }
        let (shape, decomposition) =
            FinCat::free_on_graph(objects.iter().cloned(), edges.clone()).ok()?;

        // build tables in index order; edges only run forward
        let mut tables: BTreeMap<String, Table> = BTreeMap::new();
        let mut edge_maps: BTreeMap<String, (FinMap, FinMap)> = BTreeMap::new();
        for (idx, object) in objects.iter().enumerate() {
            let incoming: Vec<&(String, String, String)> = edges
                .iter()
                .filter(|(_, _, dst)| dst == object)
                .collect();
            if incoming.is_empty() {
                tables.insert(object.clone(), self.table(&cls, max_cols, max_keys));
                continue;
            }
            // candidate sorts must occur in every source table
            let mut sort_candidates: Option<BTreeSet<String>> = None;
            for (_, src, _) in &incoming {
                let present: BTreeSet<String> =
                    tables[src].sig().sorts().iter().map(|(_, s)| s.to_string()).collect();
                sort_candidates = Some(match sort_candidates {
                    None => present,
                    Some(acc) => acc.intersection(&present).cloned().collect(),
                });
            }
            let sort_candidates: Vec<String> =
                sort_candidates.unwrap_or_default().into_iter().collect();
            let n_cols = if sort_candidates.is_empty() {
                0
            } else {
                self.between(0, max_cols)
            };
            let cols: Vec<(String, String)> = (0..n_cols)
                .map(|i| (format!("c{i}"), self.pick(&sort_candidates).clone()))
                .collect();
            let sig = Signature::new(cls.types().iter().cloned(), cols.clone()).unwrap();
            // per incoming edge, map each target column to a same-sorted
            // source column
            let mut per_edge_cols: BTreeMap<String, FinMap> = BTreeMap::new();
            for (name, src, _) in &incoming {
                let mut pairs = Vec::new();
                for (col, sort) in &cols {
                    let matching: Vec<String> = tables[src]
                        .sig()
                        .sorts()
                        .iter()
                        .filter(|(_, s)| *s == sort)
                        .map(|(c, _)| c.to_string())
                        .collect();
                    pairs.push((col.clone(), self.pick(&matching).clone()));
                }
                per_edge_cols.insert(name.clone(), FinMap::new(pairs).unwrap());
            }
            // force target rows from each source, keyed by content
            let mut rows: BTreeMap<String, Tup> = BTreeMap::new();
            let mut per_edge_keys: BTreeMap<String, FinMap> = BTreeMap::new();
            for (name, src, _) in &incoming {
                let col_map = &per_edge_cols[name];
                let mut key_pairs = Vec::new();
                for (key, tup) in tables[src].rows() {
                    let mut entries = Vec::new();
                    let mut rendered = Vec::new();
                    for (col, _) in &cols {
                        let value = tup.entry(col_map.apply(col).unwrap()).unwrap();
                        entries.push((col.clone(), value.to_string()));
                        rendered.push(value.to_string());
                    }
                    let forced_key = format!("t⟨{}⟩", rendered.join(","));
                    rows.entry(forced_key.clone())
                        .or_insert(Tup::new(entries).unwrap());
                    key_pairs.push((key.to_string(), forced_key));
                }
                per_edge_keys.insert(name.clone(), FinMap::new(key_pairs).unwrap());
            }
            // occasionally a free extra row
            if self.flip(0.3) && !cols.is_empty() {
                let mut entries = Vec::new();
                for (col, sort) in &cols {
                    let extent: Vec<String> = cls.extent(sort).unwrap().into_iter().collect();
                    entries.push((col.clone(), self.pick(&extent).clone()));
                }
                rows.entry("x0".to_string())
                    .or_insert(Tup::new(entries).unwrap());
            }
            if rows.len() > max_keys {
                return None;
            }
            let table = Table::new(sig, cls.clone(), rows.into_iter().collect::<Vec<_>>())
                .expect("forced rows classify");
            tables.insert(object.clone(), table);
            for (name, _, _) in &incoming {
                edge_maps.insert(
                    name.clone(),
                    (
                        per_edge_cols[name].clone(),
                        per_edge_keys[name].clone(),
                    ),
                );
            }
            let _ = idx;
        }
        // extend generator data to composite arrows functorially
        for (arrow, gens) in &decomposition {
            if gens.len() < 2 {
                continue;
            }
            let mut key_map = edge_maps[&gens[0]].1.clone();
            for g in &gens[1..] {
                key_map = key_map.then(&edge_maps[g].1).unwrap();
            }
            let mut col_map = edge_maps[gens.last().unwrap()].0.clone();
            for g in gens[..gens.len() - 1].iter().rev() {
                col_map = col_map.then(&edge_maps[g].0).unwrap();
            }
            edge_maps.insert(arrow.clone(), (col_map, key_map));
        }
        TableDiagram::new(shape, cls, tables, edge_maps).ok()
    }

    /// A random database, generated as a diagram and wrapped over the
    /// opposite shape.
    pub fn database(&mut self, max_cols: usize, max_keys: usize) -> Database {
        loop {
            let diagram = self.diagram(max_cols, max_keys);
            if let Ok(db) = Database::from_diagram(&diagram) {
                return db;
            }
        }
    }

    /// A random cone over `diagram`: its apex relabels a handful of limit
    /// rows (possibly with repetition) and may carry one extra free column.
    pub fn cone(&mut self, diagram: &TableDiagram, lim: &LimitResult) -> Cone {
        let lim_keys: Vec<String> = lim.table.keys().into_iter().collect();
        let lim_cols: Vec<String> = lim.table.sig().columns().map(str::to_string).collect();
        let n_keys = if lim_keys.is_empty() {
            0
        } else {
            self.between(1, 3)
        };
        let chosen: Vec<(String, String)> = (0..n_keys)
            .map(|i| (format!("a{i}"), self.pick(&lim_keys).clone()))
            .collect();
        let rename = FinMap::new(
            lim_cols
                .iter()
                .enumerate()
                .map(|(i, c)| (c.clone(), format!("p{i}")))
                .collect::<Vec<_>>(),
        )
        .unwrap();
        let mut cols: Vec<(String, String)> = lim_cols
            .iter()
            .map(|c| {
                (
                    rename.get(c).unwrap().to_string(),
                    lim.table.sig().sort_of(c).unwrap().to_string(),
                )
            })
            .collect();
        let inhabited = Self::inhabited_sorts(diagram.cls());
        let extra = if self.flip(0.4) && !inhabited.is_empty() {
            let sort = self.pick(&inhabited).clone();
            cols.push(("q0".to_string(), sort.clone()));
            Some(sort)
        } else {
            None
        };
        let sig = Signature::new(diagram.cls().types().iter().cloned(), cols).unwrap();
        let mut rows = Vec::new();
        for (apex_key, lim_key) in &chosen {
            let mut entries: Vec<(String, String)> = lim
                .table
                .row(lim_key)
                .unwrap()
                .iter()
                .map(|(c, v)| (rename.get(c).unwrap().to_string(), v.to_string()))
                .collect();
            if let Some(sort) = &extra {
                let extent: Vec<String> =
                    diagram.cls().extent(sort).unwrap().into_iter().collect();
                entries.push(("q0".to_string(), self.pick(&extent).clone()));
            }
            rows.push((apex_key.clone(), Tup::new(entries).unwrap()));
        }
        let apex = Table::new(sig, diagram.cls().clone(), rows).expect("copied rows classify");
        let mut legs = BTreeMap::new();
        for object in diagram.shape().objects() {
            let projection = &lim.projections[object];
            let col_pairs: Vec<(String, String)> = projection
                .col_map()
                .iter()
                .map(|(i, class)| (i.to_string(), rename.get(class).unwrap().to_string()))
                .collect();
            let key_pairs: Vec<(String, String)> = chosen
                .iter()
                .map(|(apex_key, lim_key)| {
                    (
                        apex_key.clone(),
                        projection.key_map().get(lim_key).unwrap().to_string(),
                    )
                })
                .collect();
            legs.insert(
                object.clone(),
                TableMorphism::fiber(
                    apex.clone(),
                    diagram.table_at(object).unwrap().clone(),
                    FinMap::new(col_pairs).unwrap(),
                    FinMap::new(key_pairs).unwrap(),
                )
                .expect("relabelled projection stays a morphism"),
            );
        }
        Cone { apex, legs }
    }

    /// A random cocone under `diagram`: its apex relabels the colimit and may
    /// carry extra unreached rows.
    pub fn cocone(&mut self, diagram: &TableDiagram, colim: &ColimitResult) -> Cocone {
        let colim_cols: Vec<String> = colim.table.sig().columns().map(str::to_string).collect();
        let col_rename = FinMap::new(
            colim_cols
                .iter()
                .enumerate()
                .map(|(i, c)| (c.clone(), format!("u{i}")))
                .collect::<Vec<_>>(),
        )
        .unwrap();
        let key_rename = FinMap::new(
            colim
                .table
                .keys()
                .into_iter()
                .enumerate()
                .map(|(i, k)| (k, format!("z{i}")))
                .collect::<Vec<_>>(),
        )
        .unwrap();
        let cols: Vec<(String, String)> = colim_cols
            .iter()
            .map(|c| {
                (
                    col_rename.get(c).unwrap().to_string(),
                    colim.table.sig().sort_of(c).unwrap().to_string(),
                )
            })
            .collect();
        let sig = Signature::new(diagram.cls().types().iter().cloned(), cols.clone()).unwrap();
        let mut rows: Vec<(String, Tup)> = colim
            .table
            .rows()
            .map(|(k, tup)| {
                (
                    key_rename.get(k).unwrap().to_string(),
                    Tup::new(
                        tup.iter()
                            .map(|(c, v)| {
                                (col_rename.get(c).unwrap().to_string(), v.to_string())
                            })
                            .collect::<Vec<_>>(),
                    )
                    .unwrap(),
                )
            })
            .collect();
        let every_sort_inhabited = cols
            .iter()
            .all(|(_, sort)| !diagram.cls().extent(sort).unwrap().is_empty());
        if self.flip(0.4) && every_sort_inhabited {
            let extras = self.between(1, 2);
            for i in 0..extras {
                let mut entries = Vec::new();
                for (col, sort) in &cols {
                    let extent: Vec<String> =
                        diagram.cls().extent(sort).unwrap().into_iter().collect();
                    entries.push((col.clone(), self.pick(&extent).clone()));
                }
                rows.push((format!("w{i}"), Tup::new(entries).unwrap()));
            }
        }
        let apex = Table::new(sig, diagram.cls().clone(), rows).expect("copied rows classify");
        let mut legs = BTreeMap::new();
        for object in diagram.shape().objects() {
            let injection = &colim.injections[object];
            let col_pairs: Vec<(String, String)> = colim_cols
                .iter()
                .map(|family| {
                    (
                        col_rename.get(family).unwrap().to_string(),
                        injection.col_map().get(family).unwrap().to_string(),
                    )
                })
                .collect();
            let key_pairs: Vec<(String, String)> = injection
                .key_map()
                .iter()
                .map(|(k, class)| (k.to_string(), key_rename.get(class).unwrap().to_string()))
                .collect();
            legs.insert(
                object.clone(),
                TableMorphism::fiber(
                    diagram.table_at(object).unwrap().clone(),
                    apex.clone(),
                    FinMap::new(col_pairs).unwrap(),
                    FinMap::new(key_pairs).unwrap(),
                )
                .expect("relabelled injection stays a morphism"),
            );
        }
        Cocone { apex, legs }
    }

    /// A random valid infomorphism into `target`: fresh source types map
    /// anywhere, the instance map is a tagged copy, and the source incidence
    /// is induced so the biconditional holds; extra source instances get
    /// free incidence.
    pub fn infomorphism_from(&mut self, target: &Classification) -> Infomorphism {
        let target_types: Vec<String> = target.types().iter().cloned().collect();
        let n_types = if target_types.is_empty() {
            0
        } else {
            self.between(1, 3)
        };
        let src_types: Vec<String> = (0..n_types).map(|i| format!("P{i}")).collect();
        let type_pairs: Vec<(String, String)> = src_types
            .iter()
            .map(|x2| (x2.clone(), self.pick(&target_types).clone()))
            .collect();
        let type_map = FinMap::new(type_pairs.clone()).unwrap();

        let mut src_instances: Vec<String> = target
            .instances()
            .iter()
            .map(|y| format!("c_{y}"))
            .collect();
        let inst_map = FinMap::tabulate(
            target.instances().iter().map(|s| s.as_str()),
            |y| format!("c_{y}"),
        );
        let n_extra = self.between(0, 2);
        for i in 0..n_extra {
            src_instances.push(format!("q{i}"));
        }
        let mut incidence = Vec::new();
        for y in target.instances() {
            for (x2, fx2) in &type_pairs {
                if target.holds(y, fx2) {
                    incidence.push((format!("c_{y}"), x2.clone()));
                }
            }
        }
        for i in 0..n_extra {
            for x2 in &src_types {
                if self.flip(0.5) {
                    incidence.push((format!("q{i}"), x2.clone()));
                }
            }
        }
        let source = Classification::new(src_types, src_instances, incidence)
            .expect("generated names are unique");
        Infomorphism::new(source, target.clone(), type_map, inst_map)
            .expect("induced incidence satisfies the biconditional")
    }

    /// A random table morphism out of `table`, over a freshly generated
    /// infomorphism. The target table is forced from the source rows, keyed
    /// by content, with occasionally a duplicated row under a fresh key.
    pub fn table_morphism_from(&mut self, table: &Table) -> TableMorphism {
        let info = self.infomorphism_from(table.cls());
        let src_universe = info.source().types().clone();
        // candidate target columns: source types whose image sort appears in
        // the table
        let mut candidates: Vec<(String, String)> = Vec::new();
        for x2 in &src_universe {
            let fx2 = info.type_map().apply(x2).unwrap();
            for (i1, s1) in table.sig().sorts().iter() {
                if s1 == fx2 {
                    candidates.push((x2.clone(), i1.to_string()));
                }
            }
        }
        let n_cols = if candidates.is_empty() {
            0
        } else {
            self.between(0, 3)
        };
        let mut sig_pairs = Vec::new();
        let mut col_pairs = Vec::new();
        for i in 0..n_cols {
            let (x2, i1) = self.pick(&candidates).clone();
            sig_pairs.push((format!("m{i}"), x2));
            col_pairs.push((format!("m{i}"), i1));
        }
        let sig = Signature::new(src_universe.iter().cloned(), sig_pairs.clone()).unwrap();
        let col_map = FinMap::new(col_pairs).unwrap();

        let mut rows: BTreeMap<String, Tup> = BTreeMap::new();
        let mut key_pairs = Vec::new();
        for (key, tup) in table.rows() {
            let mut entries = Vec::new();
            let mut rendered = Vec::new();
            for (col, _) in &sig_pairs {
                let value = info
                    .inst_map()
                    .apply(tup.entry(col_map.apply(col).unwrap()).unwrap())
                    .unwrap();
                entries.push((col.clone(), value.to_string()));
                rendered.push(value.to_string());
            }
            let forced = format!("t⟨{}⟩", rendered.join(","));
            rows.entry(forced.clone()).or_insert(Tup::new(entries).unwrap());
            key_pairs.push((key.to_string(), forced));
        }
        if self.flip(0.3) {
            if let Some((_, tup)) = rows.iter().next() {
                let tup = tup.clone();
                rows.insert("x0".to_string(), tup);
            }
        }
        let dst = Table::new(
            sig,
            info.source().clone(),
            rows.into_iter().collect::<Vec<_>>(),
        )
        .expect("forced rows classify");
        TableMorphism::new(
            table.clone(),
            dst,
            col_map,
            info,
            FinMap::new(key_pairs).unwrap(),
        )
        .expect("forced construction satisfies the morphism condition")
    }
}
