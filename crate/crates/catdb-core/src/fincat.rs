//! Explicitly tabulated finite categories, diagrams of tables, and
//! cones/cocones.
//!
//! Categories are given by full composition tables rather than generators and
//! relations: path equality in a finitely presented category is undecidable
//! in general, and explicit tables make every law exhaustively checkable.
//! Free categories on finite acyclic graphs and preorder categories cover the
//! shapes that occur in practice.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};

use crate::cls::Classification;
use crate::error::Error;
use crate::map::FinMap;
use crate::table::{
    check_table_morphism, compose_table_morphisms, Table, TableMorphism, TableMorphismReport,
};

/// An arrow of a finite category: its endpoints. The name lives in the
/// category's arrow table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Arrow {
    pub dom: String,
    pub cod: String,
}

/// The name of the identity arrow attached to `object`.
pub fn identity_arrow_name(object: &str) -> String {
    format!("id_{object}")
}

/// An explicitly tabulated finite category.
///
/// The composition table is keyed diagrammatically: `compose[(a, b)]` is
/// "`a` then `b`", defined exactly on the composable pairs.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FinCat {
    objects: BTreeSet<String>,
    arrows: BTreeMap<String, Arrow>,
    identities: BTreeMap<String, String>,
    #[serde(serialize_with = "serialize_compose")]
    compose: BTreeMap<(String, String), String>,
}

fn serialize_compose<S: Serializer>(
    table: &BTreeMap<(String, String), String>,
    ser: S,
) -> Result<S::Ok, S::Error> {
    let mut seq = ser.serialize_seq(Some(table.len()))?;
    for ((a, b), c) in table {
        seq.serialize_element(&(a, b, c))?;
    }
    seq.end()
}

impl FinCat {
    /// Builds and fully validates a finite category:
    /// declared endpoints, identity laws, closure of composition over all
    /// composable pairs (and only those), endpoint consistency of composites,
    /// and associativity over every composable triple.
    pub fn new(
        objects: impl IntoIterator<Item = String>,
        arrows: impl IntoIterator<Item = (String, String, String)>,
        identities: impl IntoIterator<Item = (String, String)>,
        compose: impl IntoIterator<Item = ((String, String), String)>,
    ) -> Result<Self, Error> {
        let objects: BTreeSet<String> = objects.into_iter().collect();
        let mut arrow_map = BTreeMap::new();
        for (name, dom, cod) in arrows {
            if !objects.contains(&dom) {
                return Err(Error::UnknownObject(dom));
            }
            if !objects.contains(&cod) {
                return Err(Error::UnknownObject(cod));
            }
            if arrow_map
                .insert(name.clone(), Arrow { dom, cod })
                .is_some()
            {
                return Err(Error::Duplicate {
                    kind: "arrow",
                    name,
                });
            }
        }
        let identities: BTreeMap<String, String> = identities.into_iter().collect();
        let compose: BTreeMap<(String, String), String> = compose.into_iter().collect();
        let cat = FinCat {
            objects,
            arrows: arrow_map,
            identities,
            compose,
        };
        cat.validate()?;
        Ok(cat)
    }

    fn validate(&self) -> Result<(), Error> {
        for obj in &self.objects {
            let id = self.identities.get(obj).ok_or_else(|| {
                Error::InvalidCategory(format!("object `{obj}` has no identity arrow"))
            })?;
            let arrow = self.arrow(id)?;
            if arrow.dom != *obj || arrow.cod != *obj {
                return Err(Error::InvalidCategory(format!(
                    "identity `{id}` of `{obj}` is not an endomorphism of `{obj}`"
                )));
            }
        }
        for obj in self.identities.keys() {
            if !self.objects.contains(obj) {
                return Err(Error::UnknownObject(obj.clone()));
            }
        }
        // closure: compose defined exactly on composable pairs, with
        // consistent endpoints
        for (a_name, a) in &self.arrows {
            for (b_name, b) in &self.arrows {
                let key = (a_name.clone(), b_name.clone());
                match self.compose.get(&key) {
                    None if a.cod == b.dom => {
                        return Err(Error::InvalidCategory(format!(
                            "composable pair ({a_name}, {b_name}) has no composite"
                        )));
                    }
                    Some(c) if a.cod != b.dom => {
                        return Err(Error::InvalidCategory(format!(
                            "({a_name}, {b_name}) is not composable but has composite `{c}`"
                        )));
                    }
                    Some(c) => {
                        let comp = self.arrow(c)?;
                        if comp.dom != a.dom || comp.cod != b.cod {
                            return Err(Error::InvalidCategory(format!(
                                "composite `{c}` of ({a_name}, {b_name}) has wrong endpoints"
                            )));
                        }
                    }
                    None => {}
                }
            }
        }
        // identity laws
        for (name, arrow) in &self.arrows {
            let id_dom = &self.identities[&arrow.dom];
            let id_cod = &self.identities[&arrow.cod];
            let left = &self.compose[&(id_dom.clone(), name.clone())];
            if left != name {
                return Err(Error::InvalidCategory(format!(
                    "identity law fails: {id_dom};{name} = {left}"
                )));
            }
            let right = &self.compose[&(name.clone(), id_cod.clone())];
            if right != name {
                return Err(Error::InvalidCategory(format!(
                    "identity law fails: {name};{id_cod} = {right}"
                )));
            }
        }
        // associativity over all composable triples
        for (a_name, a) in &self.arrows {
            for (b_name, b) in &self.arrows {
                if a.cod != b.dom {
                    continue;
                }
                let ab = &self.compose[&(a_name.clone(), b_name.clone())];
                for (c_name, c) in &self.arrows {
                    if b.cod != c.dom {
                        continue;
                    }
                    let bc = &self.compose[&(b_name.clone(), c_name.clone())];
                    let left = &self.compose[&(ab.clone(), c_name.clone())];
                    let right = &self.compose[&(a_name.clone(), bc.clone())];
                    if left != right {
                        return Err(Error::InvalidCategory(format!(
                            "associativity fails on ({a_name}, {b_name}, {c_name}): {left} vs {right}"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// The terminal shape: one object, its identity.
    pub fn one(object: &str) -> FinCat {
        FinCat::discrete([object.to_string()])
    }

    /// A discrete category: objects with identities only.
    pub fn discrete(objects: impl IntoIterator<Item = String>) -> FinCat {
        let objects: BTreeSet<String> = objects.into_iter().collect();
        let mut arrows = BTreeMap::new();
        let mut identities = BTreeMap::new();
        let mut compose = BTreeMap::new();
        for obj in &objects {
            let id = identity_arrow_name(obj);
            arrows.insert(
                id.clone(),
                Arrow {
                    dom: obj.clone(),
                    cod: obj.clone(),
                },
            );
            compose.insert((id.clone(), id.clone()), id.clone());
            identities.insert(obj.clone(), id);
        }
        FinCat {
            objects,
            arrows,
            identities,
            compose,
        }
    }

    /// The free category on a finite acyclic graph: arrows are the nonempty
    /// edge paths plus identities. Composite paths are named by joining the
    /// generator names with `;`.
    ///
    /// Returns the category together with the generator decomposition of each
    /// non-identity arrow, which callers use to extend generator-indexed data
    /// functorially.
    pub fn free_on_graph(
        nodes: impl IntoIterator<Item = String>,
        edges: impl IntoIterator<Item = (String, String, String)>,
    ) -> Result<(FinCat, BTreeMap<String, Vec<String>>), Error> {
        let nodes: BTreeSet<String> = nodes.into_iter().collect();
        let mut edge_list: Vec<(String, String, String)> = Vec::new();
        let mut names = BTreeSet::new();
        for (name, src, dst) in edges {
            if !nodes.contains(&src) {
                return Err(Error::UnknownObject(src));
            }
            if !nodes.contains(&dst) {
                return Err(Error::UnknownObject(dst));
            }
            if !names.insert(name.clone()) {
                return Err(Error::Duplicate {
                    kind: "edge",
                    name,
                });
            }
            edge_list.push((name, src, dst));
        }
        // cycle detection via iterative DFS coloring
        let mut out: BTreeMap<&str, Vec<&(String, String, String)>> = BTreeMap::new();
        for e in &edge_list {
            out.entry(e.1.as_str()).or_default().push(e);
        }
        let mut color: BTreeMap<&str, u8> = BTreeMap::new();
        for start in &nodes {
            if color.get(start.as_str()).copied().unwrap_or(0) != 0 {
                continue;
            }
            let mut stack = vec![(start.as_str(), 0usize)];
            color.insert(start.as_str(), 1);
            while let Some((node, idx)) = stack.pop() {
                let succs = out.get(node).map(|v| v.as_slice()).unwrap_or(&[]);
                if idx < succs.len() {
                    stack.push((node, idx + 1));
                    let next = succs[idx].2.as_str();
                    match color.get(next).copied().unwrap_or(0) {
                        0 => {
                            color.insert(next, 1);
                            stack.push((next, 0));
                        }
                        1 => return Err(Error::CyclicGraph(next.to_string())),
                        _ => {}
                    }
                } else {
                    color.insert(node, 2);
                }
            }
        }
        // enumerate all nonempty paths by breadth over path length
        let mut paths: Vec<(String, String, String, Vec<String>)> = edge_list
            .iter()
            .map(|(n, s, d)| (n.clone(), s.clone(), d.clone(), vec![n.clone()]))
            .collect();
        let mut frontier = paths.clone();
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for (name, src, dst, gens) in &frontier {
                for (e_name, e_src, e_dst) in &edge_list {
                    if e_src == dst {
                        let mut gens = gens.clone();
                        gens.push(e_name.clone());
                        next.push((
                            format!("{name};{e_name}"),
                            src.clone(),
                            e_dst.clone(),
                            gens,
                        ));
                    }
                }
            }
            paths.extend(next.iter().cloned());
            frontier = next;
        }
        let mut arrows: Vec<(String, String, String)> = Vec::new();
        let mut decomposition = BTreeMap::new();
        let mut by_gens: BTreeMap<Vec<String>, String> = BTreeMap::new();
        for (name, src, dst, gens) in &paths {
            arrows.push((name.clone(), src.clone(), dst.clone()));
            decomposition.insert(name.clone(), gens.clone());
            by_gens.insert(gens.clone(), name.clone());
        }
        let mut identities = Vec::new();
        for node in &nodes {
            let id = identity_arrow_name(node);
            if names.contains(&id) {
                return Err(Error::Duplicate {
                    kind: "edge",
                    name: id,
                });
            }
            arrows.push((id.clone(), node.clone(), node.clone()));
            identities.push((node.clone(), id));
        }
        let mut compose = Vec::new();
        let endpoint = |name: &str| -> (String, String) {
            arrows
                .iter()
                .find(|(n, _, _)| n == name)
                .map(|(_, s, d)| (s.clone(), d.clone()))
                .expect("arrow exists")
        };
        let all_names: Vec<String> = arrows.iter().map(|(n, _, _)| n.clone()).collect();
        for a in &all_names {
            let (a_src, a_dst) = endpoint(a);
            for b in &all_names {
                let (b_src, b_dst) = endpoint(b);
                if a_dst != b_src {
                    continue;
                }
                let a_gens = decomposition.get(a).cloned().unwrap_or_default();
                let b_gens = decomposition.get(b).cloned().unwrap_or_default();
                let mut joined = a_gens;
                joined.extend(b_gens);
                let composite = if joined.is_empty() {
                    identity_arrow_name(&a_src)
                } else {
                    by_gens
                        .get(&joined)
                        .cloned()
                        .ok_or_else(|| Error::Internal("missing composite path".into()))?
                };
                compose.push(((a.clone(), b.clone()), composite));
                let _ = b_dst;
            }
        }
        let cat = FinCat::new(nodes.into_iter().collect::<Vec<_>>(), arrows, identities, compose)?;
        Ok((cat, decomposition))
    }

    /// The preorder category of a reflexive, transitive relation: one arrow
    /// `x → y` (named `x->y`) for every related pair `x ≤ y`.
    pub fn preorder(
        elements: impl IntoIterator<Item = String>,
        related: impl IntoIterator<Item = (String, String)>,
    ) -> Result<FinCat, Error> {
        let elements: BTreeSet<String> = elements.into_iter().collect();
        let related: BTreeSet<(String, String)> = related.into_iter().collect();
        for (x, y) in &related {
            if !elements.contains(x) {
                return Err(Error::UnknownObject(x.clone()));
            }
            if !elements.contains(y) {
                return Err(Error::UnknownObject(y.clone()));
            }
        }
        for x in &elements {
            if !related.contains(&(x.clone(), x.clone())) {
                return Err(Error::NotPreorder(
                    x.clone(),
                    "missing reflexive pair".into(),
                ));
            }
        }
        for (x, y) in &related {
            for (y2, z) in &related {
                if y == y2 && !related.contains(&(x.clone(), z.clone())) {
                    return Err(Error::NotPreorder(
                        format!("{x} .. {z}"),
                        format!("transitivity fails through {y}"),
                    ));
                }
            }
        }
        let name_of = |x: &str, y: &str| -> String {
            if x == y {
                identity_arrow_name(x)
            } else {
                format!("{x}->{y}")
            }
        };
        let mut arrows = Vec::new();
        let mut identities = Vec::new();
        for (x, y) in &related {
            arrows.push((name_of(x, y), x.clone(), y.clone()));
            if x == y {
                identities.push((x.clone(), name_of(x, y)));
            }
        }
        let mut compose = Vec::new();
        for (x, y) in &related {
            for (y2, z) in &related {
                if y == y2 {
                    compose.push(((name_of(x, y), name_of(y, z)), name_of(x, z)));
                }
            }
        }
        FinCat::new(elements.into_iter().collect::<Vec<_>>(), arrows, identities, compose)
    }

    /// The opposite category: same arrow names, endpoints swapped,
    /// composition table transposed.
    pub fn opposite(&self) -> FinCat {
        let arrows = self
            .arrows
            .iter()
            .map(|(name, a)| {
                (
                    name.clone(),
                    Arrow {
                        dom: a.cod.clone(),
                        cod: a.dom.clone(),
                    },
                )
            })
            .collect();
        let compose = self
            .compose
            .iter()
            .map(|((a, b), c)| ((b.clone(), a.clone()), c.clone()))
            .collect();
        FinCat {
            objects: self.objects.clone(),
            arrows,
            identities: self.identities.clone(),
            compose,
        }
    }

    pub fn objects(&self) -> &BTreeSet<String> {
        &self.objects
    }

    pub fn arrows(&self) -> impl Iterator<Item = (&str, &Arrow)> {
        self.arrows.iter().map(|(n, a)| (n.as_str(), a))
    }

    pub fn arrow(&self, name: &str) -> Result<&Arrow, Error> {
        self.arrows
            .get(name)
            .ok_or_else(|| Error::UnknownArrow(name.to_string()))
    }

    pub fn arrow_count(&self) -> usize {
        self.arrows.len()
    }

    pub fn identity_of(&self, object: &str) -> Result<&str, Error> {
        self.identities
            .get(object)
            .map(|s| s.as_str())
            .ok_or_else(|| Error::UnknownObject(object.to_string()))
    }

    pub fn is_identity(&self, arrow: &str) -> bool {
        self.identities.values().any(|a| a == arrow)
    }

    /// Diagrammatic composite `first; second`.
    pub fn composite(&self, first: &str, second: &str) -> Result<&str, Error> {
        self.compose
            .get(&(first.to_string(), second.to_string()))
            .map(|s| s.as_str())
            .ok_or_else(|| {
                Error::InvalidCategory(format!("({first}, {second}) is not a composable pair"))
            })
    }

    pub fn non_identity_arrows(&self) -> impl Iterator<Item = (&str, &Arrow)> {
        self.arrows
            .iter()
            .filter(|(n, _)| !self.is_identity(n))
            .map(|(n, a)| (n.as_str(), a))
    }

    pub fn composable_pairs(&self) -> impl Iterator<Item = (&str, &str, &str)> {
        self.compose.iter().map(|((a, b), c)| (a.as_str(), b.as_str(), c.as_str()))
    }
}

/// A single problem found while validating a diagram.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum DiagramIssue {
    MissingTable { object: String },
    MissingMorphism { arrow: String },
    WrongBoundary { arrow: String, detail: String },
    NotFiber { arrow: String },
    SharedClassification { object: String },
    MorphismInvalid { arrow: String, report: TableMorphismReport },
    FunctorIdentity { object: String },
    FunctorComposite { first: String, second: String },
}

impl fmt::Display for DiagramIssue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DiagramIssue::MissingTable { object } => write!(f, "no table at object `{object}`"),
            DiagramIssue::MissingMorphism { arrow } => {
                write!(f, "no morphism at arrow `{arrow}`")
            }
            DiagramIssue::WrongBoundary { arrow, detail } => {
                write!(f, "arrow `{arrow}`: {detail}")
            }
            DiagramIssue::NotFiber { arrow } => {
                write!(f, "arrow `{arrow}` does not carry the identity infomorphism")
            }
            DiagramIssue::SharedClassification { object } => {
                write!(f, "table at `{object}` lives over a different classification")
            }
            DiagramIssue::MorphismInvalid { arrow, report } => {
                write!(f, "arrow `{arrow}` is not a table morphism: {report}")
            }
            DiagramIssue::FunctorIdentity { object } => {
                write!(f, "identity arrow of `{object}` is not sent to the identity morphism")
            }
            DiagramIssue::FunctorComposite { first, second } => {
                write!(f, "functoriality fails on composite ({first}; {second})")
            }
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct DiagramReport {
    pub issues: Vec<DiagramIssue>,
}

impl DiagramReport {
    pub fn is_valid(&self) -> bool {
        self.issues.is_empty()
    }
}

impl fmt::Display for DiagramReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let items: Vec<String> = self.issues.iter().map(|v| v.to_string()).collect();
        write!(f, "{}", items.join("; "))
    }
}

/// A functorial diagram of tables over a finite shape, all tables over one
/// shared classification and every arrow carrying a fiber morphism.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TableDiagram {
    shape: FinCat,
    cls: Classification,
    tables: BTreeMap<String, Table>,
    morphisms: BTreeMap<String, TableMorphism>,
}

impl TableDiagram {
    /// Assembles and validates a diagram from tables at objects and
    /// `(column map, key map)` data at non-identity arrows. Identity arrows
    /// receive identity morphisms.
    pub fn new(
        shape: FinCat,
        cls: Classification,
        tables: BTreeMap<String, Table>,
        edge_maps: BTreeMap<String, (FinMap, FinMap)>,
    ) -> Result<Self, Error> {
        let mut issues = Vec::new();
        for object in shape.objects() {
            match tables.get(object) {
                None => issues.push(DiagramIssue::MissingTable {
                    object: object.clone(),
                }),
                Some(t) if t.cls() != &cls => issues.push(DiagramIssue::SharedClassification {
                    object: object.clone(),
                }),
                Some(_) => {}
            }
        }
        if !issues.is_empty() {
            return Err(Error::InvalidDiagram(DiagramReport { issues }));
        }
        let mut morphisms = BTreeMap::new();
        for (name, arrow) in shape.arrows() {
            if shape.is_identity(name) {
                morphisms.insert(name.to_string(), TableMorphism::identity(&tables[&arrow.dom]));
                continue;
            }
            let Some((cols, keys)) = edge_maps.get(name) else {
                issues.push(DiagramIssue::MissingMorphism {
                    arrow: name.to_string(),
                });
                continue;
            };
            let src = tables[&arrow.dom].clone();
            let dst = tables[&arrow.cod].clone();
            let report = check_table_morphism(
                &src,
                &dst,
                cols,
                &FinMap::identity(cls.types().iter().cloned()),
                &FinMap::identity(cls.instances().iter().cloned()),
                keys,
            )?;
            if !report.is_valid() {
                issues.push(DiagramIssue::MorphismInvalid {
                    arrow: name.to_string(),
                    report,
                });
                continue;
            }
            let m = TableMorphism::fiber(src, dst, cols.clone(), keys.clone())?;
            morphisms.insert(name.to_string(), m);
        }
        if !issues.is_empty() {
            return Err(Error::InvalidDiagram(DiagramReport { issues }));
        }
        let diagram = TableDiagram {
            shape,
            cls,
            tables,
            morphisms,
        };
        let report = diagram.check_functoriality()?;
        if !report.is_valid() {
            return Err(Error::InvalidDiagram(report));
        }
        Ok(diagram)
    }

    /// Wraps pre-built morphisms (totally assigned, identities included).
    pub fn from_morphisms(
        shape: FinCat,
        cls: Classification,
        tables: BTreeMap<String, Table>,
        morphisms: BTreeMap<String, TableMorphism>,
    ) -> Result<Self, Error> {
        let mut edge_maps = BTreeMap::new();
        let mut issues = Vec::new();
        for (name, arrow) in shape.arrows() {
            if shape.is_identity(name) {
                continue;
            }
            match morphisms.get(name) {
                None => issues.push(DiagramIssue::MissingMorphism {
                    arrow: name.to_string(),
                }),
                Some(m) => {
                    let src_ok = tables.get(&arrow.dom).is_some_and(|t| t == m.src());
                    let dst_ok = tables.get(&arrow.cod).is_some_and(|t| t == m.dst());
                    if !src_ok || !dst_ok {
                        issues.push(DiagramIssue::WrongBoundary {
                            arrow: name.to_string(),
                            detail: "morphism endpoints disagree with the assigned tables".into(),
                        });
                    } else if !m.is_fiber() {
                        issues.push(DiagramIssue::NotFiber {
                            arrow: name.to_string(),
                        });
                    } else {
                        edge_maps.insert(
                            name.to_string(),
                            (m.col_map().clone(), m.key_map().clone()),
                        );
                    }
                }
            }
        }
        if !issues.is_empty() {
            return Err(Error::InvalidDiagram(DiagramReport { issues }));
        }
        TableDiagram::new(shape, cls, tables, edge_maps)
    }

    /// The one-object diagram of a single table.
    pub fn single(object: &str, table: Table) -> Self {
        let shape = FinCat::one(object);
        let cls = table.cls().clone();
        let mut tables = BTreeMap::new();
        tables.insert(object.to_string(), table.clone());
        let mut morphisms = BTreeMap::new();
        morphisms.insert(
            identity_arrow_name(object),
            TableMorphism::identity(&table),
        );
        TableDiagram {
            shape,
            cls,
            tables,
            morphisms,
        }
    }

    fn check_functoriality(&self) -> Result<DiagramReport, Error> {
        let mut issues = Vec::new();
        for object in self.shape.objects() {
            let id = self.shape.identity_of(object)?;
            if self.morphisms[id] != TableMorphism::identity(&self.tables[object]) {
                issues.push(DiagramIssue::FunctorIdentity {
                    object: object.clone(),
                });
            }
        }
        for (a, b, c) in self.shape.composable_pairs() {
            let composed = compose_table_morphisms(&self.morphisms[a], &self.morphisms[b])?;
            if composed != self.morphisms[c] {
                issues.push(DiagramIssue::FunctorComposite {
                    first: a.to_string(),
                    second: b.to_string(),
                });
            }
        }
        Ok(DiagramReport { issues })
    }

    pub fn shape(&self) -> &FinCat {
        &self.shape
    }

    pub fn cls(&self) -> &Classification {
        &self.cls
    }

    pub fn table_at(&self, object: &str) -> Result<&Table, Error> {
        self.tables
            .get(object)
            .ok_or_else(|| Error::UnknownObject(object.to_string()))
    }

    pub fn morphism_at(&self, arrow: &str) -> Result<&TableMorphism, Error> {
        self.morphisms
            .get(arrow)
            .ok_or_else(|| Error::UnknownArrow(arrow.to_string()))
    }

    pub fn tables(&self) -> impl Iterator<Item = (&str, &Table)> {
        self.tables.iter().map(|(k, v)| (k.as_str(), v))
    }

    /// Base change of the whole diagram along an infomorphism whose target is
    /// this diagram's classification.
    pub fn migrate(&self, info: &Infomorphism) -> Result<TableDiagram, Error> {
        let mut tables = BTreeMap::new();
        for (object, table) in &self.tables {
            tables.insert(object.clone(), crate::table::migrate(table, info)?);
        }
        let mut edge_maps = BTreeMap::new();
        for (name, m) in &self.morphisms {
            if self.shape.is_identity(name) {
                continue;
            }
            let migrated = crate::table::migrate_morphism(m, info)?;
            edge_maps.insert(
                name.clone(),
                (migrated.col_map().clone(), migrated.key_map().clone()),
            );
        }
        TableDiagram::new(
            self.shape.clone(),
            info.source().clone(),
            tables,
            edge_maps,
        )
    }
}

use crate::cls::Infomorphism;

/// A cone over a diagram: an apex table with one leg per object.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Cone {
    pub apex: Table,
    pub legs: BTreeMap<String, TableMorphism>,
}

/// A cocone under a diagram: an apex table with one leg per object, running
/// from the diagram into the apex.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Cocone {
    pub apex: Table,
    pub legs: BTreeMap<String, TableMorphism>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum ConeIssue {
    MissingLeg { object: String },
    LegBoundary { object: String, detail: String },
    LegInvalid { object: String, report: TableMorphismReport },
    Triangle { arrow: String },
}

impl fmt::Display for ConeIssue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConeIssue::MissingLeg { object } => write!(f, "no leg at object `{object}`"),
            ConeIssue::LegBoundary { object, detail } => write!(f, "leg at `{object}`: {detail}"),
            ConeIssue::LegInvalid { object, report } => {
                write!(f, "leg at `{object}` is not a morphism: {report}")
            }
            ConeIssue::Triangle { arrow } => write!(f, "triangle at arrow `{arrow}` fails"),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct ConeReport {
    pub issues: Vec<ConeIssue>,
}

impl ConeReport {
    pub fn is_valid(&self) -> bool {
        self.issues.is_empty()
    }
}

impl fmt::Display for ConeReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let items: Vec<String> = self.issues.iter().map(|v| v.to_string()).collect();
        write!(f, "{}", items.join("; "))
    }
}

/// Checks that every leg is a valid fiber morphism `apex → table_at(j)` and
/// that every triangle `leg(j); morphism(e) = leg(j')` commutes.
pub fn check_cone(diagram: &TableDiagram, cone: &Cone) -> Result<ConeReport, Error> {
    let mut issues = Vec::new();
    for object in diagram.shape().objects() {
        let Some(leg) = cone.legs.get(object) else {
            issues.push(ConeIssue::MissingLeg {
                object: object.clone(),
            });
            continue;
        };
        if leg.src() != &cone.apex || leg.dst() != diagram.table_at(object)? {
            issues.push(ConeIssue::LegBoundary {
                object: object.clone(),
                detail: "leg endpoints must be apex → table at object".into(),
            });
            continue;
        }
        if !leg.is_fiber() {
            issues.push(ConeIssue::LegBoundary {
                object: object.clone(),
                detail: "leg must carry the identity infomorphism".into(),
            });
        }
        let report = check_table_morphism(
            leg.src(),
            leg.dst(),
            leg.col_map(),
            leg.info().type_map(),
            leg.info().inst_map(),
            leg.key_map(),
        )?;
        if !report.is_valid() {
            issues.push(ConeIssue::LegInvalid {
                object: object.clone(),
                report,
            });
        }
    }
    if issues.is_empty() {
        for (name, arrow) in diagram.shape().arrows() {
            if diagram.shape().is_identity(name) {
                continue;
            }
            let via = compose_table_morphisms(
                &cone.legs[&arrow.dom],
                diagram.morphism_at(name)?,
            )?;
            if via != cone.legs[&arrow.cod] {
                issues.push(ConeIssue::Triangle {
                    arrow: name.to_string(),
                });
            }
        }
    }
    Ok(ConeReport { issues })
}

/// Dual of [`check_cone`]: legs run `table_at(j) → apex` and triangles read
/// `morphism(e); leg(j') = leg(j)`.
pub fn check_cocone(diagram: &TableDiagram, cocone: &Cocone) -> Result<ConeReport, Error> {
    let mut issues = Vec::new();
    for object in diagram.shape().objects() {
        let Some(leg) = cocone.legs.get(object) else {
            issues.push(ConeIssue::MissingLeg {
                object: object.clone(),
            });
            continue;
        };
        if leg.src() != diagram.table_at(object)? || leg.dst() != &cocone.apex {
            issues.push(ConeIssue::LegBoundary {
                object: object.clone(),
                detail: "leg endpoints must be table at object → apex".into(),
            });
            continue;
        }
        if !leg.is_fiber() {
            issues.push(ConeIssue::LegBoundary {
                object: object.clone(),
                detail: "leg must carry the identity infomorphism".into(),
            });
        }
        let report = check_table_morphism(
            leg.src(),
            leg.dst(),
            leg.col_map(),
            leg.info().type_map(),
            leg.info().inst_map(),
            leg.key_map(),
        )?;
        if !report.is_valid() {
            issues.push(ConeIssue::LegInvalid {
                object: object.clone(),
                report,
            });
        }
    }
    if issues.is_empty() {
        for (name, arrow) in diagram.shape().arrows() {
            if diagram.shape().is_identity(name) {
                continue;
            }
            let via = compose_table_morphisms(
                diagram.morphism_at(name)?,
                &cocone.legs[&arrow.cod],
            )?;
            if via != cocone.legs[&arrow.dom] {
                issues.push(ConeIssue::Triangle {
                    arrow: name.to_string(),
                });
            }
        }
    }
    Ok(ConeReport { issues })
}
