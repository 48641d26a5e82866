//! Canonical exporters: CSV for tables, JSON for any value, the workspace
//! format itself, and DOT for sketches. All output is deterministic byte for
//! byte: keys, columns, and declarations come out in lexicographic order.

use serde::Serialize;
use thiserror::Error;

use catdb_core::table::Table;
use catdb_core::unified::SketchGraph;

use crate::dsl::render_name;
use crate::workspace::Workspace;

#[derive(Debug, Error)]
pub enum ExportError {
    #[error("a data column is named `key`, which collides with the key column")]
    KeyColumnClash,
    #[error("unsupported format `{format}` for {what}")]
    Unsupported {
        format: String,
        what: &'static str,
    },
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

/// Renders a table as CSV: a `key` column followed by the data columns in
/// canonical order, rows sorted by key.
pub fn table_to_csv(table: &Table) -> Result<String, ExportError> {
    if table.sig().sorts().get("key").is_some() {
        return Err(ExportError::KeyColumnClash);
    }
    let mut writer = csv::Writer::from_writer(Vec::new());
    let columns: Vec<String> = table.sig().columns().map(str::to_string).collect();
    let mut header = vec!["key".to_string()];
    header.extend(columns.iter().cloned());
    writer.write_record(&header)?;
    for (key, tup) in table.rows() {
        let mut record = vec![key.to_string()];
        for col in &columns {
            record.push(tup.entry(col).unwrap_or_default().to_string());
        }
        writer.write_record(&record)?;
    }
    let bytes = writer.into_inner().expect("vec writer never fails");
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

/// Pretty JSON with a trailing newline; field order follows the domain types.
pub fn to_json<T: Serialize>(value: &T) -> Result<String, ExportError> {
    Ok(format!("{}\n", serde_json::to_string_pretty(value)?))
}

/// Renders a sketch as a DOT digraph: one node per relation symbol, one
/// labeled edge per (relation, column).
pub fn sketch_to_dot(graph: &SketchGraph) -> String {
    let mut out = String::from("digraph sketch {\n");
    for node in &graph.nodes {
        out.push_str(&format!("  \"{node}\";\n"));
    }
    for edge in &graph.edges {
        out.push_str(&format!(
            "  \"{}\" -> \"{}\" [label=\"{}\"];\n",
            edge.relation, edge.target, edge.column
        ));
    }
    out.push_str("}\n");
    out
}

fn fmt_pairs<'a>(pairs: impl Iterator<Item = (&'a str, &'a str)>, sep: &str) -> String {
    pairs
        .map(|(a, b)| format!("{}{sep}{}", render_name(a), render_name(b)))
        .collect::<Vec<_>>()
        .join(", ")
}

fn fmt_rows(rows: impl Iterator<Item = (String, String)>) -> String {
    let rendered: Vec<String> = rows
        .map(|(key, entries)| format!("    {} -> ({entries})", render_name(&key)))
        .collect();
    rendered.join(",\n")
}

fn table_body(table: &Table, indent: &str, out: &mut String) {
    if !table.sig().is_empty() {
        out.push_str(&format!(
            "{indent}cols: {};\n",
            fmt_pairs(table.sig().sorts().iter(), ": ")
        ));
    }
    if table.key_count() > 0 {
        let rows = table.rows().map(|(key, tup)| {
            (
                key.to_string(),
                fmt_pairs(tup.iter(), "="),
            )
        });
        out.push_str(&format!("{indent}rows:\n{};\n", fmt_rows(rows)));
    }
}

/// Renders a workspace in canonical form: declarations sorted by kind and
/// name, clauses and entries in lexicographic order, empty clauses omitted.
/// Parsing the output reproduces the workspace exactly.
pub fn workspace_to_dsl(ws: &Workspace) -> String {
    let mut out = String::new();
    let mut first = true;
    let mut gap = |out: &mut String| {
        if !first {
            out.push('\n');
        }
        first = false;
    };

    for (name, cls) in &ws.classifications {
        gap(&mut out);
        out.push_str(&format!("classification {} {{\n", render_name(name)));
        if !cls.types().is_empty() {
            let list: Vec<String> = cls.types().iter().map(|t| render_name(t)).collect();
            out.push_str(&format!("  types: {};\n", list.join(", ")));
        }
        if !cls.instances().is_empty() {
            let list: Vec<String> = cls.instances().iter().map(|t| render_name(t)).collect();
            out.push_str(&format!("  instances: {};\n", list.join(", ")));
        }
        if !cls.incidence().is_empty() {
            let list: Vec<String> = cls
                .incidence()
                .iter()
                .map(|(y, x)| format!("{}: {}", render_name(y), render_name(x)))
                .collect();
            out.push_str(&format!("  holds: {};\n", list.join(", ")));
        }
        out.push_str("}\n");
    }

    for (name, decl) in &ws.tables {
        gap(&mut out);
        out.push_str(&format!(
            "table {} over {} {{\n",
            render_name(name),
            render_name(&decl.cls_name)
        ));
        table_body(&decl.table, "  ", &mut out);
        out.push_str("}\n");
    }

    for (name, decl) in &ws.infomorphisms {
        gap(&mut out);
        out.push_str(&format!(
            "infomorphism {} : {} <-> {} {{\n",
            render_name(name),
            render_name(&decl.source_name),
            render_name(&decl.target_name)
        ));
        if !decl.info.type_map().is_empty() {
            out.push_str(&format!(
                "  f: {};\n",
                fmt_pairs(decl.info.type_map().iter(), " -> ")
            ));
        }
        if !decl.info.inst_map().is_empty() {
            out.push_str(&format!(
                "  g: {};\n",
                fmt_pairs(decl.info.inst_map().iter(), " -> ")
            ));
        }
        out.push_str("}\n");
    }

    for (name, decl) in &ws.schemas {
        gap(&mut out);
        out.push_str(&format!(
            "schema {} over {} {{\n",
            render_name(name),
            render_name(&decl.cls_name)
        ));
        let relations: Vec<String> = decl
            .schema
            .rel_cat()
            .objects()
            .iter()
            .map(|r| {
                let sig = decl.schema.sig_at(r).expect("declared relation");
                format!(
                    "{} ({})",
                    render_name(r),
                    fmt_pairs(sig.sorts().iter(), ": ")
                )
            })
            .collect();
        out.push_str(&format!("  relations {};\n", relations.join(", ")));
        let mut generators = decl.generators.clone();
        generators.sort_by(|a, b| a.name.cmp(&b.name));
        for arrow in &generators {
            out.push_str(&format!(
                "  arrows {}: {} -> {} {{ {} }};\n",
                render_name(&arrow.name),
                render_name(&arrow.dom),
                render_name(&arrow.cod),
                fmt_pairs(arrow.col_map.iter(), " -> ")
            ));
        }
        out.push_str("}\n");
    }

    for (name, decl) in &ws.databases {
        gap(&mut out);
        out.push_str(&format!(
            "database {} over {}, {} {{\n",
            render_name(name),
            render_name(&decl.schema_name),
            render_name(&decl.cls_name)
        ));
        for relation in decl.db.relations() {
            let keys = decl.db.keys_at(relation).expect("declared relation");
            if keys.is_empty() {
                continue;
            }
            let list: Vec<String> = keys.iter().map(|k| render_name(k)).collect();
            out.push_str(&format!(
                "  keys {}: {};\n",
                render_name(relation),
                list.join(", ")
            ));
        }
        let schema_decl = ws.schemas.get(&decl.schema_name);
        if let Some(schema_decl) = schema_decl {
            let mut generators = schema_decl.generators.clone();
            generators.sort_by(|a, b| a.name.cmp(&b.name));
            for arrow in &generators {
                let map = decl.db.key_map_at(&arrow.name).expect("declared arrow");
                if map.is_empty() {
                    continue;
                }
                out.push_str(&format!(
                    "  keymap {}: {};\n",
                    render_name(&arrow.name),
                    fmt_pairs(map.iter(), " -> ")
                ));
            }
        }
        for relation in decl.db.relations() {
            let table = decl.db.table_at(relation).expect("declared relation");
            if table.key_count() == 0 {
                continue;
            }
            let rows = table
                .rows()
                .map(|(key, tup)| (key.to_string(), fmt_pairs(tup.iter(), "=")));
            out.push_str(&format!(
                "  rows {}:\n{};\n",
                render_name(relation),
                fmt_rows(rows)
            ));
        }
        out.push_str("}\n");
    }

    for (name, decl) in &ws.morphisms {
        gap(&mut out);
        out.push_str(&format!(
            "morphism {} : {} -> {} {{\n",
            render_name(name),
            render_name(&decl.src_name),
            render_name(&decl.dst_name)
        ));
        if !decl.morphism.col_map().is_empty() {
            out.push_str(&format!(
                "  h: {};\n",
                fmt_pairs(decl.morphism.col_map().iter(), " -> ")
            ));
        }
        if !decl.morphism.key_map().is_empty() {
            out.push_str(&format!(
                "  k: {};\n",
                fmt_pairs(decl.morphism.key_map().iter(), " -> ")
            ));
        }
        if !decl.morphism.info().type_map().is_empty() {
            out.push_str(&format!(
                "  f: {};\n",
                fmt_pairs(decl.morphism.info().type_map().iter(), " -> ")
            ));
        }
        if !decl.morphism.info().inst_map().is_empty() {
            out.push_str(&format!(
                "  g: {};\n",
                fmt_pairs(decl.morphism.info().inst_map().iter(), " -> ")
            ));
        }
        out.push_str("}\n");
    }
    out
}
