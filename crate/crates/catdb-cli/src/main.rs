//! The batch CLI. Exit codes: 0 on success, 1 on validation failure, 2 on
//! usage or parse errors.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use catdb_cli::dsl::{ErrorKind, SourceError};
use catdb_cli::export;
use catdb_cli::selftest;
use catdb_cli::workspace::{parse_workspace, Workspace};
use catdb_core::colimits::coproduct;
use catdb_core::limits::select;
use catdb_core::map::FinMap;
use catdb_core::table::{check_table_morphism, migrate, Table};
use catdb_core::unified::{check_referential_integrity, is_unified, sketch_graph};

#[derive(Parser)]
#[command(
    name = "catdb",
    version,
    about = "Classification-based relational engine: joins as limits, unions as colimits"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse and validate a workspace, or one named object in it.
    Validate {
        /// Object name to report on; the whole workspace when omitted.
        name: Option<String>,
        /// Workspace source files.
        #[arg(long = "in", value_name = "FILE", required = true, num_args = 1..)]
        inputs: Vec<PathBuf>,
    },
    /// Compute the join of a database and export the resulting table.
    Join {
        database: String,
        #[arg(long = "in", value_name = "FILE", required = true, num_args = 1..)]
        inputs: Vec<PathBuf>,
        #[arg(long)]
        out: PathBuf,
        /// Output format: csv, json, or dsl.
        #[arg(long, default_value = "csv")]
        format: String,
    },
    /// Compute the distributed union (coproduct) of two named tables.
    Union {
        left: String,
        right: String,
        #[arg(long = "in", value_name = "FILE", required = true, num_args = 1..)]
        inputs: Vec<PathBuf>,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value = "csv")]
        format: String,
    },
    /// Transport a table along a named infomorphism.
    Migrate {
        table: String,
        infomorphism: String,
        #[arg(long = "in", value_name = "FILE", required = true, num_args = 1..)]
        inputs: Vec<PathBuf>,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value = "csv")]
        format: String,
    },
    /// Keep the rows of TABLE whose bound entries occur in REFERENCE.
    Select {
        table: String,
        reference: String,
        /// Binding `REFCOL=TABLECOL`; repeat for several columns.
        #[arg(long = "on", value_name = "REFCOL=TABLECOL", required = true, num_args = 1..)]
        on: Vec<String>,
        #[arg(long = "in", value_name = "FILE", required = true, num_args = 1..)]
        inputs: Vec<PathBuf>,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value = "csv")]
        format: String,
    },
    /// Re-check a named table morphism and print its report.
    CheckMorphism {
        name: String,
        #[arg(long = "in", value_name = "FILE", required = true, num_args = 1..)]
        inputs: Vec<PathBuf>,
    },
    /// Check referential integrity of a unified-form database.
    CheckReferentialIntegrity {
        database: String,
        #[arg(long = "in", value_name = "FILE", required = true, num_args = 1..)]
        inputs: Vec<PathBuf>,
    },
    /// Export the sketch of a unified-form database.
    Sketch {
        database: String,
        #[arg(long = "in", value_name = "FILE", required = true, num_args = 1..)]
        inputs: Vec<PathBuf>,
        #[arg(long)]
        out: PathBuf,
        /// Output format: dot or json.
        #[arg(long, default_value = "dot")]
        format: String,
    },
    /// Run the bundled randomized self-test.
    Selftest {
        /// Seed for the random test-data generation.
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Cases per check.
        #[arg(long, default_value_t = 25)]
        cases: usize,
    },
}

/// Everything that can go wrong after argument parsing, tagged with the exit
/// code it maps to.
enum CliError {
    /// Exit 1: validation failures, unresolved names, failed checks.
    Validation(String),
    /// Exit 2: unreadable input, syntax errors, bad flags.
    Usage(String),
}

impl From<SourceError> for CliError {
    fn from(e: SourceError) -> Self {
        match e.kind {
            ErrorKind::Syntax => CliError::Usage(format!("parse error: {e}")),
            _ => CliError::Validation(format!("validation error: {e}")),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Validation(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn load(inputs: &[PathBuf]) -> Result<Workspace, CliError> {
    let mut texts = Vec::new();
    for path in inputs {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
        texts.push(text);
    }
    let refs: Vec<&str> = texts.iter().map(|s| s.as_str()).collect();
    Ok(parse_workspace(&refs)?)
}

/// Writes atomically: to a temporary file in the target directory, then a
/// rename over the destination.
fn write_output(path: &Path, contents: &str) -> Result<(), CliError> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty());
    let mut tmp = tempfile::NamedTempFile::new_in(dir.unwrap_or_else(|| Path::new(".")))
        .map_err(|e| CliError::Usage(format!("cannot create temporary file: {e}")))?;
    tmp.write_all(contents.as_bytes())
        .map_err(|e| CliError::Usage(format!("cannot write output: {e}")))?;
    tmp.persist(path)
        .map_err(|e| CliError::Usage(format!("cannot persist output: {e}")))?;
    Ok(())
}

fn export_table(table: &Table, name: &str, format: &str) -> Result<String, CliError> {
    match format {
        "csv" => export::table_to_csv(table).map_err(|e| CliError::Validation(e.to_string())),
        "json" => export::to_json(table).map_err(|e| CliError::Validation(e.to_string())),
        "dsl" => {
            let mut ws = Workspace::default();
            ws.classifications
                .insert("CLS".to_string(), table.cls().clone());
            ws.tables.insert(
                name.to_string(),
                catdb_cli::workspace::TableDecl {
                    cls_name: "CLS".to_string(),
                    table: table.clone(),
                },
            );
            Ok(export::workspace_to_dsl(&ws))
        }
        other => Err(CliError::Usage(format!(
            "unsupported format `{other}` for tables (use csv, json, or dsl)"
        ))),
    }
}

fn run(command: Command) -> Result<(), CliError> {
    match command {
        Command::Validate { name, inputs } => {
            let ws = load(&inputs)?;
            match name {
                Some(name) => {
                    // summary lines are "kind name: OK"
                    let found = ws.summary_lines().into_iter().find(|l| {
                        l.strip_suffix(": OK")
                            .and_then(|prefix| prefix.split_once(' '))
                            .is_some_and(|(_, n)| n == name)
                    });
                    match found {
                        Some(line) => println!("{line}"),
                        None => {
                            return Err(CliError::Validation(format!(
                                "no object named `{name}` in the workspace"
                            )))
                        }
                    }
                }
                None => {
                    for line in ws.summary_lines() {
                        println!("{line}");
                    }
                    println!("workspace OK ({})", ws.counts());
                }
            }
            Ok(())
        }
        Command::Join {
            database,
            inputs,
            out,
            format,
        } => {
            let ws = load(&inputs)?;
            let decl = ws.databases.get(&database).ok_or_else(|| {
                CliError::Validation(format!("no database named `{database}`"))
            })?;
            let join = decl
                .db
                .join()
                .map_err(|e| CliError::Validation(e.to_string()))?;
            let text = export_table(&join.table, &format!("{database}_join"), &format)?;
            write_output(&out, &text)?;
            println!(
                "wrote join of {database} ({} rows, {} columns) to {}",
                join.table.key_count(),
                join.table.sig().len(),
                out.display()
            );
            Ok(())
        }
        Command::Union {
            left,
            right,
            inputs,
            out,
            format,
        } => {
            let ws = load(&inputs)?;
            let lt = ws
                .tables
                .get(&left)
                .ok_or_else(|| CliError::Validation(format!("no table named `{left}`")))?;
            let rt = ws
                .tables
                .get(&right)
                .ok_or_else(|| CliError::Validation(format!("no table named `{right}`")))?;
            let sum = coproduct(&lt.table, &rt.table)
                .map_err(|e| CliError::Validation(e.to_string()))?;
            let text = export_table(&sum.table, &format!("{left}_union_{right}"), &format)?;
            write_output(&out, &text)?;
            println!(
                "wrote union of {left} and {right} ({} rows, {} columns) to {}",
                sum.table.key_count(),
                sum.table.sig().len(),
                out.display()
            );
            Ok(())
        }
        Command::Migrate {
            table,
            infomorphism,
            inputs,
            out,
            format,
        } => {
            let ws = load(&inputs)?;
            let td = ws
                .tables
                .get(&table)
                .ok_or_else(|| CliError::Validation(format!("no table named `{table}`")))?;
            let info = ws.infomorphisms.get(&infomorphism).ok_or_else(|| {
                CliError::Validation(format!("no infomorphism named `{infomorphism}`"))
            })?;
            let moved = migrate(&td.table, &info.info)
                .map_err(|e| CliError::Validation(e.to_string()))?;
            let text = export_table(&moved, &format!("{table}_migrated"), &format)?;
            write_output(&out, &text)?;
            println!(
                "wrote migration of {table} along {infomorphism} ({} rows, {} columns) to {}",
                moved.key_count(),
                moved.sig().len(),
                out.display()
            );
            Ok(())
        }
        Command::Select {
            table,
            reference,
            on,
            inputs,
            out,
            format,
        } => {
            let ws = load(&inputs)?;
            let td = ws
                .tables
                .get(&table)
                .ok_or_else(|| CliError::Validation(format!("no table named `{table}`")))?;
            let rd = ws.tables.get(&reference).ok_or_else(|| {
                CliError::Validation(format!("no table named `{reference}`"))
            })?;
            let mut pairs = Vec::new();
            for spec in &on {
                let Some((ref_col, table_col)) = spec.split_once('=') else {
                    return Err(CliError::Usage(format!(
                        "--on takes REFCOL=TABLECOL, got `{spec}`"
                    )));
                };
                pairs.push((ref_col.to_string(), table_col.to_string()));
            }
            let binding =
                FinMap::new(pairs).map_err(|e| CliError::Usage(e.to_string()))?;
            let result = select(&td.table, &rd.table, &binding)
                .map_err(|e| CliError::Validation(e.to_string()))?;
            let text = export_table(&result.table, &format!("{table}_selected"), &format)?;
            write_output(&out, &text)?;
            println!(
                "wrote selection of {table} by {reference} ({} rows) to {}",
                result.table.key_count(),
                out.display()
            );
            Ok(())
        }
        Command::CheckMorphism { name, inputs } => {
            let ws = load(&inputs)?;
            let decl = ws
                .morphisms
                .get(&name)
                .ok_or_else(|| CliError::Validation(format!("no morphism named `{name}`")))?;
            let m = &decl.morphism;
            let report = check_table_morphism(
                m.src(),
                m.dst(),
                m.col_map(),
                m.info().type_map(),
                m.info().inst_map(),
                m.key_map(),
            )
            .map_err(|e| CliError::Validation(e.to_string()))?;
            if report.is_valid() {
                println!(
                    "morphism {name}: OK ({} keys x {} columns checked)",
                    m.src().key_count(),
                    m.dst().sig().len()
                );
                Ok(())
            } else {
                Err(CliError::Validation(format!("morphism {name}: {report}")))
            }
        }
        Command::CheckReferentialIntegrity { database, inputs } => {
            let ws = load(&inputs)?;
            let decl = ws.databases.get(&database).ok_or_else(|| {
                CliError::Validation(format!("no database named `{database}`"))
            })?;
            let unified = is_unified(&decl.db);
            let report = check_referential_integrity(&decl.db)
                .map_err(|e| CliError::Validation(e.to_string()))?;
            if report.is_valid() {
                println!(
                    "database {database}: referential integrity holds (unified form: {})",
                    if unified.holds() { "yes" } else { "schema only" }
                );
                Ok(())
            } else {
                Err(CliError::Validation(format!("database {database}: {report}")))
            }
        }
        Command::Sketch {
            database,
            inputs,
            out,
            format,
        } => {
            let ws = load(&inputs)?;
            let decl = ws.databases.get(&database).ok_or_else(|| {
                CliError::Validation(format!("no database named `{database}`"))
            })?;
            let graph = sketch_graph(decl.db.schema())
                .map_err(|e| CliError::Validation(e.to_string()))?;
            let text = match format.as_str() {
                "dot" => export::sketch_to_dot(&graph),
                "json" => {
                    export::to_json(&graph).map_err(|e| CliError::Validation(e.to_string()))?
                }
                other => {
                    return Err(CliError::Usage(format!(
                        "unsupported format `{other}` for sketches (use dot or json)"
                    )))
                }
            };
            write_output(&out, &text)?;
            println!(
                "wrote sketch of {database} ({} nodes, {} edges) to {}",
                graph.nodes.len(),
                graph.edges.len(),
                out.display()
            );
            Ok(())
        }
        Command::Selftest { seed, cases } => {
            let report = selftest::run(seed, cases);
            for line in &report.lines {
                println!("{line}");
            }
            if report.ok {
                println!("selftest OK (seed {seed})");
                Ok(())
            } else {
                Err(CliError::Validation(format!("selftest failed (seed {seed})")))
            }
        }
    }
}
