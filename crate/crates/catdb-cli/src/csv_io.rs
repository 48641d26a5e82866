//! CSV ingestion against a declared signature and classification.
//!
//! The classification is the single source of truth for the instance
//! universe: a cell holding an undeclared token is an error, never a silent
//! addition.

use std::io::Read;
use std::path::Path;

use thiserror::Error;

use catdb_core::cls::Classification;
use catdb_core::error::Error as CoreError;
use catdb_core::sig::{Signature, Tup};
use catdb_core::table::Table;

#[derive(Debug, Error)]
pub enum CsvError {
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("missing column `{0}` in the header")]
    MissingColumn(String),
    #[error("unexpected column `{0}` in the header")]
    UnexpectedColumn(String),
    #[error("row {row}: cell ({column}) holds `{value}`, which is not a declared instance")]
    UnknownInstance {
        row: usize,
        column: String,
        value: String,
    },
    #[error(transparent)]
    Core(#[from] CoreError),
}

/// Loads a table from CSV text. The header must name `key_column` and every
/// signature column, nothing else; keys come from the key column and the
/// result is validated like any other table.
pub fn load_csv_reader<R: Read>(
    reader: R,
    sig: &Signature,
    cls: &Classification,
    key_column: &str,
) -> Result<Table, CsvError> {
    let mut rdr = csv::ReaderBuilder::new().from_reader(reader);
    let headers: Vec<String> = rdr.headers()?.iter().map(str::to_string).collect();
    if !headers.iter().any(|h| h == key_column) {
        return Err(CsvError::MissingColumn(key_column.to_string()));
    }
    for col in sig.columns() {
        if !headers.iter().any(|h| h == col) {
            return Err(CsvError::MissingColumn(col.to_string()));
        }
    }
    for header in &headers {
        if header != key_column && sig.sorts().get(header).is_none() {
            return Err(CsvError::UnexpectedColumn(header.clone()));
        }
    }
    let key_idx = headers.iter().position(|h| h == key_column).unwrap();
    let mut rows = Vec::new();
    for (idx, record) in rdr.records().enumerate() {
        let record = record?;
        let key = record.get(key_idx).unwrap_or_default().to_string();
        let mut entries = Vec::new();
        for (pos, header) in headers.iter().enumerate() {
            if pos == key_idx {
                continue;
            }
            let value = record.get(pos).unwrap_or_default().to_string();
            if !cls.instances().contains(&value) {
                return Err(CsvError::UnknownInstance {
                    row: idx + 2,
                    column: header.clone(),
                    value,
                });
            }
            entries.push((header.clone(), value));
        }
        rows.push((key, Tup::new(entries)?));
    }
    Ok(Table::new(sig.clone(), cls.clone(), rows)?)
}

pub fn load_csv_path(
    path: &Path,
    sig: &Signature,
    cls: &Classification,
    key_column: &str,
) -> Result<Table, CsvError> {
    let file = std::fs::File::open(path)?;
    load_csv_reader(file, sig, cls, key_column)
}
