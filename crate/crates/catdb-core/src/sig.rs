//! Signatures, tuples, and their transport along maps.

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;

use crate::cls::Classification;
use crate::error::Error;
use crate::map::FinMap;

/// A finite signature: a set of column names with a sort map into a universe
/// of type names.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Signature {
    universe: BTreeSet<String>,
    sorts: FinMap,
}

impl Signature {
    /// Builds a signature over `universe` from `(column, sort)` pairs.
    pub fn new<U, P, K, V>(universe: U, sorts: P) -> Result<Self, Error>
    where
        U: IntoIterator,
        U::Item: Into<String>,
        P: IntoIterator<Item = (K, V)>,
        K: Into<String>,
        V: Into<String>,
    {
        let universe: BTreeSet<String> = universe.into_iter().map(Into::into).collect();
        let sorts = FinMap::new(sorts)?;
        for (col, sort) in sorts.iter() {
            if !universe.contains(sort) {
                return Err(Error::OutsideCodomain {
                    element: col.to_string(),
                    value: sort.to_string(),
                });
            }
        }
        Ok(Signature { universe, sorts })
    }

    /// The empty signature over `universe`.
    pub fn empty<U>(universe: U) -> Self
    where
        U: IntoIterator,
        U::Item: Into<String>,
    {
        Signature {
            universe: universe.into_iter().map(Into::into).collect(),
            sorts: FinMap::default(),
        }
    }

    pub fn universe(&self) -> &BTreeSet<String> {
        &self.universe
    }

    pub fn arity(&self) -> BTreeSet<String> {
        self.sorts.domain()
    }

    pub fn columns(&self) -> impl Iterator<Item = &str> {
        self.sorts.iter().map(|(c, _)| c)
    }

    pub fn sorts(&self) -> &FinMap {
        &self.sorts
    }

    pub fn sort_of(&self, column: &str) -> Result<&str, Error> {
        self.sorts
            .get(column)
            .ok_or_else(|| Error::UnknownColumn(column.to_string()))
    }

    pub fn len(&self) -> usize {
        self.sorts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sorts.is_empty()
    }
}

/// A tuple: a total assignment of instance tokens to an index set.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Tup {
    entries: FinMap,
}

impl Tup {
    pub fn new<P, K, V>(entries: P) -> Result<Self, Error>
    where
        P: IntoIterator<Item = (K, V)>,
        K: Into<String>,
        V: Into<String>,
    {
        Ok(Tup {
            entries: FinMap::new(entries)?,
        })
    }

    pub fn empty() -> Self {
        Tup::default()
    }

    pub fn arity(&self) -> BTreeSet<String> {
        self.entries.domain()
    }

    pub fn entry(&self, index: &str) -> Result<&str, Error> {
        self.entries
            .get(index)
            .ok_or_else(|| Error::UnknownColumn(index.to_string()))
    }

    pub fn get(&self, index: &str) -> Option<&str> {
        self.entries.get(index)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &str)> {
        self.entries.iter()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Pointwise classification of a tuple by a signature: same arity, and every
/// entry falls under its column's sort.
pub fn classify_tuple(e: &Classification, sig: &Signature, tup: &Tup) -> bool {
    if sig.arity() != tup.arity() {
        return false;
    }
    sig.sorts()
        .iter()
        .all(|(col, sort)| tup.get(col).is_some_and(|y| e.holds(y, sort)))
}

/// Pushes a signature forward along a type map: same arity, sorts composed
/// with `type_map`. `target_universe` is the universe of the result.
pub fn sigma_f(
    sig: &Signature,
    type_map: &FinMap,
    target_universe: &BTreeSet<String>,
) -> Result<Signature, Error> {
    type_map.check_total(sig.universe(), target_universe)?;
    let sorts = sig.sorts().then(type_map)?;
    Signature::new(
        target_universe.iter().cloned(),
        sorts.iter().map(|(c, s)| (c.to_string(), s.to_string())),
    )
}

/// The column name used for the pulled-back column `(column, sort)`.
pub fn pulled_column_name(column: &str, sort: &str) -> String {
    format!("{column}@{sort}")
}

/// Pulls a signature over the target universe back along `type_map`.
///
/// The result has one column `"i@x"` for every pair with
/// `sig.sort_of(i) = type_map(x)`, sorted at `x`.
pub fn f_star(
    sig: &Signature,
    type_map: &FinMap,
    source_universe: &BTreeSet<String>,
) -> Result<Signature, Error> {
    type_map.check_total(source_universe, sig.universe())?;
    let mut cols = Vec::new();
    for (i, s) in sig.sorts().iter() {
        for x in source_universe {
            if type_map.apply(x)? == s {
                cols.push((pulled_column_name(i, x), x.clone()));
            }
        }
    }
    Signature::new(source_universe.iter().cloned(), cols)
}

/// One sort mismatch in a signature morphism.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SortViolation {
    pub column: String,
    /// `type_map(src sort)`, what the target sort should have been.
    pub expected: String,
    /// The actual sort of the image column.
    pub actual: String,
}

impl fmt::Display for SortViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "column {}: expected sort {}, found {}",
            self.column, self.expected, self.actual
        )
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct SignatureMorphismReport {
    pub violations: Vec<SortViolation>,
}

impl SignatureMorphismReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for SignatureMorphismReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            return write!(f, "valid");
        }
        let items: Vec<String> = self.violations.iter().map(|v| v.to_string()).collect();
        write!(f, "{}", items.join("; "))
    }
}

/// Checks the sort condition `dst.sort(col_map(i)) = type_map(src.sort(i))`
/// for a column map `col_map : src arity → dst arity`.
pub fn check_signature_morphism(
    col_map: &FinMap,
    src: &Signature,
    dst: &Signature,
    type_map: &FinMap,
) -> Result<SignatureMorphismReport, Error> {
    col_map.check_total(&src.arity(), &dst.arity())?;
    type_map.check_total(src.universe(), dst.universe())?;
    let mut violations = Vec::new();
    for (i, s) in src.sorts().iter() {
        let image = col_map.apply(i)?;
        let expected = type_map.apply(s)?;
        let actual = dst.sort_of(image)?;
        if actual != expected {
            violations.push(SortViolation {
                column: i.to_string(),
                expected: expected.to_string(),
                actual: actual.to_string(),
            });
        }
    }
    Ok(SignatureMorphismReport { violations })
}

/// Transports a tuple along a column map and an instance map:
/// `result(i) = inst_map(tup(col_map(i)))`, with arity the domain of
/// `col_map`.
pub fn tuple_transport(tup: &Tup, col_map: &FinMap, inst_map: &FinMap) -> Result<Tup, Error> {
    let mut entries = Vec::new();
    for (i, image_col) in col_map.iter() {
        let value = tup.entry(image_col)?;
        let transported = inst_map.apply(value)?;
        entries.push((i.to_string(), transported.to_string()));
    }
    Tup::new(entries)
}
