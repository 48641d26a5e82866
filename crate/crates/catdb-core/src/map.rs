//! Finite maps given by explicit lookup tables.
//!
//! Every structure map in this crate (type maps, instance maps, column maps,
//! key maps) is a [`FinMap`]. Totality against a declared domain and codomain
//! is validated wherever an operation requires it, never assumed.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::error::Error;

/// A finite map represented as an explicit table of entries.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct FinMap {
    entries: BTreeMap<String, String>,
}

impl FinMap {
    /// Builds a map from `(element, image)` pairs.
    ///
    /// Repeating a pair is tolerated; two different images for the same
    /// element are rejected.
    pub fn new<I, K, V>(pairs: I) -> Result<Self, Error>
    where
        I: IntoIterator<Item = (K, V)>,
        K: Into<String>,
        V: Into<String>,
    {
        let mut entries: BTreeMap<String, String> = BTreeMap::new();
        for (k, v) in pairs {
            let k = k.into();
            let v = v.into();
            if let Some(old) = entries.get(&k) {
                if old != &v {
                    return Err(Error::ConflictingEntry {
                        element: k,
                        first: old.clone(),
                        second: v,
                    });
                }
            } else {
                entries.insert(k, v);
            }
        }
        Ok(FinMap { entries })
    }

    /// The identity map on `dom`.
    pub fn identity<I, S>(dom: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let entries = dom
            .into_iter()
            .map(|s| {
                let s = s.into();
                (s.clone(), s)
            })
            .collect();
        FinMap { entries }
    }

    /// Tabulates `f` over `dom`.
    pub fn tabulate<'a, I, F>(dom: I, mut f: F) -> Self
    where
        I: IntoIterator<Item = &'a str>,
        F: FnMut(&str) -> String,
    {
        let entries = dom
            .into_iter()
            .map(|s| (s.to_string(), f(s)))
            .collect();
        FinMap { entries }
    }

    pub fn get(&self, element: &str) -> Option<&str> {
        self.entries.get(element).map(|s| s.as_str())
    }

    /// Looks up `element`, failing with a totality error when absent.
    pub fn apply(&self, element: &str) -> Result<&str, Error> {
        self.get(element).ok_or_else(|| Error::NotTotal {
            element: element.to_string(),
        })
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn domain(&self) -> BTreeSet<String> {
        self.entries.keys().cloned().collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &str)> {
        self.entries.iter().map(|(k, v)| (k.as_str(), v.as_str()))
    }

    /// Sequential composition: first `self`, then `other`.
    pub fn then(&self, other: &FinMap) -> Result<FinMap, Error> {
        let mut entries = BTreeMap::new();
        for (k, v) in &self.entries {
            let w = other.apply(v)?;
            entries.insert(k.clone(), w.to_string());
        }
        Ok(FinMap { entries })
    }

    /// Verifies that the map is total on exactly `dom` and lands in `cod`.
    pub fn check_total(&self, dom: &BTreeSet<String>, cod: &BTreeSet<String>) -> Result<(), Error> {
        for d in dom {
            match self.entries.get(d) {
                None => {
                    return Err(Error::NotTotal {
                        element: d.clone(),
                    })
                }
                Some(v) if !cod.contains(v) => {
                    return Err(Error::OutsideCodomain {
                        element: d.clone(),
                        value: v.clone(),
                    })
                }
                Some(_) => {}
            }
        }
        for k in self.entries.keys() {
            if !dom.contains(k) {
                return Err(Error::OutsideDomain { element: k.clone() });
            }
        }
        Ok(())
    }

    /// The restriction of the map to `dom ∩ domain(self)`.
    pub fn restrict(&self, dom: &BTreeSet<String>) -> FinMap {
        let entries = self
            .entries
            .iter()
            .filter(|(k, _)| dom.contains(*k))
            .map(|(k, v)| (k.clone(), v.clone()))
            .collect();
        FinMap { entries }
    }

    /// The inverse map, when the map is injective.
    pub fn inverse(&self) -> Option<FinMap> {
        let mut entries = BTreeMap::new();
        for (k, v) in &self.entries {
            if entries.insert(v.clone(), k.clone()).is_some() {
                return None;
            }
        }
        Some(FinMap { entries })
    }

    /// True when every entry maps an element to itself.
    pub fn is_identity(&self) -> bool {
        self.entries.iter().all(|(k, v)| k == v)
    }

    pub fn image(&self) -> BTreeSet<String> {
        self.entries.values().cloned().collect()
    }
}

impl FromIterator<(String, String)> for FinMap {
    /// Collects pairs, keeping the last image on conflicts. Prefer
    /// [`FinMap::new`] when conflicts should be rejected.
    fn from_iter<T: IntoIterator<Item = (String, String)>>(iter: T) -> Self {
        FinMap {
            entries: iter.into_iter().collect(),
        }
    }
}
