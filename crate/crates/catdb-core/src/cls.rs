//! Classifications and infomorphisms.
//!
//! A classification is a finite incidence relation between a set of type
//! names and a set of instance tokens. Infomorphisms are the contravariant
//! maps between classifications from information-flow theory: a type map
//! forward, an instance map backward, linked by a biconditional.

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;

use crate::error::Error;
use crate::map::FinMap;

/// A finite classification `⟨types, instances, incidence⟩`.
///
/// Incidence pairs are `(instance, type)`; `holds(y, x)` reads "`y` is
/// classified by `x`".
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Classification {
    types: BTreeSet<String>,
    instances: BTreeSet<String>,
    incidence: BTreeSet<(String, String)>,
}

impl Classification {
    /// Validates that every incidence pair references a declared instance and
    /// a declared type, and that the listed names are duplicate-free.
    pub fn new<T, I, P>(types: T, instances: I, incidence: P) -> Result<Self, Error>
    where
        T: IntoIterator,
        T::Item: Into<String>,
        I: IntoIterator,
        I::Item: Into<String>,
        P: IntoIterator<Item = (String, String)>,
    {
        let types = collect_unique(types, "type")?;
        let instances = collect_unique(instances, "instance")?;
        let mut inc = BTreeSet::new();
        for (y, x) in incidence {
            if !instances.contains(&y) || !types.contains(&x) {
                return Err(Error::BadIncidence {
                    instance: y,
                    type_name: x,
                });
            }
            inc.insert((y, x));
        }
        Ok(Classification {
            types,
            instances,
            incidence: inc,
        })
    }

    pub fn empty() -> Self {
        Classification {
            types: BTreeSet::new(),
            instances: BTreeSet::new(),
            incidence: BTreeSet::new(),
        }
    }

    pub fn types(&self) -> &BTreeSet<String> {
        &self.types
    }

    pub fn instances(&self) -> &BTreeSet<String> {
        &self.instances
    }

    pub fn incidence(&self) -> &BTreeSet<(String, String)> {
        &self.incidence
    }

    /// Does instance `y` fall under type `x`?
    pub fn holds(&self, y: &str, x: &str) -> bool {
        self.incidence.contains(&(y.to_string(), x.to_string()))
    }

    /// All instances classified by `x`, in lexicographic order.
    pub fn extent(&self, x: &str) -> Result<BTreeSet<String>, Error> {
        if !self.types.contains(x) {
            return Err(Error::UnknownType(x.to_string()));
        }
        Ok(self
            .incidence
            .iter()
            .filter(|(_, t)| t == x)
            .map(|(y, _)| y.clone())
            .collect())
    }

    pub fn identity_infomorphism(&self) -> Infomorphism {
        Infomorphism {
            source: self.clone(),
            target: self.clone(),
            type_map: FinMap::identity(self.types.iter().cloned()),
            inst_map: FinMap::identity(self.instances.iter().cloned()),
        }
    }
}

fn collect_unique<T>(items: T, kind: &'static str) -> Result<BTreeSet<String>, Error>
where
    T: IntoIterator,
    T::Item: Into<String>,
{
    let mut out = BTreeSet::new();
    for item in items {
        let item = item.into();
        if !out.insert(item.clone()) {
            return Err(Error::Duplicate { kind, name: item });
        }
    }
    Ok(out)
}

/// One failure of the infomorphism biconditional at a pair `(instance, type)`.
///
/// The biconditional requires `inst_map(y) ⊨_src x  ⇔  y ⊨_tgt type_map(x)`
/// for every target instance `y` and source type `x`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BiconditionViolation {
    /// The target-side instance `y`.
    pub instance: String,
    /// The source-side type `x`.
    pub type_name: String,
    /// Whether `inst_map(y) ⊨_src x` held.
    pub transported_holds: bool,
    /// Whether `y ⊨_tgt type_map(x)` held.
    pub direct_holds: bool,
}

impl fmt::Display for BiconditionViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({}, {}): transported incidence {} but direct incidence {}",
            self.instance, self.type_name, self.transported_holds, self.direct_holds
        )
    }
}

/// Result of checking the infomorphism condition over all pairs.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct InfomorphismReport {
    pub violations: Vec<BiconditionViolation>,
}

impl InfomorphismReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for InfomorphismReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            return write!(f, "valid");
        }
        let items: Vec<String> = self.violations.iter().map(|v| v.to_string()).collect();
        write!(f, "{}", items.join("; "))
    }
}

/// Checks the infomorphism condition for `(type_map, inst_map)` between
/// `source` and `target`, listing every violating `(instance, type)` pair.
///
/// `type_map` must be total on the source types into the target types and
/// `inst_map` total on the target instances into the source instances;
/// totality failures are hard errors rather than report entries.
pub fn check_infomorphism(
    source: &Classification,
    target: &Classification,
    type_map: &FinMap,
    inst_map: &FinMap,
) -> Result<InfomorphismReport, Error> {
    type_map.check_total(source.types(), target.types())?;
    inst_map.check_total(target.instances(), source.instances())?;
    let mut violations = Vec::new();
    for y in target.instances() {
        let gy = inst_map.apply(y)?;
        for x in source.types() {
            let fx = type_map.apply(x)?;
            let transported = source.holds(gy, x);
            let direct = target.holds(y, fx);
            if transported != direct {
                violations.push(BiconditionViolation {
                    instance: y.clone(),
                    type_name: x.clone(),
                    transported_holds: transported,
                    direct_holds: direct,
                });
            }
        }
    }
    Ok(InfomorphismReport { violations })
}

/// A validated infomorphism `source ⇄ target`.
///
/// The type map runs forward (`source` types to `target` types) and the
/// instance map backward (`target` instances to `source` instances).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Infomorphism {
    source: Classification,
    target: Classification,
    type_map: FinMap,
    inst_map: FinMap,
}

impl Infomorphism {
    pub fn new(
        source: Classification,
        target: Classification,
        type_map: FinMap,
        inst_map: FinMap,
    ) -> Result<Self, Error> {
        let report = check_infomorphism(&source, &target, &type_map, &inst_map)?;
        if !report.is_valid() {
            return Err(Error::InvalidInfomorphism(report));
        }
        Ok(Infomorphism {
            source,
            target,
            type_map,
            inst_map,
        })
    }

    pub fn identity(e: &Classification) -> Self {
        e.identity_infomorphism()
    }

    pub fn source(&self) -> &Classification {
        &self.source
    }

    pub fn target(&self) -> &Classification {
        &self.target
    }

    pub fn type_map(&self) -> &FinMap {
        &self.type_map
    }

    pub fn inst_map(&self) -> &FinMap {
        &self.inst_map
    }

    /// Standard composition `self ∘ inner`: with `inner : E'' ⇄ E'` and
    /// `self : E' ⇄ E`, the composite runs `E'' ⇄ E`.
    pub fn compose(&self, inner: &Infomorphism) -> Result<Infomorphism, Error> {
        if inner.target != self.source {
            return Err(Error::BoundaryMismatch(
                "inner target differs from outer source".into(),
            ));
        }
        let type_map = inner.type_map.then(&self.type_map)?;
        let inst_map = self.inst_map.then(&inner.inst_map)?;
        Infomorphism::new(inner.source.clone(), self.target.clone(), type_map, inst_map)
    }

    /// True for identity infomorphisms, the fiber case.
    pub fn is_identity(&self) -> bool {
        self.source == self.target && self.type_map.is_identity() && self.inst_map.is_identity()
    }
}
