//! A categorical relational database engine.
//!
//! Data lives in *classifications* (finite incidence relations between type
//! names and instance tokens) and *tables* (classified tuples indexed by
//! primary keys). Tables over a fixed classification form a category whose
//! morphisms pair a backward column map with a forward key map; that category
//! has all finite limits (joins, with selection as a special case) and all
//! finite colimits (distributed unions). *Infomorphisms* move tables between
//! classifications, preserving joins. *Databases* package a functorial family
//! of tables over a finite category of relation symbols; their joins carry
//! the schema's colimit reference signature, and databases in unified form
//! admit foreign keys, referential integrity, and a sketch-graph reading.
//!
//! All values are immutable after validation and every operation is a pure
//! function of its inputs, so concurrent reads are always safe. Returned
//! sets and maps are ordered lexicographically to keep output reproducible
//! byte for byte.

pub mod cls;
pub mod colimits;
pub mod database;
pub mod error;
pub mod fincat;
pub mod limits;
pub mod map;
mod quotient;
pub mod sig;
pub mod table;
pub mod unified;

pub use cls::{check_infomorphism, Classification, Infomorphism, InfomorphismReport};
pub use colimits::{
    coproduct, colimit, comediating_morphism, initial_morphism, initial_table, ColimitResult,
    KeyClass,
};
pub use database::{
    check_db_morphism, compose_db_morphisms, db_morphism_of_infomorphism, db_of_classification,
    Database, DatabaseMorphism, DbMorphismReport, DbSchema, FunctorData, ReferenceSchema,
};
pub use error::Error;
pub use fincat::{
    check_cocone, check_cone, Cocone, Cone, ConeReport, DiagramReport, FinCat, TableDiagram,
};
pub use limits::{
    family_name, limit, mediating_morphism, pullback, select, terminal_table, ColumnClass,
    LimitResult,
};
pub use map::FinMap;
pub use sig::{
    check_signature_morphism, classify_tuple, f_star, sigma_f, tuple_transport, Signature, Tup,
};
pub use table::{
    check_table_morphism, compose_table_morphisms, migrate, migrate_morphism, tables_isomorphic,
    tables_isomorphic_with, IsoCaps, Table, TableIso, TableMorphism, TableMorphismReport,
};
pub use unified::{
    check_referential_integrity, is_unified, relation_classification, sketch_graph,
    sketch_interpretation, RefIntegrityReport, SketchGraph, SketchInterpretation, UnifiedReport,
};
