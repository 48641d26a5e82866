//! Workspace front-end for the catdb engine: the textual declaration format,
//! CSV ingestion, canonical exporters, and the building blocks of the batch
//! CLI.

pub mod csv_io;
pub mod dsl;
pub mod export;
pub mod selftest;
pub mod workspace;
