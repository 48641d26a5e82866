//! Test support for the catdb engine: shared fixtures, seeded random data
//! generators, and brute-force oracles kept deliberately independent of the
//! engine's own algorithms.

pub mod fixtures;
pub mod gen;
pub mod oracle;
