//! Exact-arithmetic construction and analysis of a family of graded
//! Novikov-type algebras and their weight modules: cocycle-twisted group
//! algebras with a derivation, operator-identity checking, simplicity
//! witnesses over finite windows, and module classification.

pub mod cocycles;
pub mod exactmath;
pub mod groups;
pub mod io;
pub mod modules;
pub mod novikov;
pub mod spectral;
