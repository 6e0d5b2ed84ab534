//! Atlas, file formats, table reproduction and command-line front end for
//! tribracket invariants. The algorithms live in `tribracket-core`.

pub mod atlas;
pub mod chains;
pub mod cli;
pub mod format;
pub mod tables;

pub use tribracket_core as core;
