//! Runs an external dependency parser over numeral-substituted copies of
//! treebank sentences and reports how consistently it parses them.
//!
//! The algorithms live in [`udconsist_core`]; this crate adds the parser
//! subprocess runner, configuration, report files and the CLI.

pub mod cli;
pub mod config;
pub mod manifest;
pub mod pipeline;
pub mod report;
pub mod runner;

pub use udconsist_core as core;
