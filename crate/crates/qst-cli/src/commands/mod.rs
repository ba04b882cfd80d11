//! Subcommand implementations: each reads its config blocks, drives the
//! library, and persists JSON and CSV artifacts.

pub mod bench;
pub mod multi;
pub mod pairs;
pub mod solve;
pub mod spectrum;
pub mod usweep;
