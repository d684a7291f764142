//! Instance generation, benchmark orchestration and reporting for the
//! `mgpf` command-line tool.

pub mod fixtures;
pub mod instances;
pub mod maps;
pub mod record;
pub mod suite;
pub mod synthetic;
