//! File formats, reproduction tables, and report shapes behind the
//! `qndsim` command-line tool.

pub mod artifacts;
pub mod config;
pub mod covio;
pub mod estimate;
pub mod fig3;
