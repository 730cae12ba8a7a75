//! Batch driver for `weightraise-core`: run configuration, JSON/CSV reports
//! and an on-disk operator cache.

pub mod cache;
pub mod config;
pub mod report;
pub mod run;

pub use cache::{DiskCache, CACHE_VERSION};
pub use config::{Command, Format, RunConfig, Subgroup};
pub use report::{Report, SCHEMA_VERSION};
pub use run::{execute, run, CliError};
