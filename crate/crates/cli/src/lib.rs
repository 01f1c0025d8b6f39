//! Verification sweeps over finite quantum groups, shared by the `fqg`
//! binary and the acceptance suite.

pub mod commands;
pub mod config;
pub mod error;
pub mod report;

pub use commands::run;
pub use config::{Command, EnsembleSpec, OutputFormat, RingSpec, RunConfig, StateSpec};
pub use error::CliError;
pub use report::{ReportDocument, Verdict};
