//! Config-driven batch runs over `sbp-core`.

pub mod config;
pub mod run;

pub use config::{parse_config, Command, ConfigError, RunConfig};
pub use run::{run, RunError, Status};
