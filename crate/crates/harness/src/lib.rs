//! Scenario runner for `bochner-core`: reads a TOML scenario, executes its
//! checks in order and assembles a deterministic report.

pub mod report;
pub mod runner;
pub mod scenario;

pub use report::{CheckRecord, Metadata, Report, Table};
pub use runner::{run_scenario, RunOptions, RunOutput};
pub use scenario::{load_scenario, parse_scenario, resolve_scenario, Operation, Scenario};

/// Problems detected before any check runs. These map to exit code 2.
#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read scenario: {0}")]
    Io(String),
    #[error("cannot parse scenario: {0}")]
    Parse(String),
    #[error("unresolved scenario: {0}")]
    Resolve(String),
    #[error("invalid scenario: {0}")]
    Invalid(String),
}

pub const EXIT_PASS: i32 = 0;
pub const EXIT_CHECK_FAILURE: i32 = 1;
pub const EXIT_CONFIG_ERROR: i32 = 2;
