//! Verification catalog, configuration, reports and grid-function files on
//! top of `epr-phase`.

pub mod catalog;
pub mod config;
pub mod gridio;
pub mod report;
pub mod runner;

pub use catalog::CATALOG_SIZE;
pub use config::{parse_config, ConfigError, Suite, SuiteConfig};
pub use report::{CheckRecord, Status, SuiteReport};
pub use runner::run_suite;
