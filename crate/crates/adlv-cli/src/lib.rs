//! Command dispatch, datum configuration and JSON-lines records for the `adlv` tool.

pub mod commands;
pub mod config;
pub mod record;

pub use commands::{run, Command, Options};
pub use config::DatumConfig;
pub use record::{ResultRecord, Status};
