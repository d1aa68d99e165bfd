//! The experiment runner: TOML configs in, CSV or JSON constants reports out.

pub mod commands;
pub mod config;
pub mod report;
pub mod verify;

pub use commands::{recheck, run_command, Command, RecheckLine};
pub use config::{ExperimentConfig, Format, Target};
pub use report::{read_csv_rows, ConstantsReport, Row, WitnessDigest};
pub use verify::{verify_suites, SuiteOutcome};
