//! Batch runner behind the `modqed` binary.

pub mod config;
pub mod output;
pub mod presets;
pub mod run;
pub mod svg;

pub use config::{parse_config, ConfigError, Overrides, RunFormulation, RunSpec};
pub use presets::{preset, PRESET_NAMES};
pub use run::{execute, run, run_preset, RunError, RunOutput, SummaryReport, VALIDATION_GATE};
