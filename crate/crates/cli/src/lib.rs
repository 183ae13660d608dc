//! Batch front-end for the two-mode simulator: configuration, figure presets,
//! CSV output and validation suites.

pub mod app;
pub mod checks;
pub mod config;
pub mod csv;
pub mod presets;
pub mod run;
pub mod validate;

pub use config::{parse_config, ConfigError, Initial, Mode, RunConfig, Suite, SweepAxis};
pub use presets::{preset, FigureId};
pub use validate::{run_validate, Report};
