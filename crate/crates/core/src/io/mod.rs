//! Run configuration, presets, file formats and the command layer behind the
//! command-line tool.

mod commands;
mod config;
mod format;
mod validate;

pub use commands::{analyze, ensemble, run_validation, simulate};
pub use config::{parse_config, parse_config_with, preset_names, preset_text, RunConfig};
pub use format::{
    read_trajectory_csv, write_ensemble_csv, write_trajectory_csv, ParseFailure, SummaryDocument,
    TrajectoryTag, VERSION,
};
pub use validate::{validate, Check, ValidationReport};
