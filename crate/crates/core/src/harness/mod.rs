//! Scenario files, parameter sweeps and run output directories.

mod output;
mod scenario;
mod sweep;

use thiserror::Error;

use crate::engine::EngineError;
use crate::mapping::MappingError;

pub use output::{emit_timeline, remap_run_dir, write_run_dir, RemapOptions, RunFiles};
pub use scenario::{apply_overrides, Scenario, FORMAT_VERSION, PAPER_ARENA};
pub use sweep::{
    run_sweep, write_sweep, AxisSummary, AxisValue, RunSummary, Stat, SweepAxis, SweepResults,
    SweepRow, SweepSpec,
};

#[derive(Debug, Error)]
pub enum HarnessError {
    /// The file is not valid for the format; `line` is 1-based, 0 if unknown.
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("invalid scenario: {0}")]
    InvalidScenario(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error(transparent)]
    Mapping(#[from] MappingError),
}

/// Reports an engine-level rejection as a scenario problem, without doubling
/// the "invalid scenario" prefix.
pub(crate) fn invalid(e: EngineError) -> HarnessError {
    match e {
        EngineError::InvalidScenario(msg) => HarnessError::InvalidScenario(msg),
        other => HarnessError::InvalidScenario(other.to_string()),
    }
}
