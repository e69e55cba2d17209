//! The command layer behind the `normlogic` binary: configuration, file
//! formats, verification suites and the four commands.

mod commands;
mod config;
mod files;
mod report;
pub mod suites;

use std::path::Path;

use thiserror::Error;

use crate::geometry::GeometryError;
use crate::logic::{LogicError, ParseError};
use crate::reduction::ReductionError;

pub use commands::{
    cmd_compile, cmd_construct, cmd_eval, cmd_verify, dump_boundary, load_l1, CompileOptions, CompileResult,
    ConstructResult, EvalMode, EvalVerdict,
};
pub use config::{Config, ConfigOverrides, CONFIG_ENV};
pub use files::{assignment_json, load_assignment, sha256_hex, CompileManifest, ParamsDoc, SCHEMA};
pub use report::{Case, Status, SuiteReport};
pub use suites::{run_suite, suite_names, SuiteContext};

/// Exit code for success.
pub const EXIT_OK: i32 = 0;
/// Exit code for a failed check, a false verdict or a failed construction.
pub const EXIT_FAILURE: i32 = 1;
/// Exit code for usage, parse, config and input-file errors.
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("config: {0}")]
    Config(String),
    #[error("params: {0}")]
    Params(String),
    #[error("{path}: {message}")]
    Io { path: String, message: String },
    #[error("parse error at offset {}: {}", .0.offset, .0.message)]
    Parse(ParseError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Logic(#[from] LogicError),
    #[error(transparent)]
    Reduction(ReductionError),
}

impl HarnessError {
    pub fn io(path: &Path, e: std::io::Error) -> Self {
        HarnessError::Io { path: path.display().to_string(), message: e.to_string() }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            HarnessError::Geometry(_) | HarnessError::Reduction(_) => EXIT_FAILURE,
            _ => EXIT_USAGE,
        }
    }
}

impl From<ParseError> for HarnessError {
    fn from(e: ParseError) -> Self {
        HarnessError::Parse(e)
    }
}

impl From<ReductionError> for HarnessError {
    fn from(e: ReductionError) -> Self {
        match e {
            ReductionError::Parse(p) => HarnessError::Parse(p),
            ReductionError::ReservedVariable(_) | ReductionError::InvalidDimension(_) | ReductionError::SortError(_) => {
                HarnessError::Usage(e.to_string())
            }
            other => HarnessError::Reduction(other),
        }
    }
}
