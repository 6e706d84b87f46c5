//! File front end for the `bipolar-fre` solver: problem files in, JSON
//! reports out.

use std::path::PathBuf;

use thiserror::Error;

pub mod problem;
pub mod report;

pub use problem::{emit, parse_problem, parse_problem_str, ObjectiveSpec, Problem, ProblemFile, TNormSpec};
pub use report::{Outcome, PipelineOptions, Status};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },

    /// serde_json already reports the line and column.
    #[error("{origin}: {source}")]
    Parse { origin: String, source: serde_json::Error },

    #[error("field `{field}`: {source}")]
    Field { field: &'static str, source: bipolar_fre::Error },

    #[error("invalid problem:\n  {}", .0.join("\n  "))]
    Invalid(Vec<String>),

    #[error("{0}")]
    Solver(#[from] bipolar_fre::Error),

    #[error("{0}")]
    Usage(String),
}
